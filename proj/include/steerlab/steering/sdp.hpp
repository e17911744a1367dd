#pragma once

// Steering robustness (SR), adapted steering robustness (ASR) and the
// non-signalling algorithm (NSA), assembled on the conic solver.

#include <vector>

#include "steerlab/conic/solver.hpp"
#include "steerlab/quantum.hpp"

namespace steerlab {

/// All deterministic outcome assignments lambda: x -> a.
struct DeterministicStrategySet {
  int n_x = 0;
  int n_a = 0;
  std::vector<std::vector<int>> table;  // table[lambda][x] = a

  int size() const { return static_cast<int>(table.size()); }
};

/// Ordered by the base-n_a digit expansion of lambda (x = 0 least significant).
DeterministicStrategySet enumerate_strategies(int n_x, int n_a);

enum class WitnessMode { FreeF, BobRestricted };

struct SteeringFunctional {
  WitnessMode mode = WitnessMode::BobRestricted;
  int n_x = 0, n_y = 0, n_a = 0, n_b = 0;
  /// alpha_{xy}^{ab}, indexed ((x*n_y+y)*n_a+a)*n_b+b; empty in FreeF mode.
  std::vector<double> alpha;
  /// F_{a|x} (FreeF) or the induced F-tilde_{a|x} (BobRestricted), index a + n_a*x.
  std::vector<CMatrix> operators;
  /// Bob's Bloch directions (BobRestricted mode), for serialization.
  std::vector<Vec3> bob_bloch;

  double alpha_at(int x, int y, int a, int b) const {
    return alpha[((x * n_y + y) * n_a + a) * n_b + b];
  }
};

struct SteeringResult {
  conic::Status status = conic::Status::NumericalFailure;
  double value = 0.0;
  SteeringFunctional witness;
  conic::VerificationReport verification;
};

/// Steering robustness SDP over free Hermitian witness operators.
SteeringResult steering_robustness(const Assemblage& assemblage);

/// Witness restricted to real combinations of Bob's measurement operators;
/// returns status unbounded (not an error) on signalling input.
SteeringResult adapted_steering_robustness(const JointDistribution& dist,
                                           const MeasurementSet& bob);

/// sum alpha * p - 1; requires an alpha table (BobRestricted witness).
double evaluate_witness(const SteeringFunctional& witness, const JointDistribution& dist);

struct NsaResult {
  double t = 0.0;             // signalling robustness
  Assemblage sigma_tilde;     // common per-x trace 1 + t
  JointDistribution ns_dist;  // tr[sigma-tilde B] / (1 + t)
};

/// Minimal signalling admixture that renders the data non-signalling and
/// realisable with Bob's measurements.
NsaResult nonsignalling_projection(const JointDistribution& dist_exp, const MeasurementSet& bob);

}  // namespace steerlab
