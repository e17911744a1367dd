#pragma once

// Random measurement generation on the Bloch sphere, deterministic
// counter-based RNG streams, and finite-shot multinomial sampling.

#include <array>
#include <cstdint>
#include <vector>

#include "steerlab/quantum.hpp"

namespace steerlab {

/// Deterministic 64-bit stream (splitmix64). Streams are derived from a
/// (seed, trial-index) pair so trials can run in any order with identical
/// results; output is platform independent.
class RngStream {
 public:
  explicit RngStream(std::uint64_t state) : state_(state) {}
  static RngStream for_trial(std::uint64_t seed, std::uint64_t trial_index);

  std::uint64_t next_u64();
  /// Uniform double in [0, 1).
  double next_double();
  /// Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

enum class SamplerMode { HaarRotation, FibonacciLattice };

struct TriadSampler {
  SamplerMode mode = SamplerMode::HaarRotation;
  int lattice_size = 600;
  std::uint64_t seed = 0;
};

struct OrthogonalTriad {
  std::array<Vec3, 3> axes;
};

struct ShotModel {
  long long shots_per_pair = 1000;
  explicit ShotModel(long long shots);
};

/// Golden-angle spiral lattice of K quasi-uniform unit vectors.
std::vector<Vec3> fibonacci_points(int K);

/// A right-handed orthonormal triad. Haar mode rotates the canonical frame
/// by a uniformly random rotation (unit-quaternion method); Fibonacci mode
/// draws the first axis from the lattice and a random orthogonal second.
OrthogonalTriad sample_triad(const TriadSampler& sampler, RngStream& stream);

/// One two-setting selection per side, chosen by omitting one axis.
struct PairSelection {
  std::array<int, 2> alice_axes;
  std::array<int, 2> bob_axes;
  int alice_omitted;
  int bob_omitted;
};

/// All 9 combinations of axis pairs, lexicographic by omitted indices with
/// omission order (axis 2, axis 1, axis 0) per side. The first entry is the
/// (A1A2, B1B2) pairing.
std::vector<PairSelection> pair_combinations();

/// Multinomial empirical frequencies: shots_per_pair draws over the four
/// outcomes for each (x, y).
JointDistribution sample_counts(const JointDistribution& ideal, const ShotModel& model,
                                RngStream& stream);

}  // namespace steerlab
