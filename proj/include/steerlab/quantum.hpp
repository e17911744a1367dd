#pragma once

// Complex linear algebra for qubit pairs: states, POVMs, assemblages,
// joint distributions, correlation matrices and signalling diagnostics.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

namespace steerlab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;

namespace tol {
inline constexpr double hermiticity = 1e-12;
inline constexpr double psd_eig = 1e-10;
inline constexpr double trace_one = 1e-12;
inline constexpr double unit_norm = 1e-9;
inline constexpr double normalization = 1e-9;
inline constexpr double nonneg_entry = 1e-12;
}  // namespace tol

/// Pauli matrix; k = 0 gives the identity, k = 1,2,3 give sigma_x/y/z.
CMatrix pauli(int k);

/// n . sigma for a real 3-vector n (not necessarily unit).
CMatrix bloch_operator(const Vec3& n);

double max_abs(const CMatrix& m);
bool is_hermitian(const CMatrix& m, double tolerance = tol::hermiticity);
double min_eigenvalue(const CMatrix& hermitian);

struct HermitianOperator {
  CMatrix entries;

  explicit HermitianOperator(CMatrix m);
  int dim() const { return static_cast<int>(entries.rows()); }
};

struct DensityMatrix {
  HermitianOperator op;

  explicit DensityMatrix(CMatrix m);
  int dim() const { return op.dim(); }
  const CMatrix& mat() const { return op.entries; }
};

struct WernerParams {
  double mu;
  explicit WernerParams(double mu_);
};

/// A dichotomic projective qubit measurement along a Bloch direction.
/// effects[0] corresponds to outcome +1, effects[1] to outcome -1.
struct MeasurementSetting {
  Vec3 bloch;
  std::array<CMatrix, 2> effects;

  /// The +/-1 observable, effects[0] - effects[1].
  CMatrix observable() const { return effects[0] - effects[1]; }
};

struct MeasurementSet {
  std::vector<MeasurementSetting> settings;

  int n_settings() const { return static_cast<int>(settings.size()); }
};

/// Subnormalized conditional states sigma_{a|x} held by the trusted party.
/// Members are stored with index a + n_a * x. Normalized assemblages have
/// common per-x trace 1; rescaled sigma-tilde assemblages share 1 + t.
struct Assemblage {
  std::vector<CMatrix> members;
  int n_a = 0;
  int n_x = 0;

  Assemblage(std::vector<CMatrix> members_, int n_a_, int n_x_);
  const CMatrix& at(int a, int x) const { return members[a + n_a * x]; }
  /// Sum_a sigma_{a|x} for x = 0 (identical across x by construction).
  CMatrix reduced_state() const;
  double common_trace() const;
};

/// p(a,b|x,y) as a dense real table.
struct JointDistribution {
  std::vector<double> p;
  int n_x = 0, n_y = 0, n_a = 0, n_b = 0;

  JointDistribution(std::vector<double> p_, int n_x_, int n_y_, int n_a_, int n_b_);
  double at(int x, int y, int a, int b) const {
    return p[((x * n_y + y) * n_a + a) * n_b + b];
  }
  double& at(int x, int y, int a, int b) {
    return p[((x * n_y + y) * n_a + a) * n_b + b];
  }
};

/// M_jk = <A_j B_k>, two-point correlators for +/-1-valued outcomes.
struct CorrelationMatrix {
  Eigen::MatrixXd M;
  explicit CorrelationMatrix(Eigen::MatrixXd m);
};

/// mu |psi_s><psi_s| + (1-mu)/4 I_4, with |psi_s> = (|10> - |01>)/sqrt(2).
/// Tensor order is Alice x Bob.
DensityMatrix werner_state(const WernerParams& params);

/// Projectors (I +/- bloch.sigma)/2; renormalizes inputs within 1e-9 of unit.
MeasurementSetting projective_setting(const Vec3& bloch);

MeasurementSet pauli_triad();

/// sigma_{a|x} = tr_A[(A_{a|x} (x) I) rho].
Assemblage assemblage_from_state(const DensityMatrix& state, const MeasurementSet& alice);

/// p(a,b|x,y) = tr[(A_{a|x} (x) B_{b|y}) rho].
JointDistribution joint_distribution(const DensityMatrix& state, const MeasurementSet& alice,
                                     const MeasurementSet& bob);

/// p(a,b|x,y) = tr[sigma_{a|x} B_{b|y}] for an assemblage already in hand.
JointDistribution joint_from_assemblage(const Assemblage& assemblage, const MeasurementSet& bob);

CorrelationMatrix correlation_matrix(const JointDistribution& dist);

/// Largest marginal deviation across the other party's settings; zero iff
/// the distribution is non-signalling.
double signalling_magnitude(const JointDistribution& dist);

/// tr[state * target] for a rank-1 projector target.
double fidelity_with_pure(const DensityMatrix& state, const DensityMatrix& target);

}  // namespace steerlab
