#include "steerlab/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace steerlab {

CMatrix pauli(int k) {
  CMatrix m(2, 2);
  const Complex i(0.0, 1.0);
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::domain_error("pauli: index must be 0..3");
  }
  return m;
}

CMatrix bloch_operator(const Vec3& n) {
  return n.x() * pauli(1) + n.y() * pauli(2) + n.z() * pauli(3);
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const CMatrix& m, double tolerance) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tolerance;
}

double min_eigenvalue(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

HermitianOperator::HermitianOperator(CMatrix m) : entries(std::move(m)) {
  if (!is_hermitian(entries)) {
    throw std::domain_error("HermitianOperator: entries are not Hermitian within 1e-12");
  }
}

DensityMatrix::DensityMatrix(CMatrix m) : op(std::move(m)) {
  const double tr = op.entries.trace().real();
  if (std::abs(tr - 1.0) > tol::trace_one) {
    throw std::domain_error("DensityMatrix: trace differs from 1");
  }
  if (min_eigenvalue(op.entries) < -tol::psd_eig) {
    throw std::domain_error("DensityMatrix: negative eigenvalue");
  }
}

WernerParams::WernerParams(double mu_) : mu(mu_) {
  if (!(mu >= 0.0 && mu <= 1.0)) {
    throw std::domain_error("WernerParams: mu must lie in [0,1]");
  }
}

Assemblage::Assemblage(std::vector<CMatrix> members_, int n_a_, int n_x_)
    : members(std::move(members_)), n_a(n_a_), n_x(n_x_) {
  if (static_cast<int>(members.size()) != n_a * n_x || n_a < 1 || n_x < 1) {
    throw std::domain_error("Assemblage: member count does not match n_a * n_x");
  }
  const int d = static_cast<int>(members[0].rows());
  for (const CMatrix& m : members) {
    if (m.rows() != d || !is_hermitian(m)) {
      throw std::domain_error("Assemblage: members must be equal-sized Hermitian matrices");
    }
    if (min_eigenvalue(m) < -tol::psd_eig) {
      throw std::domain_error("Assemblage: member is not PSD");
    }
  }
  CMatrix reduced = CMatrix::Zero(d, d);
  for (int a = 0; a < n_a; ++a) reduced += at(a, 0);
  for (int x = 1; x < n_x; ++x) {
    CMatrix r = CMatrix::Zero(d, d);
    for (int a = 0; a < n_a; ++a) r += at(a, x);
    if (max_abs(r - reduced) > tol::normalization) {
      throw std::domain_error("Assemblage: reduced state depends on the setting");
    }
  }
}

CMatrix Assemblage::reduced_state() const {
  CMatrix r = CMatrix::Zero(members[0].rows(), members[0].cols());
  for (int a = 0; a < n_a; ++a) r += at(a, 0);
  return r;
}

double Assemblage::common_trace() const { return reduced_state().trace().real(); }

JointDistribution::JointDistribution(std::vector<double> p_, int n_x_, int n_y_, int n_a_,
                                     int n_b_)
    : p(std::move(p_)), n_x(n_x_), n_y(n_y_), n_a(n_a_), n_b(n_b_) {
  if (static_cast<int>(p.size()) != n_x * n_y * n_a * n_b) {
    throw std::domain_error("JointDistribution: table size mismatch");
  }
  for (double v : p) {
    if (v < -tol::nonneg_entry) {
      throw std::domain_error("JointDistribution: negative probability entry");
    }
  }
  for (int x = 0; x < n_x; ++x) {
    for (int y = 0; y < n_y; ++y) {
      double s = 0.0;
      for (int a = 0; a < n_a; ++a)
        for (int b = 0; b < n_b; ++b) s += at(x, y, a, b);
      if (std::abs(s - 1.0) > tol::normalization) {
        throw std::domain_error("JointDistribution: setting pair is not normalized");
      }
    }
  }
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd m) : M(std::move(m)) {
  if ((M.cwiseAbs().array() > 1.0 + 1e-9).any()) {
    throw std::domain_error("CorrelationMatrix: correlator outside [-1,1]");
  }
}

DensityMatrix werner_state(const WernerParams& params) {
  Eigen::Vector4cd psi;
  psi << 0.0, -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;  // (|10>-|01>)/sqrt(2)
  CMatrix singlet = psi * psi.adjoint();
  CMatrix rho = params.mu * singlet + (1.0 - params.mu) / 4.0 * CMatrix::Identity(4, 4);
  return DensityMatrix(rho);
}

MeasurementSetting projective_setting(const Vec3& bloch) {
  const double n = bloch.norm();
  if (std::abs(n - 1.0) > tol::unit_norm) {
    throw std::domain_error("projective_setting: Bloch vector is not unit norm");
  }
  Vec3 u = bloch / n;
  CMatrix id = CMatrix::Identity(2, 2);
  CMatrix nsig = bloch_operator(u);
  return MeasurementSetting{u, {0.5 * (id + nsig), 0.5 * (id - nsig)}};
}

MeasurementSet pauli_triad() {
  return MeasurementSet{{projective_setting(Vec3::UnitX()), projective_setting(Vec3::UnitY()),
                         projective_setting(Vec3::UnitZ())}};
}

namespace {

// tr_A of a 4x4 operator on Alice x Bob.
CMatrix partial_trace_alice(const CMatrix& m) {
  CMatrix r = CMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r(i, j) += m(2 * k + i, 2 * k + j);
  return r;
}

// Accept eigensolver-scale negatives down to -1e-10 and clip them to zero
// so downstream solvers see exact PSD data.
CMatrix clip_psd(const CMatrix& m) {
  CMatrix h = 0.5 * (m + m.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() >= 0.0) return h;
  for (int i = 0; i < ev.size(); ++i) ev(i) = std::max(ev(i), 0.0);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix kron2(const CMatrix& a, const CMatrix& b) {
  CMatrix r(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
  return r;
}

}  // namespace

Assemblage assemblage_from_state(const DensityMatrix& state, const MeasurementSet& alice) {
  if (state.dim() != 4) {
    throw std::domain_error("assemblage_from_state: state must be a two-qubit 4x4 matrix");
  }
  const int n_x = alice.n_settings();
  std::vector<CMatrix> members(2 * n_x);
  for (int x = 0; x < n_x; ++x) {
    for (int a = 0; a < 2; ++a) {
      CMatrix op = kron2(alice.settings[x].effects[a], CMatrix::Identity(2, 2));
      members[a + 2 * x] = clip_psd(partial_trace_alice(op * state.mat()));
    }
  }
  return Assemblage(std::move(members), 2, n_x);
}

JointDistribution joint_distribution(const DensityMatrix& state, const MeasurementSet& alice,
                                     const MeasurementSet& bob) {
  if (state.dim() != 4) {
    throw std::domain_error("joint_distribution: state must be a two-qubit 4x4 matrix");
  }
  const int n_x = alice.n_settings();
  const int n_y = bob.n_settings();
  std::vector<double> p(n_x * n_y * 4);
  for (int x = 0; x < n_x; ++x)
    for (int y = 0; y < n_y; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          CMatrix op = kron2(alice.settings[x].effects[a], bob.settings[y].effects[b]);
          double v = (op * state.mat()).trace().real();
          p[((x * n_y + y) * 2 + a) * 2 + b] = std::max(v, 0.0);
        }
  return JointDistribution(std::move(p), n_x, n_y, 2, 2);
}

JointDistribution joint_from_assemblage(const Assemblage& assemblage, const MeasurementSet& bob) {
  const int n_x = assemblage.n_x;
  const int n_y = bob.n_settings();
  std::vector<double> p(n_x * n_y * 4);
  for (int x = 0; x < n_x; ++x)
    for (int y = 0; y < n_y; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          double v = (assemblage.at(a, x) * bob.settings[y].effects[b]).trace().real();
          p[((x * n_y + y) * 2 + a) * 2 + b] = std::max(v, 0.0);
        }
  return JointDistribution(std::move(p), n_x, n_y, 2, 2);
}

CorrelationMatrix correlation_matrix(const JointDistribution& dist) {
  if (dist.n_a != 2 || dist.n_b != 2) {
    throw std::runtime_error("correlation_matrix: only binary +/-1 outcomes are supported");
  }
  Eigen::MatrixXd m(dist.n_x, dist.n_y);
  for (int x = 0; x < dist.n_x; ++x)
    for (int y = 0; y < dist.n_y; ++y) {
      double c = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double va = (a == 0) ? 1.0 : -1.0;
          const double vb = (b == 0) ? 1.0 : -1.0;
          c += va * vb * dist.at(x, y, a, b);
        }
      m(x, y) = std::clamp(c, -1.0, 1.0);
    }
  return CorrelationMatrix(m);
}

double signalling_magnitude(const JointDistribution& dist) {
  double worst = 0.0;
  // Alice's marginal p(a|x) must not depend on y.
  for (int a = 0; a < dist.n_a; ++a)
    for (int x = 0; x < dist.n_x; ++x)
      for (int y = 0; y < dist.n_y; ++y)
        for (int y2 = y + 1; y2 < dist.n_y; ++y2) {
          double m1 = 0.0, m2 = 0.0;
          for (int b = 0; b < dist.n_b; ++b) {
            m1 += dist.at(x, y, a, b);
            m2 += dist.at(x, y2, a, b);
          }
          worst = std::max(worst, std::abs(m1 - m2));
        }
  // Bob's marginal p(b|y) must not depend on x.
  for (int b = 0; b < dist.n_b; ++b)
    for (int y = 0; y < dist.n_y; ++y)
      for (int x = 0; x < dist.n_x; ++x)
        for (int x2 = x + 1; x2 < dist.n_x; ++x2) {
          double m1 = 0.0, m2 = 0.0;
          for (int a = 0; a < dist.n_a; ++a) {
            m1 += dist.at(x, y, a, b);
            m2 += dist.at(x2, y, a, b);
          }
          worst = std::max(worst, std::abs(m1 - m2));
        }
  return worst;
}

double fidelity_with_pure(const DensityMatrix& state, const DensityMatrix& target) {
  const CMatrix& p = target.mat();
  if (max_abs(p * p - p) > tol::unit_norm) {
    throw std::domain_error("fidelity_with_pure: target is not a rank-1 projector");
  }
  if (state.dim() != target.dim()) {
    throw std::domain_error("fidelity_with_pure: dimension mismatch");
  }
  return (state.mat() * p).trace().real();
}

}  // namespace steerlab
