#include "steerlab/steering/inequalities.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace steerlab {

namespace {
constexpr double kViolationTol = 1e-9;
}

std::string to_string(Criterion c) {
  switch (c) {
    case Criterion::LS: return "LS";
    case Criterion::ChshLS: return "CHSH-LS";
    case Criterion::DBS: return "DBS";
    case Criterion::RIS: return "RIS";
  }
  return "?";
}

InequalityReport linear_steering(const CorrelationMatrix& M, const MeasurementSet& bob) {
  const int n = static_cast<int>(M.M.rows());
  if (M.M.cols() != n || bob.n_settings() != n) {
    throw std::domain_error("linear_steering: settings must be paired index-wise");
  }
  if (n > 20) throw std::runtime_error("linear_steering: bound enumeration capped at n = 20");

  double value = 0.0;
  for (int i = 0; i < n; ++i) value += M.M(i, i);
  value = std::abs(value);

  double bound = -std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    CMatrix sum = CMatrix::Zero(2, 2);
    for (int i = 0; i < n; ++i) {
      const double sign = (mask >> i) & 1u ? -1.0 : 1.0;
      sum += sign * bob.settings[i].observable();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sum, Eigen::EigenvaluesOnly);
    bound = std::max(bound, es.eigenvalues().maxCoeff());
  }

  InequalityReport rep;
  rep.name = Criterion::LS;
  rep.value = value;
  rep.bound = bound;
  rep.violated = value > bound + kViolationTol;
  rep.m = n;
  return rep;
}

InequalityReport chsh_like_steering(const CorrelationMatrix& M) {
  if (M.M.rows() != 2 || M.M.cols() != 2) {
    throw std::domain_error("chsh_like_steering: requires a 2x2 correlation matrix");
  }
  const double fp = std::pow(M.M(0, 0) + M.M(1, 0), 2) + std::pow(M.M(0, 1) + M.M(1, 1), 2);
  const double fm = std::pow(M.M(0, 0) - M.M(1, 0), 2) + std::pow(M.M(0, 1) - M.M(1, 1), 2);
  InequalityReport rep;
  rep.name = Criterion::ChshLS;
  rep.f_plus = fp;
  rep.f_minus = fm;
  rep.value = std::sqrt(fp) + std::sqrt(fm);
  rep.bound = 2.0;
  rep.violated = rep.value > rep.bound + kViolationTol;
  rep.m = 2;
  return rep;
}

InequalityReport dbs(const CorrelationMatrix& M, int d_A) {
  const int m = static_cast<int>(M.M.rows());
  if (M.M.cols() != m) throw std::domain_error("dbs: correlation matrix must be square");
  if (d_A < 2) throw std::domain_error("dbs: d_A must be >= 2");
  const double d = static_cast<double>(d_A);
  InequalityReport rep;
  rep.name = Criterion::DBS;
  rep.value = std::abs(M.M.determinant());
  rep.bound = (1.0 / std::sqrt(d)) * std::pow((std::sqrt(2.0 * d) - 1.0) / (m * std::sqrt(d)), m);
  rep.violated = rep.value > rep.bound + kViolationTol;
  rep.m = m;
  rep.d_A = d_A;
  return rep;
}

InequalityReport ris(const CorrelationMatrix& M) {
  const int m = static_cast<int>(M.M.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M.M);
  InequalityReport rep;
  rep.name = Criterion::RIS;
  rep.value = svd.singularValues().sum();
  rep.bound = std::sqrt(static_cast<double>(m));
  rep.violated = rep.value > rep.bound + kViolationTol;
  rep.m = m;
  return rep;
}

}  // namespace steerlab
