#pragma once

// Standard-form conic problem assembly. Internally everything is reduced to
//
//   maximize  c'x
//   s.t.      A x = b
//             h - G x in K,   K a product of nonnegative scalars and
//                             real-symmetric PSD blocks
//
// with x free. Nonnegative scalar variables and PSD matrix variables are
// expressed through cone rows on their own entries; complex Hermitian
// constraints enter through the real symmetric embedding.

#include <Eigen/Dense>
#include <iosfwd>
#include <utility>
#include <vector>

#include "steerlab/quantum.hpp"

namespace steerlab::conic {

/// [[Re H, -Im H], [Im H, Re H]]; PSD iff H is PSD, every eigenvalue of H
/// appears twice, and the trace doubles (callers account for the factor 2
/// wherever embedded traces feed a scalar quantity).
Eigen::MatrixXd embed_hermitian(const CMatrix& h);

/// Scalar affine expression sum_k coeff_k x_k + constant.
struct LinExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  LinExpr() = default;
  static LinExpr variable(int index, double coeff = 1.0) {
    LinExpr e;
    e.terms.emplace_back(index, coeff);
    return e;
  }
  LinExpr& add(int index, double coeff) {
    terms.emplace_back(index, coeff);
    return *this;
  }
};

/// Affine Hermitian-matrix expression sum_k x_k C_k + C0.
struct HermitianExpr {
  int dim = 0;
  CMatrix constant;
  std::vector<std::pair<int, CMatrix>> terms;

  explicit HermitianExpr(int d) : dim(d), constant(CMatrix::Zero(d, d)) {}
  HermitianExpr& add(int index, const CMatrix& coeff);
  HermitianExpr& add_constant(const CMatrix& c);
  /// Re tr[expr * B] as a scalar affine expression (B Hermitian).
  LinExpr trace_product(const CMatrix& b) const;
  /// Numeric value at a given variable assignment.
  CMatrix value(const Eigen::VectorXd& x) const;
};

enum class ConeKind { Nonneg, Psd };

struct ConeBlock {
  ConeKind kind;
  int order;       // 1 for scalars, matrix order for PSD blocks
  int row_offset;  // start row in G/h (PSD blocks occupy order^2 rows)
  int rows() const { return kind == ConeKind::Nonneg ? 1 : order * order; }
};

class ConicProblem {
 public:
  int new_var();
  std::vector<int> new_vars(int count);
  int n_vars() const { return n_vars_; }

  /// Variable that carries its own x >= 0 cone row.
  int add_nonneg_scalar();
  /// Hermitian matrix variable of the given dimension, dim^2 real scalars;
  /// optionally constrained PSD.
  HermitianExpr add_hermitian_var(int dim, bool psd = true);

  void set_objective(const LinExpr& e);  // maximize
  void add_eq_zero(const LinExpr& e);
  void add_nonneg(const LinExpr& e);  // e >= 0
  void add_psd(const HermitianExpr& e);
  /// All independent real components of e forced to zero (dim^2 rows).
  void add_eq_zero(const HermitianExpr& e);

  // Assembled standard form.
  Eigen::VectorXd c() const;
  Eigen::MatrixXd A() const;
  Eigen::VectorXd b() const;
  Eigen::MatrixXd G() const;
  Eigen::VectorXd h() const;
  const std::vector<ConeBlock>& cones() const { return cones_; }
  double objective_constant() const { return obj_constant_; }
  int n_eq_rows() const { return static_cast<int>(eq_rhs_.size()); }
  int n_cone_rows() const { return cone_rows_; }

  /// Plain-text standard conic form for cross-checking with other solvers.
  void dump(std::ostream& os) const;

 private:
  int n_vars_ = 0;
  std::vector<std::pair<int, double>> obj_;  // maximize
  double obj_constant_ = 0.0;
  struct Row {
    std::vector<std::pair<int, double>> terms;
    double rhs;
  };
  std::vector<std::vector<std::pair<int, double>>> eq_terms_;
  std::vector<double> eq_rhs_;
  std::vector<std::vector<std::pair<int, double>>> g_terms_;  // G row entries
  std::vector<double> h_;
  std::vector<ConeBlock> cones_;
  int cone_rows_ = 0;
};

}  // namespace steerlab::conic
