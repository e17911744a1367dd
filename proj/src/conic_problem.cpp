#include "steerlab/conic/problem.hpp"

#include <ostream>
#include <stdexcept>

namespace steerlab::conic {

Eigen::MatrixXd embed_hermitian(const CMatrix& h) {
  if (!is_hermitian(h)) {
    throw std::domain_error("embed_hermitian: input is not Hermitian within 1e-12");
  }
  const int n = static_cast<int>(h.rows());
  Eigen::MatrixXd m(2 * n, 2 * n);
  Eigen::MatrixXd re = h.real();
  Eigen::MatrixXd im = h.imag();
  m.topLeftCorner(n, n) = re;
  m.topRightCorner(n, n) = -im;
  m.bottomLeftCorner(n, n) = im;
  m.bottomRightCorner(n, n) = re;
  return m;
}

HermitianExpr& HermitianExpr::add(int index, const CMatrix& coeff) {
  if (coeff.rows() != dim || coeff.cols() != dim) {
    throw std::domain_error("HermitianExpr: coefficient dimension mismatch");
  }
  terms.emplace_back(index, coeff);
  return *this;
}

HermitianExpr& HermitianExpr::add_constant(const CMatrix& c) {
  if (c.rows() != dim || c.cols() != dim) {
    throw std::domain_error("HermitianExpr: constant dimension mismatch");
  }
  constant += c;
  return *this;
}

LinExpr HermitianExpr::trace_product(const CMatrix& b) const {
  LinExpr e;
  e.constant = (constant * b).trace().real();
  for (const auto& [idx, coeff] : terms) {
    const double v = (coeff * b).trace().real();
    if (v != 0.0) e.add(idx, v);
  }
  return e;
}

CMatrix HermitianExpr::value(const Eigen::VectorXd& x) const {
  CMatrix v = constant;
  for (const auto& [idx, coeff] : terms) v += x(idx) * coeff;
  return v;
}

int ConicProblem::new_var() { return n_vars_++; }

std::vector<int> ConicProblem::new_vars(int count) {
  std::vector<int> v(count);
  for (int i = 0; i < count; ++i) v[i] = new_var();
  return v;
}

int ConicProblem::add_nonneg_scalar() {
  const int v = new_var();
  add_nonneg(LinExpr::variable(v));
  return v;
}

HermitianExpr ConicProblem::add_hermitian_var(int dim, bool psd) {
  HermitianExpr e(dim);
  const Complex i(0.0, 1.0);
  for (int r = 0; r < dim; ++r) {
    CMatrix basis = CMatrix::Zero(dim, dim);
    basis(r, r) = 1.0;
    e.add(new_var(), basis);
  }
  for (int r = 0; r < dim; ++r) {
    for (int cidx = r + 1; cidx < dim; ++cidx) {
      CMatrix re = CMatrix::Zero(dim, dim);
      re(r, cidx) = 1.0;
      re(cidx, r) = 1.0;
      e.add(new_var(), re);
      CMatrix im = CMatrix::Zero(dim, dim);
      im(r, cidx) = i;
      im(cidx, r) = -i;
      e.add(new_var(), im);
    }
  }
  if (psd) add_psd(e);
  return e;
}

void ConicProblem::set_objective(const LinExpr& e) {
  obj_ = e.terms;
  obj_constant_ = e.constant;
}

void ConicProblem::add_eq_zero(const LinExpr& e) {
  eq_terms_.push_back(e.terms);
  eq_rhs_.push_back(-e.constant);
}

void ConicProblem::add_nonneg(const LinExpr& e) {
  // e >= 0  <=>  h - Gx = e with G = -coeffs, h = constant.
  std::vector<std::pair<int, double>> row;
  row.reserve(e.terms.size());
  for (const auto& [idx, coeff] : e.terms) row.emplace_back(idx, -coeff);
  g_terms_.push_back(std::move(row));
  h_.push_back(e.constant);
  cones_.push_back(ConeBlock{ConeKind::Nonneg, 1, cone_rows_});
  cone_rows_ += 1;
}

void ConicProblem::add_psd(const HermitianExpr& e) {
  const int n = 2 * e.dim;  // embedded order
  Eigen::MatrixXd h0 = embed_hermitian(e.constant);
  std::vector<std::pair<int, Eigen::MatrixXd>> embedded;
  embedded.reserve(e.terms.size());
  for (const auto& [idx, coeff] : e.terms) embedded.emplace_back(idx, embed_hermitian(coeff));
  for (int r = 0; r < n; ++r) {
    for (int cidx = 0; cidx < n; ++cidx) {
      std::vector<std::pair<int, double>> row;
      for (const auto& [idx, m] : embedded) {
        if (m(r, cidx) != 0.0) row.emplace_back(idx, -m(r, cidx));
      }
      g_terms_.push_back(std::move(row));
      h_.push_back(h0(r, cidx));
    }
  }
  cones_.push_back(ConeBlock{ConeKind::Psd, n, cone_rows_});
  cone_rows_ += n * n;
}

void ConicProblem::add_eq_zero(const HermitianExpr& e) {
  for (int r = 0; r < e.dim; ++r) {
    for (int cidx = r; cidx < e.dim; ++cidx) {
      LinExpr re;
      re.constant = e.constant(r, cidx).real();
      for (const auto& [idx, coeff] : e.terms) {
        const double v = coeff(r, cidx).real();
        if (v != 0.0) re.add(idx, v);
      }
      add_eq_zero(re);
      if (cidx > r) {
        LinExpr im;
        im.constant = e.constant(r, cidx).imag();
        for (const auto& [idx, coeff] : e.terms) {
          const double v = coeff(r, cidx).imag();
          if (v != 0.0) im.add(idx, v);
        }
        add_eq_zero(im);
      }
    }
  }
}

Eigen::VectorXd ConicProblem::c() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n_vars_);
  for (const auto& [idx, coeff] : obj_) v(idx) += coeff;
  return v;
}

Eigen::MatrixXd ConicProblem::A() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_eq_rows(), n_vars_);
  for (int r = 0; r < n_eq_rows(); ++r)
    for (const auto& [idx, coeff] : eq_terms_[r]) m(r, idx) += coeff;
  return m;
}

Eigen::VectorXd ConicProblem::b() const {
  return Eigen::Map<const Eigen::VectorXd>(eq_rhs_.data(), eq_rhs_.size());
}

Eigen::MatrixXd ConicProblem::G() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(cone_rows_, n_vars_);
  for (int r = 0; r < cone_rows_; ++r)
    for (const auto& [idx, coeff] : g_terms_[r]) m(r, idx) += coeff;
  return m;
}

Eigen::VectorXd ConicProblem::h() const {
  return Eigen::Map<const Eigen::VectorXd>(h_.data(), h_.size());
}

void ConicProblem::dump(std::ostream& os) const {
  os << "vars " << n_vars_ << "\n";
  os << "maximize";
  for (const auto& [idx, coeff] : obj_) os << " " << idx << ":" << coeff;
  os << " const:" << obj_constant_ << "\n";
  for (int r = 0; r < n_eq_rows(); ++r) {
    os << "eq";
    for (const auto& [idx, coeff] : eq_terms_[r]) os << " " << idx << ":" << coeff;
    os << " = " << eq_rhs_[r] << "\n";
  }
  for (const ConeBlock& blk : cones_) {
    os << (blk.kind == ConeKind::Nonneg ? "nonneg" : "psd") << " order " << blk.order << "\n";
    for (int r = blk.row_offset; r < blk.row_offset + blk.rows(); ++r) {
      os << "  row";
      for (const auto& [idx, coeff] : g_terms_[r]) os << " " << idx << ":" << coeff;
      os << " h:" << h_[r] << "\n";
    }
  }
}

}  // namespace steerlab::conic
