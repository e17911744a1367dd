#include "steerlab/conic/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace steerlab::conic {

std::string to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Unbounded: return "unbounded";
    case Status::Infeasible: return "infeasible";
    case Status::NumericalFailure: return "numerical-failure";
  }
  return "unknown";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using MatMap = Eigen::Map<MatrixXd>;
using ConstMatMap = Eigen::Map<const MatrixXd>;

struct BlockScaling {
  // Nonneg scalar: w with s = w^2 z on the central path.
  double w = 1.0;
  double lam_scalar = 1.0;
  // PSD block: R with R' Z R = R^{-1} S R^{-T} = diag(lam).
  MatrixXd R, Rinv, Wm, Wminv;
  VectorXd lam;
};

VectorXd cone_identity(const std::vector<ConeBlock>& cones, int rows) {
  VectorXd e = VectorXd::Zero(rows);
  for (const ConeBlock& blk : cones) {
    if (blk.kind == ConeKind::Nonneg) {
      e(blk.row_offset) = 1.0;
    } else {
      MatMap(e.data() + blk.row_offset, blk.order, blk.order).setIdentity();
    }
  }
  return e;
}

double cone_degree(const std::vector<ConeBlock>& cones) {
  double d = 0.0;
  for (const ConeBlock& blk : cones) d += blk.order;
  return d;
}

// Cholesky with escalating jitter; iterates should stay PD but guard anyway.
Eigen::LLT<MatrixXd> robust_llt(const MatrixXd& m) {
  Eigen::LLT<MatrixXd> llt(m);
  double jitter = 1e-14 * std::max(1.0, m.trace());
  MatrixXd mm = m;
  int tries = 0;
  while (llt.info() != Eigen::Success && tries < 8) {
    mm += jitter * MatrixXd::Identity(m.rows(), m.cols());
    llt.compute(mm);
    jitter *= 100.0;
    ++tries;
  }
  return llt;
}

bool compute_scalings(const std::vector<ConeBlock>& cones, const VectorXd& s, const VectorXd& z,
                      std::vector<BlockScaling>& scal) {
  scal.resize(cones.size());
  for (size_t i = 0; i < cones.size(); ++i) {
    const ConeBlock& blk = cones[i];
    BlockScaling& sc = scal[i];
    if (blk.kind == ConeKind::Nonneg) {
      const double sv = s(blk.row_offset), zv = z(blk.row_offset);
      if (sv <= 0.0 || zv <= 0.0) return false;
      sc.w = std::sqrt(sv / zv);
      sc.lam_scalar = std::sqrt(sv * zv);
    } else {
      const int n = blk.order;
      ConstMatMap S(s.data() + blk.row_offset, n, n);
      ConstMatMap Z(z.data() + blk.row_offset, n, n);
      Eigen::LLT<MatrixXd> lltS = robust_llt(S);
      Eigen::LLT<MatrixXd> lltZ = robust_llt(Z);
      if (lltS.info() != Eigen::Success || lltZ.info() != Eigen::Success) return false;
      MatrixXd Ls = lltS.matrixL();
      MatrixXd Lz = lltZ.matrixL();
      Eigen::JacobiSVD<MatrixXd> svd(Lz.transpose() * Ls,
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
      VectorXd sig = svd.singularValues();
      if (sig.minCoeff() <= 0.0) return false;
      sc.lam = sig;
      VectorXd isqrt = sig.cwiseSqrt().cwiseInverse();
      sc.R = Ls * svd.matrixV() * isqrt.asDiagonal();
      sc.Rinv = sig.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() *
                Ls.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(n, n));
      sc.Wm = sc.R * sc.R.transpose();
      sc.Wminv = sc.Rinv.transpose() * sc.Rinv;
    }
  }
  return true;
}

// Applies (W'W)^{-1} blockwise to the columns of m.
MatrixXd apply_wwinv(const std::vector<ConeBlock>& cones, const std::vector<BlockScaling>& scal,
                     const MatrixXd& m) {
  MatrixXd out(m.rows(), m.cols());
  for (size_t i = 0; i < cones.size(); ++i) {
    const ConeBlock& blk = cones[i];
    if (blk.kind == ConeKind::Nonneg) {
      out.row(blk.row_offset) = m.row(blk.row_offset) / (scal[i].w * scal[i].w);
    } else {
      const int n = blk.order;
      for (int c = 0; c < m.cols(); ++c) {
        ConstMatMap U(m.col(c).data() + blk.row_offset, n, n);
        MatrixXd T = scal[i].Wminv * U * scal[i].Wminv;
        MatMap(out.col(c).data() + blk.row_offset, n, n) = T;
      }
    }
  }
  return out;
}

// Largest step length alpha with v + alpha dv staying in the cone.
double max_step(const std::vector<ConeBlock>& cones, const VectorXd& v, const VectorXd& dv) {
  double alpha = std::numeric_limits<double>::infinity();
  for (const ConeBlock& blk : cones) {
    if (blk.kind == ConeKind::Nonneg) {
      const double d = dv(blk.row_offset);
      if (d < 0.0) alpha = std::min(alpha, -v(blk.row_offset) / d);
    } else {
      const int n = blk.order;
      ConstMatMap V(v.data() + blk.row_offset, n, n);
      ConstMatMap D(dv.data() + blk.row_offset, n, n);
      Eigen::LLT<MatrixXd> llt = robust_llt(V);
      MatrixXd L = llt.matrixL();
      MatrixXd M = L.triangularView<Eigen::Lower>().solve(D);
      M = L.triangularView<Eigen::Lower>().solve(M.transpose().eval());
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (M + M.transpose()),
                                                 Eigen::EigenvaluesOnly);
      const double lmin = es.eigenvalues().minCoeff();
      if (lmin < 0.0) alpha = std::min(alpha, -1.0 / lmin);
    }
  }
  return alpha;
}

struct HsdResult {
  Status status = Status::NumericalFailure;
  VectorXd x, y, z, s;
  VectorXd ray_x;        // dual-infeasibility certificate (primal improving ray)
  VectorXd cert_y, cert_z;  // primal-infeasibility certificate
  double gap = 0.0, rel_gap = 0.0, pres = 0.0, dres = 0.0;
  int iterations = 0;
};

// Minimizes c'x s.t. Ax = b, Gx + s = h, s in K.
HsdResult hsd_solve(const VectorXd& c, const MatrixXd& A, const VectorXd& b, const MatrixXd& G,
                    const VectorXd& h, const std::vector<ConeBlock>& cones,
                    const SolverOptions& opt) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(b.size());
  const int k = static_cast<int>(h.size());
  HsdResult res;

  VectorXd x = VectorXd::Zero(n), y = VectorXd::Zero(m);
  VectorXd s = cone_identity(cones, k), z = s;
  double tau = 1.0, kappa = 1.0;
  const double degree = cone_degree(cones) + 1.0;
  const double nb = std::max(1.0, b.norm());
  const double nh = std::max(1.0, h.norm());
  const double nc = std::max(1.0, c.norm());

  std::vector<BlockScaling> scal;
  HsdResult best;
  double best_score = std::numeric_limits<double>::infinity();
  int stalled = 0;

  for (int iter = 0; iter <= opt.max_iters; ++iter) {
    // Residuals of the homogeneous system.
    VectorXd f1 = A.transpose() * y + G.transpose() * z + c * tau;
    VectorXd f2 = A * x - b * tau;
    VectorXd f3 = G * x + s - h * tau;
    const double f4 = c.dot(x) + b.dot(y) + h.dot(z) + kappa;

    const double pcost = c.dot(x) / tau;
    const double dcost = (-b.dot(y) - h.dot(z)) / tau;
    const double gap = s.dot(z) / (tau * tau);
    const double relgap = gap / std::max(1.0, std::abs(pcost));
    const double pres = std::max(f2.norm() / tau / nb, f3.norm() / tau / nh);
    const double dres = f1.norm() / tau / nc;

    res.iterations = iter;
    if (std::getenv("STEERLAB_SOLVER_TRACE")) {
      std::fprintf(stderr,
                   "iter %d pcost %.6e dcost %.6e gap %.3e pres %.3e dres %.3e tau %.3e kappa "
                   "%.3e\n",
                   iter, pcost, dcost, gap, pres, dres, tau, kappa);
    }
    const double score = std::max({pres, dres, relgap});
    // Numerical breakdown: residuals drifting far above the best iterate means
    // the scalings have degenerated and further steps only add noise.
    if (score > 1e4 * best_score && iter > 10) break;
    // Steps can shrink to zero near the boundary; once the iterate stops
    // improving there is nothing left to gain from further iterations.
    if (score < 0.9 * best_score) {
      stalled = 0;
    } else if (++stalled > 30) {
      break;
    }
    if (score < best_score) {
      best_score = score;
      best = res;
      best.x = x / tau;
      best.y = y / tau;
      best.z = z / tau;
      best.s = s / tau;
      best.gap = gap;
      best.rel_gap = relgap;
      best.pres = pres;
      best.dres = dres;
    }

    if (pres <= opt.feas && dres <= opt.feas &&
        (gap <= opt.abs_gap || relgap <= opt.rel_gap)) {
      res.status = Status::Optimal;
      res.x = x / tau;
      res.y = y / tau;
      res.z = z / tau;
      res.s = s / tau;
      res.gap = gap;
      res.rel_gap = relgap;
      res.pres = pres;
      res.dres = dres;
      return res;
    }
    // Primal infeasibility certificate.
    const double infeas_scale = -(b.dot(y) + h.dot(z));
    if (infeas_scale > 0.0) {
      VectorXd cert = (A.transpose() * y + G.transpose() * z) / infeas_scale;
      if (cert.norm() / nc <= opt.feas) {
        res.status = Status::Infeasible;
        res.cert_y = y / infeas_scale;
        res.cert_z = z / infeas_scale;
        res.x = x / tau;
        res.y = res.cert_y;
        res.z = res.cert_z;
        res.s = s / tau;
        return res;
      }
    }
    // Dual infeasibility certificate (primal unbounded below).
    if (c.dot(x) < 0.0) {
      const double scale = -c.dot(x);
      VectorXd xr = x / scale, sr = s / scale;
      if (std::max((A * xr).norm() / nb, (G * xr + sr).norm() / nh) <= opt.feas) {
        res.status = Status::Unbounded;
        res.ray_x = xr;
        res.x = x / tau;
        res.y = y / tau;
        res.z = z / tau;
        res.s = s / tau;
        return res;
      }
    }
    // Runaway objective with a feasible iterate also counts as unbounded.
    if (pcost < -opt.unbounded_objective && pres <= opt.feas) {
      res.status = Status::Unbounded;
      res.ray_x = x / x.norm();
      res.x = x / tau;
      res.y = y / tau;
      res.z = z / tau;
      res.s = s / tau;
      return res;
    }
    if (iter == opt.max_iters) break;

    const double mu = (s.dot(z) + tau * kappa) / degree;
    if (!compute_scalings(cones, s, z, scal)) break;

    // KKT factorization shared by all solves this iteration.
    MatrixXd WiG = apply_wwinv(cones, scal, G);
    MatrixXd H = G.transpose() * WiG;
    MatrixXd KKT0 = MatrixXd::Zero(n + m, n + m);
    KKT0.topLeftCorner(n, n) = H;
    if (m > 0) {
      KKT0.topRightCorner(n, m) = A.transpose();
      KKT0.bottomLeftCorner(m, n) = A;
    }
    const double reg = 1e-11 * std::max(1.0, H.trace() / std::max(1, n));
    MatrixXd KKT = KKT0;
    KKT.topLeftCorner(n, n) += reg * MatrixXd::Identity(n, n);
    if (m > 0) KKT.bottomRightCorner(m, m) -= reg * MatrixXd::Identity(m, m);
    Eigen::PartialPivLU<MatrixXd> lu(KKT);

    auto k3_solve = [&](const VectorXd& r1, const VectorXd& r2, const VectorXd& r3, VectorXd& ux,
                        VectorXd& uy, VectorXd& uz) {
      VectorXd rhs(n + m);
      rhs.head(n) = r1 + G.transpose() * apply_wwinv(cones, scal, r3);
      rhs.tail(m) = r2;
      VectorXd sol = lu.solve(rhs);
      // Refine against the unregularized system; recovers the digits lost to
      // static regularization and late-stage ill conditioning.
      for (int ref = 0; ref < 3; ++ref) {
        VectorXd resid = rhs - KKT0 * sol;
        if (resid.lpNorm<Eigen::Infinity>() <
            1e-14 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>())) {
          break;
        }
        sol += lu.solve(resid);
      }
      ux = sol.head(n);
      uy = sol.tail(m);
      uz = apply_wwinv(cones, scal, VectorXd(G * ux - r3));
    };

    VectorXd x1, y1, z1;
    k3_solve(-c, b, h, x1, y1, z1);

    // D solves lambda o (ds_sc + dz_sc) = dcomp per block; returns the
    // unscaled elimination term R D R' stacked as a cone vector.
    auto eliminate = [&](const VectorXd& dcomp, VectorXd& rdrt, std::vector<MatrixXd>& Dblocks) {
      rdrt = VectorXd::Zero(k);
      Dblocks.assign(cones.size(), MatrixXd());
      for (size_t i = 0; i < cones.size(); ++i) {
        const ConeBlock& blk = cones[i];
        if (blk.kind == ConeKind::Nonneg) {
          const double D = dcomp(blk.row_offset) / scal[i].lam_scalar;
          Dblocks[i] = MatrixXd::Constant(1, 1, D);
          rdrt(blk.row_offset) = scal[i].w * D;
        } else {
          const int nn = blk.order;
          ConstMatMap DC(dcomp.data() + blk.row_offset, nn, nn);
          MatrixXd D(nn, nn);
          for (int r = 0; r < nn; ++r)
            for (int cc = 0; cc < nn; ++cc)
              D(r, cc) = 2.0 * DC(r, cc) / (scal[i].lam(r) + scal[i].lam(cc));
          Dblocks[i] = D;
          MatMap(rdrt.data() + blk.row_offset, nn, nn) = scal[i].R * D * scal[i].R.transpose();
        }
      }
    };

    auto direction = [&](double eta, const VectorXd& dcomp, double dcomp_tau, VectorXd& dx,
                         VectorXd& dy, VectorXd& dz, VectorXd& ds, double& dtau,
                         double& dkappa) {
      VectorXd rdrt;
      std::vector<MatrixXd> Dblocks;
      eliminate(dcomp, rdrt, Dblocks);
      VectorXd r1 = -eta * f1;
      VectorXd r2 = -eta * f2;
      VectorXd r3 = -eta * f3 - rdrt;
      VectorXd x0, y0, z0;
      k3_solve(r1, r2, r3, x0, y0, z0);
      const double rhs4 = -eta * f4;
      const double denom = c.dot(x1) + b.dot(y1) + h.dot(z1) - kappa / tau;
      dtau = (rhs4 - dcomp_tau / tau - c.dot(x0) - b.dot(y0) - h.dot(z0)) / denom;
      dx = x0 + dtau * x1;
      dy = y0 + dtau * y1;
      dz = z0 + dtau * z1;
      // Recover ds from the third residual equation directly; routing it
      // through the scalings would lose digits once they are ill conditioned.
      ds = -eta * f3 + dtau * h - G * dx;
      dkappa = (dcomp_tau - kappa * dtau) / tau;
    };

    // Affine (predictor) direction.
    VectorXd dcomp_aff = VectorXd::Zero(k);
    for (size_t i = 0; i < cones.size(); ++i) {
      const ConeBlock& blk = cones[i];
      if (blk.kind == ConeKind::Nonneg) {
        dcomp_aff(blk.row_offset) = -scal[i].lam_scalar * scal[i].lam_scalar;
      } else {
        MatMap(dcomp_aff.data() + blk.row_offset, blk.order, blk.order) =
            MatrixXd((-scal[i].lam.array().square()).matrix().asDiagonal());
      }
    }
    VectorXd dxa, dya, dza, dsa;
    double dtaua, dkappaa;
    direction(1.0, dcomp_aff, -tau * kappa, dxa, dya, dza, dsa, dtaua, dkappaa);

    double alpha = std::min(max_step(cones, s, dsa), max_step(cones, z, dza));
    if (dtaua < 0.0) alpha = std::min(alpha, -tau / dtaua);
    if (dkappaa < 0.0) alpha = std::min(alpha, -kappa / dkappaa);
    alpha = std::min(alpha, 1.0);
    const double sigma = std::pow(1.0 - alpha, 3.0);

    // Combined (corrector) direction.
    VectorXd dcomp = VectorXd::Zero(k);
    for (size_t i = 0; i < cones.size(); ++i) {
      const ConeBlock& blk = cones[i];
      if (blk.kind == ConeKind::Nonneg) {
        const double ds_sc = dsa(blk.row_offset) / scal[i].w;
        const double dz_sc = dza(blk.row_offset) * scal[i].w;
        dcomp(blk.row_offset) = sigma * mu - scal[i].lam_scalar * scal[i].lam_scalar -
                                ds_sc * dz_sc;
      } else {
        const int nn = blk.order;
        ConstMatMap DS(dsa.data() + blk.row_offset, nn, nn);
        ConstMatMap DZ(dza.data() + blk.row_offset, nn, nn);
        MatrixXd ds_sc = scal[i].Rinv * DS * scal[i].Rinv.transpose();
        MatrixXd dz_sc = scal[i].R.transpose() * DZ * scal[i].R;
        MatrixXd corr = 0.5 * (ds_sc * dz_sc + dz_sc * ds_sc);
        MatrixXd blkval = -corr;
        blkval.diagonal().array() += sigma * mu;
        blkval.diagonal() -= scal[i].lam.array().square().matrix();
        MatMap(dcomp.data() + blk.row_offset, nn, nn) = blkval;
      }
    }
    const double dcomp_tau = sigma * mu - tau * kappa - dtaua * dkappaa;

    VectorXd dx, dy, dz, ds;
    double dtau, dkappa;
    direction(1.0 - sigma, dcomp, dcomp_tau, dx, dy, dz, ds, dtau, dkappa);

    double step = std::min(max_step(cones, s, ds), max_step(cones, z, dz));
    if (dtau < 0.0) step = std::min(step, -tau / dtau);
    if (dkappa < 0.0) step = std::min(step, -kappa / dkappa);
    step = 0.99 * std::min(step, 1.0 / 0.99);
    if (!std::isfinite(step) || step <= 0.0) break;

    x += step * dx;
    y += step * dy;
    z += step * dz;
    s += step * ds;
    tau += step * dtau;
    kappa += step * dkappa;
    // Keep PSD blocks exactly symmetric against drift.
    for (const ConeBlock& blk : cones) {
      if (blk.kind == ConeKind::Psd) {
        MatMap S(s.data() + blk.row_offset, blk.order, blk.order);
        MatMap Z(z.data() + blk.row_offset, blk.order, blk.order);
        S = 0.5 * (S + S.transpose()).eval();
        Z = 0.5 * (Z + Z.transpose()).eval();
      }
    }
    if (tau <= 0.0 || kappa <= 0.0 || !std::isfinite(tau)) break;
  }

  // Accept a mildly inaccurate best iterate rather than rejecting a solve
  // that converged in substance before the step sizes collapsed.
  constexpr double kRelaxed = 1e-5;
  if (best.x.size() > 0 && best.pres <= kRelaxed && best.dres <= kRelaxed &&
      (best.gap <= kRelaxed || best.rel_gap <= kRelaxed)) {
    best.status = Status::Optimal;
    return best;
  }
  best.status = Status::NumericalFailure;
  return best;
}

}  // namespace

ConicSolution solve(const ConicProblem& problem, const SolverOptions& options) {
  const VectorXd cmax = problem.c();
  const MatrixXd A = problem.A();
  const VectorXd b = problem.b();
  const MatrixXd G = problem.G();
  const VectorXd h = problem.h();
  const int n = problem.n_vars();

  ConicSolution out;
  if (n == 0) {
    out.status = Status::Optimal;
    out.value = problem.objective_constant();
    out.x = VectorXd();
    return out;
  }

  // Null space of the stacked constraint maps. A direction with zero
  // constraint image and nonzero objective is an exact improving ray.
  MatrixXd stacked(A.rows() + G.rows(), n);
  stacked.topRows(A.rows()) = A;
  stacked.bottomRows(G.rows()) = G;
  MatrixXd basis = MatrixXd::Identity(n, n);  // column basis of the kept subspace
  MatrixXd null_basis(n, 0);
  if (stacked.rows() > 0) {
    // Jacobi rather than divide-and-conquer: the latter can return V columns
    // inconsistent with its singular values on matrices with many repeated
    // singular values, which silently corrupts the kernel split.
    Eigen::JacobiSVD<MatrixXd> svd(stacked, Eigen::ComputeFullV);
    const VectorXd& sv = svd.singularValues();
    const double cutoff = 1e-10 * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > cutoff) ++rank;
    basis = svd.matrixV().leftCols(rank);
    null_basis = svd.matrixV().rightCols(n - rank);
  } else {
    basis = MatrixXd(n, 0);
    null_basis = MatrixXd::Identity(n, n);
  }

  const int nullity = static_cast<int>(null_basis.cols());
  if (nullity > 0) {
    VectorXd cn = null_basis.transpose() * cmax;
    if (std::getenv("STEERLAB_SOLVER_TRACE") != nullptr) {
      std::fprintf(stderr, "presolve nullity %d |cn| %.3e thresh %.3e\n", nullity,
                   cn.lpNorm<Eigen::Infinity>(),
                   1e-7 * std::max(1.0, cmax.lpNorm<Eigen::Infinity>()));
    }
    if (cn.lpNorm<Eigen::Infinity>() > 1e-7 * std::max(1.0, cmax.lpNorm<Eigen::Infinity>())) {
      // Improving ray along the constraint-map kernel; establish feasibility
      // on the retained subspace before declaring unboundedness.
      HsdResult feas = hsd_solve(VectorXd::Zero(basis.cols()), A * basis, b, G * basis, h,
                                 problem.cones(), options);
      if (feas.status == Status::Infeasible) {
        out.status = Status::Infeasible;
        out.y = feas.cert_y;
        out.z = feas.cert_z;
        out.iterations = feas.iterations;
        return out;
      }
      if (feas.status == Status::Optimal || feas.status == Status::Unbounded) {
        out.status = Status::Unbounded;
        VectorXd ray = null_basis * cn;
        out.ray = ray / ray.norm();
        out.x = basis * feas.x;
        out.iterations = feas.iterations;
        return out;
      }
      out.status = Status::NumericalFailure;
      out.iterations = feas.iterations;
      return out;
    }
  }

  const MatrixXd Ar = A * basis;
  const MatrixXd Gr = G * basis;
  const VectorXd cr = basis.transpose() * cmax;

  HsdResult r = hsd_solve(-cr, Ar, b, Gr, h, problem.cones(), options);
  out.status = r.status;
  out.iterations = r.iterations;
  out.y = r.y;
  out.z = r.z;
  out.s = r.s;
  out.gap = r.gap;
  out.rel_gap = r.rel_gap;
  out.primal_residual = r.pres;
  out.dual_residual = r.dres;
  if (r.x.size() > 0) out.x = basis * r.x;
  if (r.status == Status::Optimal || r.status == Status::NumericalFailure) {
    if (out.x.size() > 0) out.value = cmax.dot(out.x) + problem.objective_constant();
  }
  if (r.status == Status::Unbounded && r.ray_x.size() > 0) {
    out.ray = basis * r.ray_x;
    out.ray /= out.ray.norm();
  }
  return out;
}

VerificationReport verify_solution(const ConicProblem& problem, const ConicSolution& solution,
                                   double tolerance) {
  VerificationReport rep;
  const VectorXd cmax = problem.c();
  const MatrixXd A = problem.A();
  const VectorXd b = problem.b();
  const MatrixXd G = problem.G();
  const VectorXd h = problem.h();

  auto min_cone_eig = [&](const VectorXd& v) {
    double worst = 0.0;
    for (const ConeBlock& blk : problem.cones()) {
      if (blk.kind == ConeKind::Nonneg) {
        worst = std::min(worst, v(blk.row_offset));
      } else {
        ConstMatMap M(v.data() + blk.row_offset, blk.order, blk.order);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (M + M.transpose()),
                                                   Eigen::EigenvaluesOnly);
        worst = std::min(worst, es.eigenvalues().minCoeff());
      }
    }
    return worst;
  };
  auto flag = [&](const std::string& what) {
    rep.ok = false;
    rep.violations.push_back(what);
  };

  if (solution.status == Status::Unbounded) {
    if (solution.ray.size() == 0) {
      flag("unbounded status without a ray certificate");
      return rep;
    }
    const VectorXd& r = solution.ray;
    double res = 0.0;
    if (A.rows() > 0) res = (A * r).lpNorm<Eigen::Infinity>();
    const double cone_margin = min_cone_eig(-G * r);
    rep.ray_residual = std::max(res, std::max(0.0, -cone_margin));
    if (rep.ray_residual > tolerance) flag("ray violates homogeneous constraints");
    if (cmax.dot(r) <= 0.0) flag("ray does not improve the objective");
    return rep;
  }
  if (solution.status == Status::Infeasible) {
    VectorXd dual_comb = VectorXd::Zero(problem.n_vars());
    if (A.rows() > 0 && solution.y.size() > 0) dual_comb += A.transpose() * solution.y;
    if (solution.z.size() > 0) dual_comb += G.transpose() * solution.z;
    rep.dual_residual = dual_comb.lpNorm<Eigen::Infinity>();
    if (rep.dual_residual > tolerance) flag("infeasibility certificate residual");
    if (solution.z.size() > 0 && min_cone_eig(solution.z) < -tolerance) {
      flag("infeasibility certificate outside the dual cone");
    }
    double val = h.dot(solution.z);
    if (solution.y.size() > 0) val += b.dot(solution.y);
    if (val >= 0.0) flag("infeasibility certificate lacks negative value");
    return rep;
  }

  const VectorXd& x = solution.x;
  if (x.size() != problem.n_vars()) {
    flag("missing primal assignment");
    return rep;
  }
  if (A.rows() > 0) rep.eq_residual = (A * x - b).lpNorm<Eigen::Infinity>();
  rep.primal_cone_margin = min_cone_eig(h - G * x);
  if (rep.eq_residual > tolerance) flag("equality residual");
  if (rep.primal_cone_margin < -tolerance) flag("primal cone violation");

  if (solution.z.size() == static_cast<Eigen::Index>(problem.n_cone_rows())) {
    rep.dual_cone_margin = min_cone_eig(solution.z);
    if (rep.dual_cone_margin < -tolerance) flag("dual cone violation");
    VectorXd dual_res = -cmax + G.transpose() * solution.z;
    if (A.rows() > 0 && solution.y.size() > 0) dual_res += A.transpose() * solution.y;
    rep.dual_residual = dual_res.lpNorm<Eigen::Infinity>();
    if (rep.dual_residual > 10 * tolerance) flag("dual residual");
    double dcost = h.dot(solution.z) + problem.objective_constant();
    if (solution.y.size() > 0) dcost += b.dot(solution.y);
    rep.duality_gap = dcost - solution.value;  // weak duality: >= -tol
    if (rep.duality_gap < -tolerance) flag("weak duality violated");
    if (solution.status == Status::Optimal && std::abs(rep.duality_gap) > 100 * tolerance) {
      flag("duality gap too large for optimal status");
    }
  }
  return rep;
}

}  // namespace steerlab::conic
