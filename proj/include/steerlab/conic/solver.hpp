#pragma once

// Dense primal-dual interior-point solver for small conic problems
// (nonnegative scalars and PSD blocks), with infeasibility and
// unboundedness detection via the homogeneous self-dual embedding plus a
// null-space presolve that catches exact improving rays.

#include <string>
#include <vector>

#include "steerlab/conic/problem.hpp"

namespace steerlab::conic {

enum class Status { Optimal, Unbounded, Infeasible, NumericalFailure };

std::string to_string(Status s);

struct SolverOptions {
  double abs_gap = 1e-8;
  double rel_gap = 1e-7;
  double feas = 1e-8;
  int max_iters = 500;
  double unbounded_objective = 1e6;
};

struct ConicSolution {
  Status status = Status::NumericalFailure;
  double value = 0.0;  // maximize convention, includes the objective constant
  Eigen::VectorXd x;   // primal variables (best iterate on failure)
  Eigen::VectorXd y;   // equality multipliers
  Eigen::VectorXd z;   // cone multipliers
  Eigen::VectorXd s;   // cone slacks, h - Gx
  Eigen::VectorXd ray;  // improving ray when status == Unbounded
  double gap = 0.0;
  double rel_gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
};

ConicSolution solve(const ConicProblem& problem, const SolverOptions& options = {});

/// Independent recomputation of residuals, cone margins and the duality gap.
struct VerificationReport {
  double eq_residual = 0.0;
  double primal_cone_margin = 0.0;  // most negative slack eigenvalue (0 if none)
  double dual_cone_margin = 0.0;
  double dual_residual = 0.0;
  double duality_gap = 0.0;
  double ray_residual = 0.0;  // homogeneous residual of an unbounded certificate
  bool ok = true;
  std::vector<std::string> violations;
};

VerificationReport verify_solution(const ConicProblem& problem, const ConicSolution& solution,
                                   double tolerance = 1e-7);

}  // namespace steerlab::conic
