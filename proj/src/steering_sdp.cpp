#include "steerlab/steering/sdp.hpp"

#include <cmath>
#include <stdexcept>

namespace steerlab {

using conic::ConicProblem;
using conic::ConicSolution;
using conic::HermitianExpr;
using conic::LinExpr;
using conic::Status;

DeterministicStrategySet enumerate_strategies(int n_x, int n_a) {
  if (n_x < 1 || n_a < 1) throw std::domain_error("enumerate_strategies: counts must be >= 1");
  const double count = std::pow(static_cast<double>(n_a), n_x);
  if (count > 1e6) throw std::runtime_error("enumerate_strategies: strategy set exceeds 1e6");
  const int total = static_cast<int>(std::llround(count));
  DeterministicStrategySet set;
  set.n_x = n_x;
  set.n_a = n_a;
  set.table.resize(total, std::vector<int>(n_x));
  for (int lam = 0; lam < total; ++lam) {
    int rem = lam;
    for (int x = 0; x < n_x; ++x) {
      set.table[lam][x] = rem % n_a;
      rem /= n_a;
    }
  }
  return set;
}

SteeringResult steering_robustness(const Assemblage& assemblage) {
  if (std::abs(assemblage.common_trace() - 1.0) > 1e-8) {
    throw std::domain_error("steering_robustness: assemblage is not normalized");
  }
  const int n_x = assemblage.n_x, n_a = assemblage.n_a;
  const int d = static_cast<int>(assemblage.at(0, 0).rows());
  const DeterministicStrategySet strategies = enumerate_strategies(n_x, n_a);

  ConicProblem prob;
  std::vector<HermitianExpr> F;
  F.reserve(n_a * n_x);
  for (int x = 0; x < n_x; ++x)
    for (int a = 0; a < n_a; ++a) F.push_back(prob.add_hermitian_var(d, /*psd=*/true));
  auto f_at = [&](int a, int x) -> const HermitianExpr& { return F[a + n_a * x]; };

  for (const auto& strategy : strategies.table) {
    HermitianExpr expr(d);
    expr.add_constant(CMatrix::Identity(d, d));
    for (int x = 0; x < n_x; ++x) {
      for (const auto& [idx, coeff] : f_at(strategy[x], x).terms) expr.add(idx, -coeff);
    }
    prob.add_psd(expr);
  }

  LinExpr objective;
  objective.constant = -1.0;
  for (int x = 0; x < n_x; ++x)
    for (int a = 0; a < n_a; ++a) {
      for (const auto& [idx, coeff] : f_at(a, x).trace_product(assemblage.at(a, x)).terms) {
        objective.add(idx, coeff);
      }
    }
  prob.set_objective(objective);

  ConicSolution sol = conic::solve(prob);
  SteeringResult result;
  result.status = sol.status;
  result.value = sol.value;
  result.witness.mode = WitnessMode::FreeF;
  result.witness.n_x = n_x;
  result.witness.n_a = n_a;
  if (sol.status == Status::Optimal) {
    result.witness.operators.resize(n_a * n_x);
    for (int x = 0; x < n_x; ++x)
      for (int a = 0; a < n_a; ++a)
        result.witness.operators[a + n_a * x] = f_at(a, x).value(sol.x);
    result.verification = conic::verify_solution(prob, sol);
  }
  return result;
}

SteeringResult adapted_steering_robustness(const JointDistribution& dist,
                                           const MeasurementSet& bob) {
  if (bob.n_settings() != dist.n_y) {
    throw std::domain_error("adapted_steering_robustness: Bob setting count mismatch");
  }
  if (dist.n_a != 2 || dist.n_b != 2) {
    throw std::domain_error("adapted_steering_robustness: binary outcomes required");
  }
  const int n_x = dist.n_x, n_y = dist.n_y;
  const DeterministicStrategySet strategies = enumerate_strategies(n_x, 2);

  ConicProblem prob;
  std::vector<int> alpha_vars = prob.new_vars(n_x * n_y * 4);
  auto var = [&](int x, int y, int a, int b) { return alpha_vars[((x * n_y + y) * 2 + a) * 2 + b]; };

  std::vector<HermitianExpr> F;  // induced F-tilde_{a|x}, index a + 2x
  F.reserve(2 * n_x);
  for (int x = 0; x < n_x; ++x) {
    for (int a = 0; a < 2; ++a) {
      HermitianExpr f(2);
      for (int y = 0; y < n_y; ++y)
        for (int b = 0; b < 2; ++b) f.add(var(x, y, a, b), bob.settings[y].effects[b]);
      prob.add_psd(f);
      F.push_back(f);
    }
  }
  for (const auto& strategy : strategies.table) {
    HermitianExpr expr(2);
    expr.add_constant(CMatrix::Identity(2, 2));
    for (int x = 0; x < n_x; ++x) {
      for (const auto& [idx, coeff] : F[strategy[x] + 2 * x].terms) expr.add(idx, -coeff);
    }
    prob.add_psd(expr);
  }

  LinExpr objective;
  objective.constant = -1.0;
  for (int x = 0; x < n_x; ++x)
    for (int y = 0; y < n_y; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) objective.add(var(x, y, a, b), dist.at(x, y, a, b));
  prob.set_objective(objective);

  ConicSolution sol = conic::solve(prob);
  SteeringResult result;
  result.status = sol.status;
  result.value = sol.value;
  result.witness.mode = WitnessMode::BobRestricted;
  result.witness.n_x = n_x;
  result.witness.n_y = n_y;
  result.witness.n_a = 2;
  result.witness.n_b = 2;
  for (const MeasurementSetting& setting : bob.settings) {
    result.witness.bob_bloch.push_back(setting.bloch);
  }
  if (sol.status == Status::Optimal) {
    result.witness.alpha.resize(alpha_vars.size());
    for (size_t i = 0; i < alpha_vars.size(); ++i) result.witness.alpha[i] = sol.x(alpha_vars[i]);
    result.witness.operators.resize(2 * n_x);
    for (int x = 0; x < n_x; ++x)
      for (int a = 0; a < 2; ++a) result.witness.operators[a + 2 * x] = F[a + 2 * x].value(sol.x);
    result.verification = conic::verify_solution(prob, sol);
  }
  return result;
}

double evaluate_witness(const SteeringFunctional& witness, const JointDistribution& dist) {
  if (witness.mode != WitnessMode::BobRestricted || witness.alpha.empty()) {
    throw std::domain_error("evaluate_witness: witness has no alpha table");
  }
  if (witness.n_x != dist.n_x || witness.n_y != dist.n_y || witness.n_a != dist.n_a ||
      witness.n_b != dist.n_b) {
    throw std::domain_error("evaluate_witness: shape mismatch");
  }
  double v = -1.0;
  for (int x = 0; x < dist.n_x; ++x)
    for (int y = 0; y < dist.n_y; ++y)
      for (int a = 0; a < dist.n_a; ++a)
        for (int b = 0; b < dist.n_b; ++b)
          v += witness.alpha_at(x, y, a, b) * dist.at(x, y, a, b);
  return v;
}

NsaResult nonsignalling_projection(const JointDistribution& dist_exp, const MeasurementSet& bob) {
  if (bob.n_settings() != dist_exp.n_y) {
    throw std::domain_error("nonsignalling_projection: Bob setting count mismatch");
  }
  for (const MeasurementSetting& setting : bob.settings) {
    CMatrix closure = setting.effects[0] + setting.effects[1];
    if (max_abs(closure - CMatrix::Identity(2, 2)) > 1e-9 ||
        min_eigenvalue(setting.effects[0]) < -tol::psd_eig ||
        min_eigenvalue(setting.effects[1]) < -tol::psd_eig) {
      throw std::domain_error("nonsignalling_projection: invalid Bob POVM");
    }
  }
  const int n_x = dist_exp.n_x, n_y = dist_exp.n_y;

  ConicProblem prob;
  std::vector<HermitianExpr> sigma;  // sigma-tilde_{a|x}, index a + 2x
  sigma.reserve(2 * n_x);
  for (int x = 0; x < n_x; ++x)
    for (int a = 0; a < 2; ++a) sigma.push_back(prob.add_hermitian_var(2, /*psd=*/true));

  for (int x = 0; x < n_x; ++x)
    for (int y = 0; y < n_y; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          LinExpr row = sigma[a + 2 * x].trace_product(bob.settings[y].effects[b]);
          row.constant -= dist_exp.at(x, y, a, b);
          prob.add_nonneg(row);
        }
  for (int x = 0; x + 1 < n_x; ++x) {
    HermitianExpr diff(2);
    for (int a = 0; a < 2; ++a) {
      for (const auto& [idx, coeff] : sigma[a + 2 * x].terms) diff.add(idx, coeff);
      for (const auto& [idx, coeff] : sigma[a + 2 * (x + 1)].terms) diff.add(idx, -coeff);
    }
    prob.add_eq_zero(diff);
  }

  // Minimize (1/n_x) sum tr sigma-tilde - 1, expressed as a maximization.
  LinExpr objective;
  objective.constant = 1.0;
  for (int x = 0; x < n_x; ++x)
    for (int a = 0; a < 2; ++a) {
      for (const auto& [idx, coeff] :
           sigma[a + 2 * x].trace_product(CMatrix::Identity(2, 2)).terms) {
        objective.add(idx, -coeff / n_x);
      }
    }
  prob.set_objective(objective);

  ConicSolution sol = conic::solve(prob);
  if (sol.status != Status::Optimal) {
    throw std::runtime_error("nonsignalling_projection: solver returned " +
                             conic::to_string(sol.status));
  }

  std::vector<CMatrix> members(2 * n_x);
  for (int x = 0; x < n_x; ++x)
    for (int a = 0; a < 2; ++a) members[a + 2 * x] = sigma[a + 2 * x].value(sol.x);

  // Repair solver-scale drift so the output is exactly non-signalling: give
  // every x the average reduced state, then lift all members uniformly by a
  // multiple of the identity if any eigenvalue dips below zero (a uniform
  // lift keeps the reduced states equal).
  CMatrix avg = CMatrix::Zero(2, 2);
  for (int x = 0; x < n_x; ++x)
    for (int a = 0; a < 2; ++a) avg += members[a + 2 * x];
  avg /= n_x;
  for (int x = 0; x < n_x; ++x) {
    CMatrix reduced = members[0 + 2 * x] + members[1 + 2 * x];
    CMatrix shift = (avg - reduced) / 2.0;
    for (int a = 0; a < 2; ++a) members[a + 2 * x] += shift;
  }
  double lift = 0.0;
  for (const CMatrix& m : members) lift = std::max(lift, -min_eigenvalue(m));
  if (lift > 0.0) {
    for (CMatrix& m : members) m += (lift + 1e-15) * CMatrix::Identity(2, 2);
  }
  CMatrix reduced = members[0] + members[1];
  const double t = reduced.trace().real() - 1.0;

  std::vector<double> p(n_x * n_y * 4);
  for (int x = 0; x < n_x; ++x)
    for (int y = 0; y < n_y; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double v =
              (members[a + 2 * x] * bob.settings[y].effects[b]).trace().real() / (1.0 + t);
          p[((x * n_y + y) * 2 + a) * 2 + b] = std::max(v, 0.0);
        }

  return NsaResult{t, Assemblage(std::move(members), 2, n_x),
                   JointDistribution(std::move(p), n_x, n_y, 2, 2)};
}

}  // namespace steerlab
