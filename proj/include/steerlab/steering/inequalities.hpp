#pragma once

// Four comparison steering criteria evaluated on correlation data:
// linear steering (LS), CHSH-like steering (CHSH-LS), dimension-bounded
// steering (DBS) and rotationally invariant steering (RIS).

#include <string>

#include "steerlab/quantum.hpp"

namespace steerlab {

enum class Criterion { LS, ChshLS, DBS, RIS };

std::string to_string(Criterion c);

struct InequalityReport {
  Criterion name;
  double value = 0.0;
  double bound = 0.0;
  bool violated = false;
  int m = 0;        // settings count
  int d_A = 0;      // DBS only
  double f_plus = 0.0, f_minus = 0.0;  // CHSH-LS only
};

/// |sum_i <A_i B_i>| against the exact max over 2^n sign vectors of
/// lambda_max(sum_i a_i B_i); sqrt(n) for orthogonal Bob settings.
InequalityReport linear_steering(const CorrelationMatrix& M, const MeasurementSet& bob);

/// sqrt(f+) + sqrt(f-) <= 2 with f± built from a 2x2 correlation matrix;
/// Bob's two settings must be mutually unbiased.
InequalityReport chsh_like_steering(const CorrelationMatrix& M);

/// |det M| against (1/sqrt(d_A)) ((sqrt(2 d_A) - 1) / (m sqrt(d_A)))^m.
InequalityReport dbs(const CorrelationMatrix& M, int d_A = 2);

/// Trace norm ||M||_tr <= sqrt(m); Bob's settings must form an orthogonal set.
InequalityReport ris(const CorrelationMatrix& M);

}  // namespace steerlab
