#pragma once

// JSON ingestion and serialization for the experiment harness.

#include <nlohmann/json_fwd.hpp>
#include <stdexcept>
#include <string>

#include "steerlab/quantum.hpp"
#include "steerlab/steering/sdp.hpp"

namespace steerlab::io {

/// Schema or syntax problem in an input file (CLI exit code 2).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Distribution file: {"n_x","n_y","n_a":2,"n_b":2,"p":[x][y][a][b]}.
/// Normalization drift up to 1e-6 per setting pair is repaired; anything
/// worse is rejected naming the offending (x, y).
JointDistribution load_distribution(const std::string& path);

/// Bob measurement file: {"bloch": [[3 doubles] x n_y]} or
/// {"effects": [[2x2 matrix as [re,im] pairs] x 2] x n_y}. Hermiticity and
/// POVM closure are validated; effects must be rank-1 projective.
MeasurementSet load_bob_measurements(const std::string& path);

nlohmann::json matrix_to_json(const CMatrix& m);  // [re,im] pairs, row-major
CMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json witness_to_json(const SteeringFunctional& witness);
SteeringFunctional witness_from_json(const nlohmann::json& j);

void save_distribution(const JointDistribution& dist, const std::string& path);

/// Rounds to 12 significant digits (report emission convention).
double round_sig(double v, int digits = 12);

}  // namespace steerlab::io
