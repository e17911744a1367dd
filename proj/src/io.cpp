#include "steerlab/harness/io.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace steerlab::io {

using nlohmann::json;

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return j;
}

double require_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

int require_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw ParseError(std::string("missing or non-integer field \"") + key + "\"");
  }
  return j[key].get<int>();
}

}  // namespace

JointDistribution load_distribution(const std::string& path) {
  const json j = load_json_file(path);
  const int n_x = require_int(j, "n_x");
  const int n_y = require_int(j, "n_y");
  const int n_a = require_int(j, "n_a");
  const int n_b = require_int(j, "n_b");
  if (n_x < 1 || n_y < 1) throw ParseError("n_x and n_y must be positive");
  if (n_a != 2 || n_b != 2) throw ParseError("only binary outcomes supported (n_a = n_b = 2)");
  if (!j.contains("p") || !j["p"].is_array() || j["p"].size() != static_cast<size_t>(n_x)) {
    throw ParseError("/p: expected an array of length n_x");
  }

  std::vector<double> table(static_cast<size_t>(n_x) * n_y * n_a * n_b, 0.0);
  for (int x = 0; x < n_x; ++x) {
    const json& jx = j["p"][x];
    if (!jx.is_array() || jx.size() != static_cast<size_t>(n_y)) {
      throw ParseError("/p/" + std::to_string(x) + ": expected an array of length n_y");
    }
    for (int y = 0; y < n_y; ++y) {
      const json& jy = jx[y];
      if (!jy.is_array() || jy.size() != static_cast<size_t>(n_a)) {
        throw ParseError("/p/" + std::to_string(x) + "/" + std::to_string(y) +
                         ": expected an array of length n_a");
      }
      double total = 0.0;
      for (int a = 0; a < n_a; ++a) {
        const json& ja = jy[a];
        if (!ja.is_array() || ja.size() != static_cast<size_t>(n_b)) {
          throw ParseError("/p/" + std::to_string(x) + "/" + std::to_string(y) + "/" +
                           std::to_string(a) + ": expected an array of length n_b");
        }
        for (int b = 0; b < n_b; ++b) {
          const double v = require_number(
              ja[b], "/p/" + std::to_string(x) + "/" + std::to_string(y) + "/" +
                         std::to_string(a) + "/" + std::to_string(b));
          if (v < -1e-12) {
            throw ParseError("negative probability at (x=" + std::to_string(x) +
                             ", y=" + std::to_string(y) + ")");
          }
          table[((static_cast<size_t>(x) * n_y + y) * n_a + a) * n_b + b] = std::max(v, 0.0);
          total += std::max(v, 0.0);
        }
      }
      if (std::abs(total - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "distribution not normalized at (x=" << x << ", y=" << y << "): sums to " << total;
        throw ParseError(msg.str());
      }
      for (int a = 0; a < n_a; ++a) {
        for (int b = 0; b < n_b; ++b) {
          table[((static_cast<size_t>(x) * n_y + y) * n_a + a) * n_b + b] /= total;
        }
      }
    }
  }
  return JointDistribution(std::move(table), n_x, n_y, n_a, n_b);
}

MeasurementSet load_bob_measurements(const std::string& path) {
  const json j = load_json_file(path);
  MeasurementSet set;

  if (j.contains("bloch")) {
    const json& jb = j["bloch"];
    if (!jb.is_array() || jb.empty()) throw ParseError("/bloch: expected a non-empty array");
    for (size_t y = 0; y < jb.size(); ++y) {
      const json& row = jb[y];
      if (!row.is_array() || row.size() != 3) {
        throw ParseError("/bloch/" + std::to_string(y) + ": expected 3 doubles");
      }
      Vec3 n;
      for (int k = 0; k < 3; ++k) {
        n[k] = require_number(row[k], "/bloch/" + std::to_string(y) + "/" + std::to_string(k));
      }
      try {
        set.settings.push_back(projective_setting(n));
      } catch (const std::exception& e) {
        throw ParseError("/bloch/" + std::to_string(y) + ": " + e.what());
      }
    }
    return set;
  }

  if (j.contains("effects")) {
    const json& je = j["effects"];
    if (!je.is_array() || je.empty()) throw ParseError("/effects: expected a non-empty array");
    for (size_t y = 0; y < je.size(); ++y) {
      const json& pair = je[y];
      if (!pair.is_array() || pair.size() != 2) {
        throw ParseError("/effects/" + std::to_string(y) + ": expected two 2x2 matrices");
      }
      std::array<CMatrix, 2> effects;
      for (int b = 0; b < 2; ++b) {
        try {
          effects[b] = matrix_from_json(pair[b]);
        } catch (const std::exception& e) {
          throw ParseError("/effects/" + std::to_string(y) + "/" + std::to_string(b) + ": " +
                           e.what());
        }
        if (effects[b].rows() != 2 || effects[b].cols() != 2) {
          throw ParseError("/effects/" + std::to_string(y) + "/" + std::to_string(b) +
                           ": expected a 2x2 matrix");
        }
        if (!is_hermitian(effects[b], 1e-9)) {
          throw ParseError("/effects/" + std::to_string(y) + "/" + std::to_string(b) +
                           ": not Hermitian");
        }
        if (min_eigenvalue(effects[b]) < -1e-9) {
          throw ParseError("/effects/" + std::to_string(y) + "/" + std::to_string(b) +
                           ": not positive semidefinite");
        }
      }
      if (max_abs(effects[0] + effects[1] - CMatrix::Identity(2, 2)) > 1e-9) {
        throw ParseError("/effects/" + std::to_string(y) + ": effects do not sum to identity");
      }
      if (max_abs(effects[0] * effects[0] - effects[0]) > 1e-8) {
        throw ParseError("/effects/" + std::to_string(y) + ": effects must be projective");
      }
      const CMatrix obs = effects[0] - effects[1];
      Vec3 n;
      n[0] = 0.5 * (obs * pauli(1)).trace().real();
      n[1] = 0.5 * (obs * pauli(2)).trace().real();
      n[2] = 0.5 * (obs * pauli(3)).trace().real();
      MeasurementSetting setting;
      setting.bloch = n.normalized();
      setting.effects = effects;
      set.settings.push_back(setting);
    }
    return set;
  }

  throw ParseError("expected a \"bloch\" or \"effects\" field");
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < m.cols(); ++k) {
      row.push_back({round_sig(m(i, k).real()), round_sig(m(i, k).imag())});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a matrix as nested arrays");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols) {
      throw ParseError("ragged matrix rows");
    }
    for (int k = 0; k < cols; ++k) {
      const json& entry = j[i][k];
      if (!entry.is_array() || entry.size() != 2) {
        throw ParseError("matrix entries must be [re, im] pairs");
      }
      m(i, k) = Complex(require_number(entry[0], "matrix re"), require_number(entry[1], "matrix im"));
    }
  }
  return m;
}

json witness_to_json(const SteeringFunctional& witness) {
  json j;
  j["mode"] = witness.mode == WitnessMode::BobRestricted ? "bob-restricted" : "free-F";
  j["n_x"] = witness.n_x;
  j["n_y"] = witness.n_y;
  j["n_a"] = witness.n_a;
  j["n_b"] = witness.n_b;
  if (!witness.alpha.empty()) {
    json alpha = json::array();
    for (double v : witness.alpha) alpha.push_back(round_sig(v));
    j["alpha"] = std::move(alpha);
  }
  if (!witness.bob_bloch.empty()) {
    json bloch = json::array();
    for (const Vec3& n : witness.bob_bloch) {
      bloch.push_back({round_sig(n[0]), round_sig(n[1]), round_sig(n[2])});
    }
    j["bob_bloch"] = std::move(bloch);
  }
  json ops = json::array();
  for (const CMatrix& f : witness.operators) ops.push_back(matrix_to_json(f));
  j["operators"] = std::move(ops);
  return j;
}

SteeringFunctional witness_from_json(const json& j) {
  SteeringFunctional w;
  const std::string mode = j.value("mode", "bob-restricted");
  w.mode = mode == "free-F" ? WitnessMode::FreeF : WitnessMode::BobRestricted;
  w.n_x = require_int(j, "n_x");
  w.n_y = require_int(j, "n_y");
  w.n_a = require_int(j, "n_a");
  w.n_b = require_int(j, "n_b");
  if (j.contains("alpha")) {
    const size_t expected = static_cast<size_t>(w.n_x) * w.n_y * w.n_a * w.n_b;
    if (!j["alpha"].is_array() || j["alpha"].size() != expected) {
      throw ParseError("/alpha: expected n_x*n_y*n_a*n_b entries");
    }
    for (const json& v : j["alpha"]) w.alpha.push_back(require_number(v, "/alpha entry"));
  }
  if (j.contains("bob_bloch")) {
    for (const json& row : j["bob_bloch"]) {
      if (!row.is_array() || row.size() != 3) throw ParseError("/bob_bloch: expected 3-vectors");
      w.bob_bloch.emplace_back(require_number(row[0], "bloch"), require_number(row[1], "bloch"),
                               require_number(row[2], "bloch"));
    }
  }
  if (j.contains("operators")) {
    for (const json& op : j["operators"]) w.operators.push_back(matrix_from_json(op));
  }
  return w;
}

void save_distribution(const JointDistribution& dist, const std::string& path) {
  json j;
  j["n_x"] = dist.n_x;
  j["n_y"] = dist.n_y;
  j["n_a"] = dist.n_a;
  j["n_b"] = dist.n_b;
  json px = json::array();
  for (int x = 0; x < dist.n_x; ++x) {
    json py = json::array();
    for (int y = 0; y < dist.n_y; ++y) {
      json pa = json::array();
      for (int a = 0; a < dist.n_a; ++a) {
        json pb = json::array();
        for (int b = 0; b < dist.n_b; ++b) pb.push_back(round_sig(dist.at(x, y, a, b)));
        pa.push_back(std::move(pb));
      }
      py.push_back(std::move(pa));
    }
    px.push_back(std::move(py));
  }
  j["p"] = std::move(px);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

double round_sig(double v, int digits) {
  if (v == 0.0 || !std::isfinite(v)) return v;
  const double scale = std::pow(10.0, digits - 1 - std::floor(std::log10(std::abs(v))));
  return std::round(v * scale) / scale;
}

}  // namespace steerlab::io
