#pragma once

// Ensemble and assignment files (JSON), number formatting for CSV output.
//
// Ensemble file:
//   { "probs": [p0, p1, ...],
//     "states": [ [[ [re, im], ... ], ...], ... ],   // row-major, one matrix per state
//     "factor_dims": [d1, d2, ...] }                 // optional, defaults to [dim]

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "vcomp/errors.hpp"
#include "vcomp/extopt.hpp"
#include "vcomp/states.hpp"

namespace vcomp::io {

using Json = nlohmann::json;

inline constexpr double kRenormalizeTolerance = 1e-9;

// Nine significant digits; negative zero prints as 0.
inline std::string format_number(double x) {
  if (x == 0.0) x = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

namespace detail {

inline double number_at(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

inline Complex complex_at(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected an [re, im] pair");
  return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]")};
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace detail

inline Ensemble ensemble_from_json(const Json& j, const std::string& source = "ensemble") {
  if (!j.is_object()) throw ParseError(source + ": top level must be an object");
  if (!j.contains("probs") || !j["probs"].is_array()) throw ParseError(source + ": missing array field \"probs\"");
  if (!j.contains("states") || !j["states"].is_array()) throw ParseError(source + ": missing array field \"states\"");

  std::vector<double> probs;
  for (std::size_t i = 0; i < j["probs"].size(); ++i) {
    probs.push_back(detail::number_at(j["probs"][i], source + ": probs[" + std::to_string(i) + "]"));
  }
  const Json& states_json = j["states"];
  if (probs.size() != states_json.size()) {
    throw ValidationError(source + ": " + std::to_string(probs.size()) + " probabilities for " +
                          std::to_string(states_json.size()) + " states");
  }
  if (probs.empty()) throw ValidationError(source + ": ensemble is empty");

  double sum = 0.0;
  for (double p : probs) sum += p;
  if (std::abs(sum - 1.0) > kRenormalizeTolerance) {
    throw ValidationError(source + ": probability sum " + std::to_string(sum) + " deviates from 1");
  }
  for (double& p : probs) p /= sum;

  Dims dims;
  if (j.contains("factor_dims")) {
    if (!j["factor_dims"].is_array()) throw ParseError(source + ": factor_dims must be an array");
    for (const auto& d : j["factor_dims"]) {
      if (!d.is_number_unsigned() || d.get<std::size_t>() == 0) {
        throw ParseError(source + ": factor_dims entries must be positive integers");
      }
      dims.push_back(d.get<std::size_t>());
    }
  }

  std::vector<DensityMatrix> states;
  for (std::size_t i = 0; i < states_json.size(); ++i) {
    const std::string where = source + ": states[" + std::to_string(i) + "]";
    const Json& rows = states_json[i];
    if (!rows.is_array() || rows.empty()) throw ParseError(where + ": expected a nonempty array of rows");
    const std::size_t d = rows.size();
    ComplexMatrix m(d, d);
    for (std::size_t r = 0; r < d; ++r) {
      if (!rows[r].is_array() || rows[r].size() != d) {
        throw ParseError(where + "[" + std::to_string(r) + "]: expected " + std::to_string(d) + " entries");
      }
      for (std::size_t c = 0; c < d; ++c) {
        m(r, c) = detail::complex_at(rows[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
      }
    }
    try {
      states.emplace_back(std::move(m), dims.empty() ? Dims{d} : dims);
    } catch (const NotPsdError& e) {
      throw NotPsdError("state " + std::to_string(i) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("state " + std::to_string(i) + ": " + e.what());
    }
  }
  return Ensemble(std::move(probs), std::move(states));
}

inline Ensemble load_ensemble(const std::string& path) {
  return ensemble_from_json(detail::read_json_file(path), path);
}

inline Json ensemble_to_json(const Ensemble& e) {
  Json states = Json::array();
  for (const auto& s : e.states()) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < s.matrix().rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index c = 0; c < s.matrix().cols(); ++c) row.push_back(detail::complex_to_json(s.matrix()(r, c)));
      rows.push_back(std::move(row));
    }
    states.push_back(std::move(rows));
  }
  return Json{{"probs", e.probs()}, {"states", std::move(states)}, {"factor_dims", e.factor_dims()}};
}

inline Json assignment_to_json(const ExtensionAssignment& a, std::size_t block_length = 1) {
  Json params = Json::array();
  for (const auto& p : a.params) params.push_back(std::vector<double>(p.data(), p.data() + p.size()));
  return Json{{"ancilla_dim", a.ancilla_dim},
              {"purifier_dim", a.purifier_dim},
              {"block_length", block_length},
              {"params", std::move(params)}};
}

struct LoadedAssignment {
  ExtensionAssignment assignment;
  std::size_t block_length = 1;
};

inline LoadedAssignment assignment_from_json(const Json& j, const std::string& source = "assignment") {
  auto positive = [&](const char* key) -> std::size_t {
    if (!j.contains(key) || !j[key].is_number_unsigned() || j[key].get<std::size_t>() == 0) {
      throw ParseError(source + ": \"" + key + "\" must be a positive integer");
    }
    return j[key].get<std::size_t>();
  };
  LoadedAssignment out;
  out.assignment.ancilla_dim = positive("ancilla_dim");
  out.assignment.purifier_dim = positive("purifier_dim");
  out.block_length = j.contains("block_length") ? positive("block_length") : 1;
  if (!j.contains("params") || !j["params"].is_array()) throw ParseError(source + ": missing array field \"params\"");
  const std::size_t d = out.assignment.generator_dim();
  for (std::size_t i = 0; i < j["params"].size(); ++i) {
    const Json& p = j["params"][i];
    const std::string where = source + ": params[" + std::to_string(i) + "]";
    if (!p.is_array() || p.size() != d * d) {
      throw ParseError(where + ": expected " + std::to_string(d * d) + " numbers");
    }
    RealVector v(static_cast<Eigen::Index>(p.size()));
    for (std::size_t k = 0; k < p.size(); ++k) v(static_cast<Eigen::Index>(k)) = detail::number_at(p[k], where);
    out.assignment.params.push_back(std::move(v));
  }
  return out;
}

inline LoadedAssignment load_assignment(const std::string& path) {
  return assignment_from_json(detail::read_json_file(path), path);
}

}  // namespace vcomp::io
