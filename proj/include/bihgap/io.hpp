#ifndef BIHGAP_IO_HPP
#define BIHGAP_IO_HPP

#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bihgap/core_geometry.hpp"
#include "bihgap/fd_oracle.hpp"
#include "bihgap/gap_analysis.hpp"
#include "bihgap/product_solver.hpp"
#include "bihgap/rational.hpp"

// JSON and CSV serialization.  Keys keep insertion order so output is
// byte-stable; doubles round-trip exactly through the JSON layer.  Values
// whose exactness is tracked get a companion "<key>_rational" string "p/q".

namespace bihgap::io {

using json = nlohmann::ordered_json;

inline void emit_number(json& obj, const std::string& key, double value,
                        const std::optional<Rational>& exact = std::nullopt) {
  obj[key] = value;
  if (exact) obj[key + "_rational"] = exact->str();
}

// ProductConfig schema: radius entries are numbers or exact "p/q" strings.
inline json radius_to_json(double value, const std::optional<Rational>& exact) {
  if (exact) return json(exact->str());
  return json(value);
}

inline json to_json(const ProductConfig& config) {
  json j;
  j["ambient_radius"] = radius_to_json(config.ambient_radius, config.ambient_radius_exact);
  j["factors"] = json::array();
  for (const auto& f : config.factors) {
    json jf;
    jf["dim"] = f.dim;
    jf["radius"] = radius_to_json(f.radius, f.radius_exact);
    jf["label"] = f.label;
    j["factors"].push_back(std::move(jf));
  }
  return j;
}

namespace detail {
inline std::pair<double, std::optional<Rational>> parse_radius(const json& v,
                                                               const char* what) {
  if (v.is_number()) {
    const double d = v.get<double>();
    return {d, std::nullopt};
  }
  if (v.is_string()) {
    const Rational r = Rational::from_string(v.get<std::string>());
    return {r.to_double(), r};
  }
  throw std::invalid_argument(std::string(what) + " must be a number or a 'p/q' string");
}
}  // namespace detail

inline ProductConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].empty())
    throw std::invalid_argument("config needs a nonempty 'factors' array");
  ProductConfig config;
  if (j.contains("ambient_radius")) {
    auto [d, exact] = detail::parse_radius(j["ambient_radius"], "ambient_radius");
    config.ambient_radius = d;
    config.ambient_radius_exact = exact;
  } else {
    config.ambient_radius_exact = Rational(1);
  }
  for (const auto& jf : j["factors"]) {
    if (!jf.is_object() || !jf.contains("dim") || !jf.contains("radius"))
      throw std::invalid_argument("each factor needs 'dim' and 'radius'");
    if (!jf["dim"].is_number_integer())
      throw std::invalid_argument("factor 'dim' must be an integer");
    FactorSpec f;
    f.dim = jf["dim"].get<int>();
    auto [d, exact] = detail::parse_radius(jf["radius"], "factor radius");
    f.radius = d;
    f.radius_exact = exact;
    if (jf.contains("label")) {
      if (!jf["label"].is_string()) throw std::invalid_argument("factor 'label' must be a string");
      f.label = jf["label"].get<std::string>();
    }
    config.factors.push_back(std::move(f));
  }
  config.validate();
  return config;
}

inline json to_json(const CurvatureReport& report) {
  json j;
  j["h_components"] = report.h_components;
  j["h_norm_sq"] = report.h_norm_sq;
  j["ah_eigenvalues"] = json::array();
  for (const auto& [mu, mult] : report.ah_eigenvalues)
    j["ah_eigenvalues"].push_back(json{{"value", mu}, {"multiplicity", mult}});
  return j;
}

inline const char* range_kind_name(RangeKind kind) {
  switch (kind) {
    case RangeKind::LambdaNonpositive: return "LambdaNonpositive";
    case RangeKind::LambdaInterior: return "LambdaInterior";
    case RangeKind::LambdaCritical: return "LambdaCritical";
    case RangeKind::Infeasible: return "Infeasible";
  }
  return "Infeasible";
}

inline const char* stencil_name(Stencil s) {
  return s == Stencil::central2 ? "central2" : "central4";
}

inline Stencil stencil_from_name(const std::string& name) {
  if (name == "central2") return Stencil::central2;
  if (name == "central4") return Stencil::central4;
  throw std::invalid_argument("stencil must be 'central2' or 'central4'");
}

inline json to_json(const CaseSolution& sol) {
  json j;
  j["case_id"] = sol.case_id;
  j["dims"] = sol.dims;
  j["alphas"] = json::array();
  j["alphas_rational"] = json::array();
  for (const auto& a : sol.alphas) {
    j["alphas"].push_back(a.to_double());
    j["alphas_rational"].push_back(a.str());
  }
  j["block_radius_sq"] = json::array();
  j["block_radius_sq_rational"] = json::array();
  for (const auto& s : sol.block_radius_sq) {
    j["block_radius_sq"].push_back(s.to_double());
    j["block_radius_sq_rational"].push_back(s.str());
  }
  if (sol.r1_sq) emit_number(j, "r1_sq", sol.r1_sq->to_double(), sol.r1_sq);
  if (sol.r2_sq) emit_number(j, "r2_sq", sol.r2_sq->to_double(), sol.r2_sq);
  emit_number(j, "h_iota_sq", sol.h_iota_sq.to_double(), sol.h_iota_sq);
  j["admissible"] = sol.admissible;
  if (!sol.rejection_reason.empty()) j["rejection_reason"] = sol.rejection_reason;
  j["extension"] = sol.extension;
  if (sol.x_branches) j["x_branches"] = json::array({sol.x_branches->first, sol.x_branches->second});
  j["config"] = to_json(sol.config());
  return j;
}

inline json to_json(const BoundScan& scan) {
  json j;
  j["m1"] = scan.m1;
  j["m2"] = scan.m2;
  j["crossing_r1_sq"] = scan.crossing_r1_sq;
  j["bound"] = scan.bound;
  j["max_min"] = scan.max_min;
  j["argmax_r1_sq"] = scan.argmax_r1_sq;
  j["grid_points"] = scan.r1_sq_grid.size();
  j["r1_sq_grid"] = scan.r1_sq_grid;
  j["g_values"] = scan.g_values;
  j["h_values"] = scan.h_values;
  j["min_values"] = scan.min_values;
  return j;
}

inline void write_csv(const BoundScan& scan, std::ostream& os) {
  os << "r1_sq,g,h,min\n";
  char row[160];
  for (std::size_t i = 0; i < scan.r1_sq_grid.size(); ++i) {
    std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g,%.17g\n", scan.r1_sq_grid[i],
                  scan.g_values[i], scan.h_values[i], scan.min_values[i]);
    os << row;
  }
}

inline json torus_config_json(const TorusEmbedding& torus) {
  ProductConfig config;
  config.ambient_radius = torus.ambient_radius;
  for (std::size_t i = 0; i < torus.circle_radii.size(); ++i) {
    FactorSpec f;
    f.dim = 1;
    f.radius = torus.circle_radii[i];
    f.label = "circle" + std::to_string(i + 1);
    config.factors.push_back(std::move(f));
  }
  return to_json(config);
}

inline json to_json(const VerifyReport& report, const TorusEmbedding& torus) {
  json j;
  j["config"] = torus_config_json(torus);
  j["lambda"] = report.lambda;
  j["h"] = report.step;
  j["stencil"] = stencil_name(report.stencil);
  j["sample_points"] = report.sample_points;
  j["seed"] = report.seed;
  j["max_residual"] = report.max_residual;
  if (std::isnan(report.order_estimate))
    j["order_estimate"] = nullptr;
  else
    j["order_estimate"] = report.order_estimate;
  j["tension_norm"] = report.tension_norm;
  j["h_norm"] = report.h_norm;
  j["tolerance"] = report.tolerance;
  j["pass"] = report.pass;
  return j;
}

inline json to_json(const RangeSummary& summary) {
  json j;
  j["m1"] = summary.m1;
  j["m2"] = summary.m2;
  j["m"] = summary.m;
  j["range"] = summary.range_string();
  j["interval_empty"] = summary.interval_empty;
  if (!summary.interval_empty)
    emit_number(j, "upper", summary.upper.to_double(), summary.upper);
  j["includes_one"] = summary.includes_one;
  if (summary.saturation) j["saturation"] = to_json(*summary.saturation);
  return j;
}

}  // namespace bihgap::io

#endif  // BIHGAP_IO_HPP
