#ifndef BIHGAP_CLI_HPP
#define BIHGAP_CLI_HPP

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bihgap/core_geometry.hpp"
#include "bihgap/fd_oracle.hpp"
#include "bihgap/gap_analysis.hpp"
#include "bihgap/io.hpp"
#include "bihgap/product_solver.hpp"

// Command-line front end.  run() is the whole program; the binary's main() is
// a thin wrapper, and tests drive the same entry point in-process.  Exit
// codes: 0 success, 2 domain or usage error, 3 residual check failure.

namespace bihgap::cli {

namespace detail {

inline io::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  io::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

// Accepts a bare config, any object carrying "config", an object with a
// "solutions" array, or an array of any of these; check --config therefore
// re-reads everything enumerate and check themselves emit.
inline void collect_configs(const io::json& j, std::vector<ProductConfig>& out) {
  if (j.is_array()) {
    for (const auto& e : j) collect_configs(e, out);
    return;
  }
  if (j.is_object()) {
    if (j.contains("factors")) {
      out.push_back(io::config_from_json(j));
      return;
    }
    if (j.contains("config")) {
      collect_configs(j["config"], out);
      return;
    }
    if (j.contains("solutions")) {
      collect_configs(j["solutions"], out);
      return;
    }
  }
  throw std::invalid_argument("no product config found in the JSON input");
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"curvature gap and biharmonicity toolkit for products of spheres"};
  app.require_subcommand(1);

  int m = 3, m1 = 3, m2 = 3;
  double r = 1.0, lambda = 0.0;
  bool lambda_given = false;
  std::string branch = "x2";
  std::string config_path, out_path;
  std::vector<int> dims;
  int grid = 10000;
  double tol_algebraic = 1e-12, tol_oracle = 1e-4;
  double step = 1e-3;
  std::string stencil = "central2";
  int samples = 4;
  std::uint64_t seed = 1729;

  auto* gap_cmd = app.add_subcommand("gap", "endpoints of the |H|^2 gap");
  gap_cmd->add_option("--m", m, "submanifold dimension")->required();
  gap_cmd->add_option("--r", r, "ambient sphere radius");
  gap_cmd->add_option("--lambda", lambda, "tension eigenvalue");

  auto* sc_cmd = app.add_subcommand("sphere-circle",
                                    "lambda-biharmonic S^{m-1}(r1) x S^1(r2) products");
  sc_cmd->add_option("--m", m, "product dimension")->required();
  sc_cmd->add_option("--r", r, "ambient sphere radius");
  sc_cmd->add_option("--lambda", lambda, "tension eigenvalue");

  auto* split_cmd = app.add_subcommand("split", "splitting radii at a gap endpoint");
  split_cmd->add_option("--m", m, "submanifold dimension")->required();
  split_cmd->add_option("--r", r, "ambient sphere radius");
  split_cmd->add_option("--lambda", lambda, "tension eigenvalue");
  split_cmd->add_option("--branch", branch, "gap endpoint branch: x1 or x2")
      ->check(CLI::IsMember({"x1", "x2"}));

  auto* check_cmd = app.add_subcommand("check", "biharmonicity residuals of a product config");
  check_cmd->add_option("--config", config_path, "ProductConfig JSON file")->required();
  auto* check_lambda_opt =
      check_cmd->add_option("--lambda", lambda, "check tau_2 = lambda tau instead of tau_2 = 0");
  check_cmd->add_option("--tol", tol_algebraic, "residual tolerance");

  auto* enum_cmd = app.add_subcommand("enumerate", "exact biharmonic product solutions");
  enum_cmd->add_option("--m1", m1, "first factor dimension");
  enum_cmd->add_option("--m2", m2, "second factor dimension");
  auto* enum_dims_opt = enum_cmd->add_option("--dims", dims, "explicit block dimensions")
                            ->delimiter(',');

  auto* scan_cmd = app.add_subcommand("scan", "bound curves over the admissible radius window");
  scan_cmd->add_option("--m1", m1, "first factor dimension")->required();
  scan_cmd->add_option("--m2", m2, "second factor dimension")->required();
  scan_cmd->add_option("--grid", grid, "number of grid points");
  scan_cmd->add_option("--out", out_path, "CSV output path");

  auto* sum_cmd = app.add_subcommand("summarize", "attainable |H| range for biharmonic products");
  sum_cmd->add_option("--m1", m1, "first factor dimension")->required();
  sum_cmd->add_option("--m2", m2, "second factor dimension")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "finite-difference verification of a circle product");
  // The step option is spelled --h, so the subcommand keeps only the long help
  // flag; the default -h short name would collide.
  oracle_cmd->set_help_flag("--help", "print help");
  oracle_cmd->add_option("--config", config_path, "ProductConfig JSON file (circle factors)")
      ->required();
  oracle_cmd->add_option("--lambda", lambda, "tension eigenvalue");
  oracle_cmd->add_option("--h", step, "finite-difference step");
  oracle_cmd->add_option("--stencil", stencil, "central2 or central4")
      ->check(CLI::IsMember({"central2", "central4"}));
  oracle_cmd->add_option("--samples", samples, "random sample points");
  oracle_cmd->add_option("--seed", seed, "random seed");
  oracle_cmd->add_option("--tol", tol_oracle, "residual tolerance");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("bihgap");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  lambda_given = check_lambda_opt->count() > 0;

  try {
    if (*gap_cmd) {
      const GapParams params{m, r, lambda};
      const GapResult res = gap_endpoints(params);
      io::json j;
      j["m"] = m;
      j["r"] = r;
      j["lambda"] = lambda;
      j["lambda_threshold"] = res.lambda_threshold;
      if (res.range_kind == RangeKind::Infeasible) {
        j["x1"] = nullptr;
        j["x2"] = nullptr;
      } else {
        j["x1"] = res.x1;
        j["x2"] = res.x2;
      }
      j["range_kind"] = io::range_kind_name(res.range_kind);
      out << j.dump(2) << "\n";
      return 0;
    }

    if (*sc_cmd) {
      const auto sols = sphere_circle_solutions(m, r, lambda);
      io::json j;
      j["m"] = m;
      j["r"] = r;
      j["lambda"] = lambda;
      j["solutions"] = io::json::array();
      for (const auto& s : sols) {
        io::json js;
        js["r1_sq"] = s.r1_sq;
        js["r2_sq"] = s.r2_sq;
        js["case_id"] = s.case_id;
        js["alpha"] = s.alpha;
        if (s.alpha_root > 0) js["alpha_root"] = s.alpha_root;
        j["solutions"].push_back(std::move(js));
      }
      out << j.dump(2) << "\n";
      return 0;
    }

    if (*split_cmd) {
      const GapParams params{m, r, lambda};
      const auto [r1_sq, r2_sq] =
          splitting_radii(params, branch == "x1" ? Branch::x1 : Branch::x2);
      io::json j;
      j["m"] = m;
      j["r"] = r;
      j["lambda"] = lambda;
      j["branch"] = branch;
      j["r1_sq"] = r1_sq;
      j["r2_sq"] = r2_sq;
      out << j.dump(2) << "\n";
      return 0;
    }

    if (*check_cmd) {
      const auto input = detail::load_json_file(config_path);
      std::vector<ProductConfig> configs;
      detail::collect_configs(input, configs);
      io::json reports = io::json::array();
      bool all_pass = true;
      for (const auto& config : configs) {
        const std::vector<double> residuals =
            lambda_given ? lambda_residual(config, lambda) : biharmonic_residual(config);
        double max_abs = 0.0;
        for (double v : residuals) max_abs = std::max(max_abs, std::abs(v));
        const bool pass = max_abs <= tol_algebraic;
        all_pass = all_pass && pass;
        const auto curvature = mean_curvature(config);
        io::json jr;
        jr["config"] = io::to_json(config);
        jr["mode"] = lambda_given ? "lambda" : "biharmonic";
        jr["lambda"] = lambda_given ? lambda : 0.0;
        jr["tolerance"] = tol_algebraic;
        jr["residuals"] = residuals;
        jr["max_abs_residual"] = max_abs;
        jr["pass"] = pass;
        jr["proper"] = curvature.h_norm_sq > 1e-12;
        jr["curvature"] = io::to_json(curvature);
        reports.push_back(std::move(jr));
      }
      if (configs.size() == 1) {
        out << reports[0].dump(2) << "\n";
      } else {
        io::json j;
        j["reports"] = std::move(reports);
        j["pass"] = all_pass;
        out << j.dump(2) << "\n";
      }
      return all_pass ? 0 : 3;
    }

    if (*enum_cmd) {
      std::vector<int> block_dims = dims;
      const bool pair_mode = enum_dims_opt->count() == 0;
      if (pair_mode) {
        if (enum_cmd->count("--m1") == 0 || enum_cmd->count("--m2") == 0)
          throw std::invalid_argument("enumerate needs either --dims or both --m1 and --m2");
        if (m1 < 2 || m2 < 2)
          throw std::invalid_argument("factor dimensions must be >= 2");
        block_dims = {m1 - 1, 1, m2 - 1, 1};
      }
      const auto sols = enumerate_factorizations(block_dims);
      io::json j;
      j["dims"] = block_dims;
      if (pair_mode) {
        j["m1"] = m1;
        j["m2"] = m2;
      }
      int admissible = 0;
      j["solutions"] = io::json::array();
      for (const auto& s : sols) {
        admissible += s.admissible ? 1 : 0;
        j["solutions"].push_back(io::to_json(s));
      }
      j["admissible_count"] = admissible;
      out << j.dump(2) << "\n";
      return 0;
    }

    if (*scan_cmd) {
      const BoundScan scan = bound_scan(m1, m2, grid);
      const auto brackets = first_radius_brackets(m1, m2, grid);
      if (!out_path.empty()) {
        std::ofstream csv(out_path);
        if (!csv) throw std::invalid_argument("cannot open CSV output path: " + out_path);
        io::write_csv(scan, csv);
      }
      io::json j;
      j["m1"] = m1;
      j["m2"] = m2;
      j["grid_points"] = scan.r1_sq_grid.size();
      j["window"] = io::json::array({scan.r1_sq_grid.front(), scan.r1_sq_grid.back()});
      j["crossing_r1_sq"] = scan.crossing_r1_sq;
      j["bound"] = scan.bound;
      j["max_min"] = scan.max_min;
      j["argmax_r1_sq"] = scan.argmax_r1_sq;
      j["first_radius_brackets"] = io::json::array();
      for (const auto& [lo, hi] : brackets)
        j["first_radius_brackets"].push_back(io::json::array({lo, hi}));
      if (!out_path.empty()) j["csv"] = out_path;
      out << j.dump(2) << "\n";
      return 0;
    }

    if (*sum_cmd) {
      out << io::to_json(summarize_range(m1, m2)).dump(2) << "\n";
      return 0;
    }

    if (*oracle_cmd) {
      const auto input = detail::load_json_file(config_path);
      std::vector<ProductConfig> configs;
      detail::collect_configs(input, configs);
      if (configs.size() != 1)
        throw std::invalid_argument("the oracle needs exactly one product config");
      TorusEmbedding torus;
      torus.ambient_radius = configs[0].ambient_radius;
      for (const auto& f : configs[0].factors) {
        if (f.dim != 1)
          throw std::domain_error(
              "the oracle handles circle products only (every factor must have dim 1)");
        torus.circle_radii.push_back(f.radius);
      }
      FDSettings settings;
      settings.step = step;
      settings.stencil = io::stencil_from_name(stencil);
      settings.sample_points = samples;
      settings.seed = seed;
      const VerifyReport report = verify(torus, lambda, settings, tol_oracle);
      out << io::to_json(report, torus).dump(2) << "\n";
      return report.pass ? 0 : 3;
    }
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace bihgap::cli

#endif  // BIHGAP_CLI_HPP
