#ifndef BIHGAP_PRODUCT_SOLVER_HPP
#define BIHGAP_PRODUCT_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bihgap/core_geometry.hpp"
#include "bihgap/gap_analysis.hpp"
#include "bihgap/rational.hpp"

// Biharmonic products M1^{m1}(r1) x M2^{m2}(r2) in S^{n1+n2+1}, with each
// factor sitting in its own sphere S^{n_i}(r_i), r1^2 + r2^2 = 1.  The factor
// tensions must be parallel eigenvectors with eigenvalues
//
//   lambda_1 = 2 r2^2 (m1/r1^2 - m2/r2^2),   lambda_2 = -lambda_1 r1^2/r2^2,
//
// and the norms |H^{phi_i}|^2 = h_i must balance the fourth equation of the
// system.  When both factors are products of a minimal submanifold and a
// circle at maximal |H| (the gap endpoints for lambda_i), every squared factor
// curvature is pinned by the functions g/h below, whose curves cross at a
// single radius where the composed mean curvature reaches (m-4)^2/m^2.
//
// The enumeration solves the flat-torus normal equation exactly: writing
// alpha_k = a_k^2/d_k for the blocks of a product of minimal factors in the
// unit sphere, biharmonicity forces every alpha_k to satisfy
// alpha (d - 2m^2) + 2m - 1/alpha = 0 with d = sum d_k^2/a_k^2, so the
// alpha_k take at most two values 1/(2 N_1), 1/(2 N_2) with N_1 + N_2 = m.
// Each bipartition of the blocks therefore yields one candidate solution.

namespace bihgap {

struct BiproductSpec {
  int m1 = 3, m2 = 3;
  double r1_sq = 0.5, r2_sq = 0.5;
  double h1_sq = 0.0, h2_sq = 0.0;  // |H^{phi_i}|^2 of the factor inclusions
};

struct BiproductResidual {
  double lambda1 = 0.0;        // required eigenvalue of the first factor
  double lambda2 = 0.0;        // required eigenvalue of the second factor
  double line4_residual = 0.0; // balance equation residual
  bool eq1_ok = false;         // non-minimality/properness disjunction
};

// Eigenvalues forced on the factor tensions by the radii.
inline std::pair<double, double> lambdas_from_radii(int m1, int m2, double r1_sq) {
  if (m1 < 1 || m2 < 1) throw std::domain_error("factor dimensions must be >= 1");
  if (!(r1_sq > 0.0) || !(r1_sq < 1.0))
    throw std::domain_error("r1_sq must lie strictly between 0 and 1");
  const double r2_sq = 1.0 - r1_sq;
  const double imbalance = m1 / r1_sq - m2 / r2_sq;
  return {2.0 * r2_sq * imbalance, -2.0 * r1_sq * imbalance};
}

inline BiproductResidual biproduct_residual(const BiproductSpec& spec) {
  if (spec.m1 < 1 || spec.m2 < 1) throw std::domain_error("factor dimensions must be >= 1");
  if (!(spec.r1_sq > 0.0) || !(spec.r2_sq > 0.0) ||
      std::abs(spec.r1_sq + spec.r2_sq - 1.0) > 1e-12)
    throw std::domain_error("factor radii must satisfy r1^2 + r2^2 = 1");
  if (spec.h1_sq < 0.0 || spec.h2_sq < 0.0)
    throw std::domain_error("squared mean curvatures must be nonnegative");
  BiproductResidual res;
  const double imbalance = spec.m1 / spec.r1_sq - spec.m2 / spec.r2_sq;
  res.lambda1 = 2.0 * spec.r2_sq * imbalance;
  res.lambda2 = -2.0 * spec.r1_sq * imbalance;
  res.eq1_ok = spec.h1_sq > 0.0 || spec.h2_sq > 0.0 || std::abs(imbalance) > 1e-12;
  res.line4_residual = spec.m1 * spec.m1 * spec.h1_sq / spec.r1_sq -
                       spec.m2 * spec.m2 * spec.h2_sq / spec.r2_sq +
                       (spec.r2_sq - spec.r1_sq) * imbalance * imbalance;
  return res;
}

// |H|^2 of the composed inclusion M1 x M2 -> S^n from the factor data.
inline double composed_mean_curvature(const BiproductSpec& spec) {
  const int m = spec.m1 + spec.m2;
  const double imbalance = spec.m2 / spec.r2_sq - spec.m1 / spec.r1_sq;
  return (spec.m1 * spec.m1 * spec.h1_sq + spec.m2 * spec.m2 * spec.h2_sq +
          spec.r1_sq * spec.r2_sq * imbalance * imbalance) /
         (double(m) * m);
}

struct RadiusInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool closed = false;
  bool contains(double x) const {
    return closed ? (x >= lo && x <= hi) : (x > lo && x < hi);
  }
};

struct RadiusIntervals {
  RadiusInterval r1_cmc, r1_pmc;  // windows for r1^2
  RadiusInterval r2_cmc, r2_pmc;  // windows for r2^2
};

// Admissible squared-radius windows for proper biharmonic products whose
// factors are non-minimal CMC (open window) or PMC at the gap bound (closed
// window, contained in the former).
inline RadiusIntervals admissible_radius_intervals(int m1, int m2) {
  if (m1 < 2 || m2 < 2) throw std::domain_error("factor dimensions must be >= 2");
  const double m = m1 + m2;
  RadiusIntervals iv;
  iv.r1_cmc = {m1 / (2.0 * m), (2.0 * m1 + m2) / (2.0 * m), false};
  iv.r2_cmc = {m2 / (2.0 * m), (m1 + 2.0 * m2) / (2.0 * m), false};
  iv.r1_pmc = {(m1 + 2.0 * std::sqrt(m1 - 1.0)) / (2.0 * m),
               (2.0 * m1 + m2 - 2.0 * std::sqrt(m2 - 1.0)) / (2.0 * m), true};
  iv.r2_pmc = {(m2 + 2.0 * std::sqrt(m2 - 1.0)) / (2.0 * m),
               (m1 + 2.0 * m2 - 2.0 * std::sqrt(m1 - 1.0)) / (2.0 * m), true};
  return iv;
}

namespace detail {
// Maximal |H|^2 of the composed inclusion when factor 1 sits at the upper gap
// endpoint for its forced eigenvalue, as a function of x = r1^2.
inline double g_curve(int m1, int m2, double x) {
  const double m = m1 + m2;
  const double rad = (2.0 * m * x - m1) * (2.0 * m * x - m1) - 4.0 * (m1 - 1.0);
  if (rad < -1e-12) throw std::domain_error("negative radicand in the g curve");
  const double m2sq = m * m;
  const double t = m - m1 / x;
  return ((m1 - 2.0) * (m1 - 2.0) - 2.0 * m1 * m1) / (2.0 * m2sq * x * x) + m1 / (m * x) +
         (m1 - 2.0) / (2.0 * m2sq) * std::sqrt(std::max(rad, 0.0)) / (x * x) +
         t * t / m2sq;
}
}  // namespace detail

struct BoundScan {
  int m1 = 0, m2 = 0;
  std::vector<double> r1_sq_grid;
  std::vector<double> g_values;    // g~ as a function of r1^2
  std::vector<double> h_values;    // h~ as a function of r1^2
  std::vector<double> min_values;  // pointwise min(g~, h~)
  double crossing_r1_sq = 0.0;     // (3 m1 + m2 - 4) / (4 (m - 2))
  double bound = 0.0;              // analytic maximum (m-4)^2 / m^2
  double max_min = 0.0;            // max of min_values over the grid
  double argmax_r1_sq = 0.0;
};

// Scans the two upper-bound curves over the closed PMC window for r1^2.  The
// exact crossing point is inserted into the grid, so max_min matches the
// analytic bound up to round-off.
inline BoundScan bound_scan(int m1, int m2, int grid_size) {
  if (m1 <= 2 || m2 <= 2) throw std::domain_error("bound scan needs m1, m2 > 2");
  if (grid_size < 3) throw std::domain_error("grid size must be at least 3");
  const double m = m1 + m2;
  const auto iv = admissible_radius_intervals(m1, m2);
  BoundScan scan;
  scan.m1 = m1;
  scan.m2 = m2;
  scan.crossing_r1_sq = (3.0 * m1 + m2 - 4.0) / (4.0 * (m - 2.0));
  scan.bound = (m - 4.0) * (m - 4.0) / (m * m);

  scan.r1_sq_grid.reserve(grid_size + 1);
  const double lo = iv.r1_pmc.lo, hi = iv.r1_pmc.hi;
  for (int i = 0; i < grid_size; ++i)
    scan.r1_sq_grid.push_back(lo + (hi - lo) * i / double(grid_size - 1));
  const auto pos =
      std::lower_bound(scan.r1_sq_grid.begin(), scan.r1_sq_grid.end(), scan.crossing_r1_sq);
  if (pos == scan.r1_sq_grid.end() || *pos != scan.crossing_r1_sq)
    scan.r1_sq_grid.insert(pos, scan.crossing_r1_sq);

  scan.max_min = -std::numeric_limits<double>::infinity();
  for (double x : scan.r1_sq_grid) {
    const double g = detail::g_curve(m1, m2, x);
    const double h = detail::g_curve(m2, m1, 1.0 - x);
    const double mn = std::min(g, h);
    scan.g_values.push_back(g);
    scan.h_values.push_back(h);
    scan.min_values.push_back(mn);
    if (mn > scan.max_min) {
      scan.max_min = mn;
      scan.argmax_r1_sq = x;
    }
  }
  return scan;
}

// Single equation in r1^2 selecting the radii for which both factors can sit
// at their gap endpoints simultaneously; it vanishes at the crossing radius.
inline double first_radius_residual(int m1, int m2, double r1_sq) {
  if (m1 <= 2 || m2 <= 2) throw std::domain_error("first radius residual needs m1, m2 > 2");
  if (!(r1_sq > 0.0) || !(r1_sq < 1.0))
    throw std::domain_error("r1_sq must lie strictly between 0 and 1");
  const double m = m1 + m2;
  const double x = r1_sq, y = 1.0 - r1_sq;
  double rad1 = (2.0 * m * x - m1) * (2.0 * m * x - m1) - 4.0 * (m1 - 1.0);
  double rad2 = (m2 + 2.0 * m1 - 2.0 * m * x) * (m2 + 2.0 * m1 - 2.0 * m * x) - 4.0 * (m2 - 1.0);
  if (rad1 < -1e-12 || rad2 < -1e-12)
    throw std::domain_error("negative radicand: r1_sq is outside the PMC window");
  rad1 = std::max(rad1, 0.0);
  rad2 = std::max(rad2, 0.0);
  const double term1 =
      y * ((m1 - 2.0) * (m1 - 2.0) - 2.0 * m1 * (m1 - m * x) + (m1 - 2.0) * std::sqrt(rad1)) /
      (2.0 * x);
  const double term2 =
      x * ((m2 - 2.0) * (m2 - 2.0) - 2.0 * m2 * (m * x - m1) + (m2 - 2.0) * std::sqrt(rad2)) /
      (2.0 * y);
  const double term3 =
      (1.0 - 2.0 * x) * ((x / y) * m2 * m2 - 2.0 * double(m1) * m2 + (y / x) * m1 * m1);
  return term1 - term2 + term3;
}

// Sign-change brackets of first_radius_residual over the PMC window: the
// search facility for radii beyond the closed-form crossing.
inline std::vector<std::pair<double, double>> first_radius_brackets(int m1, int m2,
                                                                    int grid_size) {
  if (grid_size < 3) throw std::domain_error("grid size must be at least 3");
  const auto iv = admissible_radius_intervals(m1, m2);
  std::vector<std::pair<double, double>> brackets;
  double prev_x = 0.0, prev_v = 0.0;
  bool have_prev = false;
  for (int i = 0; i < grid_size; ++i) {
    const double x = iv.r1_pmc.lo + (iv.r1_pmc.hi - iv.r1_pmc.lo) * i / double(grid_size - 1);
    const double v = first_radius_residual(m1, m2, x);
    if (have_prev && ((prev_v <= 0.0 && v >= 0.0) || (prev_v >= 0.0 && v <= 0.0)))
      brackets.emplace_back(prev_x, x);
    prev_x = x;
    prev_v = v;
    have_prev = true;
  }
  return brackets;
}

struct HMaxFlags {
  bool h1_at_max = false;  // h1_sq equals 1/r1^2 - lambda1/m1 within 1e-12
  bool h2_at_max = false;
  double composed = 0.0;   // |H|^2 of the composed inclusion
};

// Checks whether each factor curvature saturates its CMC bound for the forced
// eigenvalues; when the spec solves the biproduct system, the two flags agree
// and saturation forces |H| = 1 (the pseudo-umbilical case).
inline HMaxFlags h_max_equivalence(const BiproductSpec& spec) {
  const auto [lambda1, lambda2] = lambdas_from_radii(spec.m1, spec.m2, spec.r1_sq);
  HMaxFlags flags;
  flags.h1_at_max = std::abs(spec.h1_sq - (1.0 / spec.r1_sq - lambda1 / spec.m1)) <= 1e-12;
  flags.h2_at_max = std::abs(spec.h2_sq - (1.0 / spec.r2_sq - lambda2 / spec.m2)) <= 1e-12;
  flags.composed = composed_mean_curvature(spec);
  return flags;
}

struct CaseSolution {
  int case_id = 0;                       // 1-based; the 4-block shape follows the
                                         // classical ordering (1 = all equal)
  std::vector<int> dims;                 // block dimensions
  std::vector<Rational> alphas;          // alpha_k = a_k^2 / d_k per block
  std::vector<Rational> block_radius_sq; // a_k^2 = d_k alpha_k
  std::optional<Rational> r1_sq, r2_sq;  // factor radius squares (2- and 4-block shapes)
  Rational h_iota_sq;                    // |H|^2 of the composed inclusion
  bool admissible = false;
  std::string rejection_reason;          // empty when admissible
  bool extension = false;                // dims outside the verified 2-/4-block shapes
  // For the 4-block shape (d1, 1, d3, 1): which gap endpoint each factor
  // curvature realizes ("x1" or "x2"), decided by the signs of
  // m1^2 + m2^2 - m1 m2^2 and m1^2 + m2^2 - m1^2 m2.
  std::optional<std::pair<std::string, std::string>> x_branches;

  ProductConfig config() const {
    ProductConfig cfg;
    cfg.ambient_radius = 1.0;
    cfg.ambient_radius_exact = Rational(1);
    const bool paper4 = dims.size() == 4 && dims[1] == 1 && dims[3] == 1;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      FactorSpec f;
      f.dim = dims[k];
      f.radius = std::sqrt(block_radius_sq[k].to_double());
      f.radius_exact = block_radius_sq[k].exact_sqrt();
      if (paper4)
        f.label = k == 0 ? "L1" : k == 1 ? "b1" : k == 2 ? "L2" : "b2";
      else if (dims.size() == 2)
        f.label = k == 0 ? "M1" : "M2";
      else
        f.label = "block" + std::to_string(k);
      cfg.factors.push_back(std::move(f));
    }
    return cfg;
  }
};

namespace detail {
inline std::vector<std::vector<int>> bipartition_groups(int k) {
  // Subsets containing block 0 (proper, nonempty complement), in the
  // classical order for k = 4; size-ascending lexicographic otherwise.
  if (k == 4) return {{0, 1}, {0, 2}, {0, 3}, {0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {0}};
  std::vector<std::vector<int>> groups;
  for (int size = 1; size < k; ++size) {
    std::vector<int> pick;
    // lexicographic subsets of {1..k-1} of cardinality size-1, prefixed by 0
    std::vector<int> idx(size - 1);
    const int rest = k - 1;
    if (size - 1 > rest) continue;
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      pick = {0};
      for (int i : idx) pick.push_back(i + 1);
      if (static_cast<int>(pick.size()) < k) groups.push_back(pick);
      int j = size - 2;
      while (j >= 0 && idx[j] == rest - (size - 1) + j) --j;
      if (j < 0) break;
      ++idx[j];
      for (int t = j + 1; t < size - 1; ++t) idx[t] = idx[t - 1] + 1;
    }
  }
  return groups;
}
}  // namespace detail

// Enumerates all solutions of the flat normal equation for a product of
// minimal factors with block dimensions `dims` in the unit sphere: the
// all-equal solution plus one candidate per bipartition of the blocks.
// Admissibility follows the factor pairing: for the 4-block shape blocks
// (0,1) and (2,3) form the two non-minimal factors, for the 2-block shape the
// product itself must be non-minimal.  Other shapes are labeled extensions.
inline std::vector<CaseSolution> enumerate_factorizations(const std::vector<int>& dims) {
  if (dims.empty()) throw std::domain_error("block dimension list must be nonempty");
  for (int d : dims)
    if (d < 1) throw std::domain_error("block dimensions must be >= 1");
  const int k = static_cast<int>(dims.size());
  const int m = std::accumulate(dims.begin(), dims.end(), 0);
  const bool paper4 = k == 4 && dims[1] == 1 && dims[3] == 1;
  const bool verified_shape = paper4 || k == 2;

  std::vector<CaseSolution> out;
  const auto finish = [&](CaseSolution sol) {
    sol.dims = dims;
    sol.extension = !verified_shape;
    sol.block_radius_sq.clear();
    for (int i = 0; i < k; ++i) sol.block_radius_sq.push_back(Rational(dims[i]) * sol.alphas[i]);
    if (k == 4) {
      sol.r1_sq = sol.block_radius_sq[0] + sol.block_radius_sq[1];
      sol.r2_sq = sol.block_radius_sq[2] + sol.block_radius_sq[3];
    } else if (k == 2) {
      sol.r1_sq = sol.block_radius_sq[0];
      sol.r2_sq = sol.block_radius_sq[1];
    }
    sol.h_iota_sq =
        product_curvature<Rational>(dims, sol.block_radius_sq, Rational(1)).h_norm_sq;

    std::string reason;
    if (!sol.rejection_reason.empty()) {
      reason = sol.rejection_reason;
    } else if (k == 4) {
      if (sol.alphas[0] == sol.alphas[1]) reason = "factor 1 minimal";
      if (sol.alphas[2] == sol.alphas[3])
        reason += reason.empty() ? "factor 2 minimal" : "; factor 2 minimal";
    } else if (k == 2) {
      if (sol.alphas[0] == sol.alphas[1]) reason = "minimal product";
    } else {
      bool all_equal = true;
      for (int i = 1; i < k; ++i) all_equal = all_equal && sol.alphas[i] == sol.alphas[0];
      if (all_equal) reason = "minimal product";
    }
    sol.admissible = reason.empty();
    sol.rejection_reason = std::move(reason);

    if (paper4 && sol.admissible) {
      const int m1 = dims[0] + 1, m2 = dims[2] + 1;
      if (sol.alphas[0] == sol.alphas[2] && sol.alphas[1] == sol.alphas[3]) {
        sol.x_branches = std::make_pair("x2", "x2");  // crossing configuration
      } else {
        const long long s1 = 1LL * m1 * m1 + 1LL * m2 * m2 - 1LL * m1 * m2 * m2;
        const long long s2 = 1LL * m1 * m1 + 1LL * m2 * m2 - 1LL * m1 * m1 * m2;
        if (s1 > 0 && s2 <= 0)
          sol.x_branches = std::make_pair("x2", "x1");
        else if (s1 <= 0 && s2 > 0)
          sol.x_branches = std::make_pair("x1", "x2");
        else
          sol.x_branches = std::make_pair("x1", "x1");
      }
    }
    out.push_back(std::move(sol));
  };

  // Case 1: all alphas equal, alpha = 1/m (the minimal product).
  CaseSolution all_equal;
  all_equal.case_id = 1;
  all_equal.alphas.assign(k, Rational(1, m));
  finish(std::move(all_equal));

  const auto groups = detail::bipartition_groups(k);
  int case_id = 2;
  for (const auto& group : groups) {
    std::vector<bool> in_group(k, false);
    int n_group = 0;
    for (int i : group) {
      in_group[i] = true;
      n_group += dims[i];
    }
    const int n_other = m - n_group;
    CaseSolution sol;
    sol.case_id = case_id++;
    if (n_group == n_other) {
      // No two-value solution exists; report the degenerate (all-equal) fill.
      sol.alphas.assign(k, Rational(1, m));
      sol.rejection_reason = "equal group dimensions";
      finish(std::move(sol));
      continue;
    }
    // The larger group carries the smaller root 1/(2 N).
    for (int i = 0; i < k; ++i)
      sol.alphas.push_back(in_group[i] ? Rational(1, 2 * n_group) : Rational(1, 2 * n_other));
    finish(std::move(sol));
  }
  return out;
}

// The 4-block enumeration for two non-minimal factors of dimensions m1, m2,
// each a product (minimal) x S^1.
inline std::vector<CaseSolution> enumerate_pair(int m1, int m2) {
  if (m1 < 2 || m2 < 2) throw std::domain_error("factor dimensions must be >= 2");
  return enumerate_factorizations({m1 - 1, 1, m2 - 1, 1});
}

struct RangeSummary {
  int m1 = 0, m2 = 0, m = 0;
  bool interval_empty = false;  // true iff m1 = m2 = 2: only |H| = 1 remains
  Rational upper;               // (m-4)/m, the closure of the |H| interval
  bool includes_one = true;     // the pseudo-umbilical value |H| = 1
  std::optional<CaseSolution> saturation;  // configuration attaining |H| = (m-4)/m

  std::string range_string() const {
    if (interval_empty) return "{1}";
    return "(0, " + upper.str() + "] ∪ {1}";
  }
};

// The set of |H| values of proper biharmonic products of two non-minimal PMC
// factors at the gap bound: {1} alone when m1 = m2 = 2, otherwise
// (0, (m-4)/m] plus the pseudo-umbilical point 1.
inline RangeSummary summarize_range(int m1, int m2) {
  if (m1 < 2 || m2 < 2) throw std::domain_error("factor dimensions must be >= 2");
  RangeSummary s;
  s.m1 = m1;
  s.m2 = m2;
  s.m = m1 + m2;
  s.interval_empty = (m1 == 2 && m2 == 2);
  s.upper = s.interval_empty ? Rational(0) : Rational(s.m - 4, s.m);
  if (!s.interval_empty) {
    for (auto& sol : enumerate_pair(m1, m2)) {
      if (sol.admissible && sol.alphas[0] == sol.alphas[2] && sol.alphas[1] == sol.alphas[3]) {
        s.saturation = std::move(sol);
        break;
      }
    }
  }
  return s;
}

}  // namespace bihgap

#endif  // BIHGAP_PRODUCT_SOLVER_HPP
