#ifndef BIHGAP_GAP_ANALYSIS_HPP
#define BIHGAP_GAP_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

// Mean-curvature gap of lambda-biharmonic PMC submanifolds M^m of S^n(r).
//
// For a non-minimal PMC inclusion that is lambda-biharmonic, x = |H|^2 solves
//
//   m^4 x^2 + m^2 (m lambda - (m-2)^2 / r^2) x + (m-1) lambda^2 = 0,
//
// whose discriminant factors as (m^4 (m-2)^2 / r^4) ((lambda r^2 - m)^2 - 4(m-1)).
// The admissible range of |H|^2 is controlled by the threshold
// lambda* = (m - 2 sqrt(m-1)) / r^2: below it both roots are real, at it they
// collapse, above it there is no solution.  When |H|^2 sits at an endpoint the
// submanifold splits locally as a product with a circle factor; the spectrum
// of A_H at the endpoint has exactly the two eigenvalues computed in
// spectrum_detail, and the circle radius is determined by its curvature kappa.

namespace bihgap {

struct GapParams {
  int m = 3;           // dimension of the submanifold, >= 2
  double r = 1.0;      // ambient sphere radius
  double lambda = 0.0; // tension eigenvalue in tau_2 = lambda tau
};

enum class RangeKind {
  LambdaNonpositive,  // lambda <= 0: non-minimal range is (0, x2]
  LambdaInterior,     // 0 < lambda < lambda*: range is [x1, x2]
  LambdaCritical,     // lambda = lambda*: the two endpoints collapse, {x2}
  Infeasible,         // lambda > lambda*: no non-minimal solution
};

struct GapResult {
  double lambda_threshold = 0.0;  // lambda* = (m - 2 sqrt(m-1)) / r^2
  double x1 = 0.0;                // lower endpoint of |H|^2 (0 iff lambda = 0)
  double x2 = 0.0;                // upper endpoint of |H|^2
  RangeKind range_kind = RangeKind::LambdaNonpositive;
};

struct SpectrumDetail {
  double theta = 0.0;          // A_H eigenvalue of multiplicity m-1 (the M' block)
  double omega = 0.0;          // simple A_H eigenvalue (the circle block)
  double sigma = 0.0;          // traceless gap parameter, theta - omega = m sigma
  double kappa = 0.0;          // curvature of the splitting circle factor
  double circle_radius = 0.0;  // r / sqrt(1 + kappa^2 r^2)
  bool at_endpoint = true;     // whether x matched a gap endpoint within 1e-10
};

enum class Branch { x1, x2 };

inline void validate_gap_params(const GapParams& p) {
  if (p.m < 2) throw std::domain_error("submanifold dimension must be >= 2");
  if (!(p.r > 0.0)) throw std::domain_error("ambient radius must be positive");
}

// Upper bound 1/r^2 - lambda/m for |H|^2 of any non-minimal lambda-biharmonic
// CMC submanifold of S^n(r).
inline double cmc_bound(const GapParams& p) {
  validate_gap_params(p);
  return 1.0 / (p.r * p.r) - p.lambda / p.m;
}

inline double lambda_threshold(int m, double r) {
  return (m - 2.0 * std::sqrt(double(m - 1))) / (r * r);
}

// (lambda r^2 - m)^2 - 4(m-1): the discriminant of the gap quadratic up to the
// positive factor m^4 (m-2)^2 / r^4.  Nonnegative iff lambda <= lambda*.
inline double gap_radicand(int m, double r, double lambda) {
  const double t = m - lambda * r * r;
  return t * t - 4.0 * (m - 1);
}

namespace detail {
// |Delta| <= 1e-10 * m^4 / r^4 in the full discriminant, i.e. the scaled test
// (m-2)^2 |radicand| <= 1e-10 on the reduced one.
inline bool gap_critical(int m, double radicand) {
  const double s = double(m - 2) * double(m - 2);
  return std::abs(radicand) * s <= 1e-10;
}
}  // namespace detail

// Endpoints of the |H|^2 gap for non-minimal lambda-biharmonic PMC
// submanifolds of S^n(r), m > 2.  Roots are computed in the stable
// product/quotient form, so x1 is exactly 0 when lambda = 0.
inline GapResult gap_endpoints(const GapParams& p) {
  validate_gap_params(p);
  if (p.m == 2)
    throw std::domain_error(
        "gap endpoints need m > 2; dimension 2 is covered by the surface analysis");
  const double m = p.m;
  const double r2 = p.r * p.r;
  GapResult result;
  result.lambda_threshold = lambda_threshold(p.m, p.r);

  // Feasibility is lambda <= lambda*, i.e. m - lambda r^2 >= 2 sqrt(m-1);
  // the radicand alone is not enough because it is also positive far above
  // the threshold, where the quadratic has only negative roots.
  const double radicand = gap_radicand(p.m, p.r, p.lambda);
  const bool critical = (m - p.lambda * r2 > 0.0) && detail::gap_critical(p.m, radicand);
  if (!critical && (radicand < 0.0 || p.lambda > result.lambda_threshold)) {
    result.range_kind = RangeKind::Infeasible;
    result.x1 = result.x2 = std::numeric_limits<double>::quiet_NaN();
    return result;
  }

  const double m2 = m * m;
  const double a = m2 * m2;
  const double b = m2 * (m * p.lambda - (m - 2) * (m - 2) / r2);
  const double c = (m - 1) * p.lambda * p.lambda;
  if (critical) {
    result.range_kind = RangeKind::LambdaCritical;
    result.x1 = result.x2 = -b / (2.0 * a);
    return result;
  }
  // b < 0 throughout the feasible range, so q = (-b + sqrt(disc)) / 2 is the
  // well-conditioned half of the root pair.
  const double sqrt_disc = m2 * (m - 2) / r2 * std::sqrt(radicand);
  const double q = (-b + sqrt_disc) / 2.0;
  result.x2 = q / a;
  result.x1 = c / q;
  result.range_kind = p.lambda <= 0.0 ? RangeKind::LambdaNonpositive : RangeKind::LambdaInterior;
  return result;
}

// Squared radii (r1^2, r2^2) of the local splitting M' x S^1(r2) at a gap
// endpoint; r1^2 + r2^2 = r^2.  Branch x2 exists for every feasible lambda,
// branch x1 only for lambda > 0.
inline std::pair<double, double> splitting_radii(const GapParams& p, Branch branch) {
  validate_gap_params(p);
  if (p.m == 2) throw std::domain_error("splitting radii need m > 2");
  if (branch == Branch::x1 && !(p.lambda > 0.0))
    throw std::domain_error("the x1 splitting branch requires lambda > 0");
  const double m = p.m;
  const double r2 = p.r * p.r;
  const double lr2 = p.lambda * r2;
  double radicand = gap_radicand(p.m, p.r, p.lambda);
  const bool critical = (m - lr2 > 0.0) && detail::gap_critical(p.m, radicand);
  if (radicand < 0.0 || p.lambda > lambda_threshold(p.m, p.r)) {
    if (!critical)
      throw std::domain_error("lambda exceeds the threshold lambda*; no splitting exists");
  }
  // Collapse the branches whenever the endpoint classification treats lambda
  // as critical, so the radii agree with the merged root from gap_endpoints
  // instead of splitting by a rounded-off radicand.
  radicand = critical ? 0.0 : std::max(radicand, 0.0);
  const double s = std::sqrt(radicand);
  const double denom = 2.0 * (2.0 * m - lr2);
  const double sgn = branch == Branch::x2 ? -1.0 : 1.0;
  const double r1_sq = (3.0 * m - 2.0 - lr2 + sgn * s) / denom * r2;
  const double r2_sq = (m + 2.0 - lr2 - sgn * s) / denom * r2;
  return {r1_sq, r2_sq};
}

// Critical radius of the umbilical lambda-biharmonic hypersphere S^m(a) in
// S^{m+1}(r); defined for lambda < m / r^2.
inline double umbilical_hypersphere_radius(const GapParams& p) {
  validate_gap_params(p);
  const double r2 = p.r * p.r;
  const double denom = 2.0 * p.m - p.lambda * r2;
  if (!(p.lambda < p.m / r2))
    throw std::domain_error("umbilical radius needs lambda < m / r^2");
  return std::sqrt(p.m * r2 / denom);
}

struct SphereCircleSolution {
  double r1_sq = 0.0;  // squared radius of the sphere factor S^{m-1}(r1)
  double r2_sq = 0.0;  // squared radius of the circle factor S^1(r2)
  int case_id = 0;     // 1: collapsed (lambda = lambda*), 2: generic, 3: lambda = 0
  double alpha = 0.0;  // ratio r2^2 / r1^2
  int alpha_root = 0;  // 1 or 2: which root of the ratio quadratic, 0 for case 3
};

// All non-minimal lambda-biharmonic products S^{m-1}(r1) x S^1(r2) in
// S^{m+1}(r).  The ratio alpha = r2^2/r1^2 solves
// (m-1) alpha^2 - (m - lambda r^2) alpha + 1 = 0 subject to alpha (m-1) != 1.
inline std::vector<SphereCircleSolution> sphere_circle_solutions(int m, double r, double lambda) {
  validate_gap_params({m, r, lambda});
  const double r2 = r * r;
  const double lr2 = lambda * r2;
  std::vector<SphereCircleSolution> out;

  const auto push = [&](double alpha, int case_id, int alpha_root) {
    // alpha (m-1) = 1 would make the product minimal; it only occurs at lambda = 0.
    if (std::abs(alpha * (m - 1) - 1.0) <= 1e-12) return;
    SphereCircleSolution sol;
    sol.alpha = alpha;
    sol.case_id = case_id;
    sol.alpha_root = alpha_root;
    sol.r1_sq = r2 / (1.0 + alpha);
    sol.r2_sq = r2 * alpha / (1.0 + alpha);
    out.push_back(sol);
  };

  const double radicand = gap_radicand(m, r, lambda);  // (m - lambda r^2)^2 - 4(m-1)
  if (m - lr2 <= 0.0) return out;                      // far above lambda*
  if (std::abs(radicand) <= 1e-10) {
    if (m > 2) push((m - lr2) / (2.0 * (m - 1)), 1, 0);
    return out;
  }
  if (radicand < 0.0) return out;  // lambda > lambda*
  if (lambda == 0.0) {
    // Only the larger ratio root survives the alpha (m-1) != 1 constraint,
    // and it equals 1 exactly: the equal-radius splitting, m > 2 only.
    if (m > 2) {
      SphereCircleSolution sol;
      sol.alpha = 1.0;
      sol.case_id = 3;
      sol.alpha_root = 2;
      sol.r1_sq = r2 / 2.0;
      sol.r2_sq = r2 / 2.0;
      out.push_back(sol);
    }
    return out;
  }
  const double q = ((m - lr2) + std::sqrt(radicand)) / 2.0;
  push(1.0 / q, 2, 1);
  push(q / (m - 1), 2, 2);
  return out;
}

struct HypersphereReduction {
  double lambda_prime = 0.0;  // eigenvalue of the reduced problem in S^{n-1}(a)
  double tau_norm_sq = 0.0;   // |tau|^2 of the composed inclusion
  double h_iota_sq = 0.0;     // |H|^2 bound value 1/r^2 - lambda/m at play
  bool feasible = true;       // tau_norm_sq >= 0, i.e. a >= umbilical radius
};

// Composition with a small hypersphere S^{n-1}(a) in S^n(r): a minimal
// submanifold of S^{n-1}(a) is lambda-biharmonic in S^n(r) iff it is
// lambda'-biharmonic in S^{n-1}(a) with the eigenvalue reported here.
inline HypersphereReduction hypersphere_reduction(int m, double a, double r, double lambda) {
  if (m < 1) throw std::domain_error("submanifold dimension must be >= 1");
  if (!(a > 0.0) || !(r > 0.0)) throw std::domain_error("radii must be positive");
  if (a > r) throw std::domain_error("hypersphere radius cannot exceed the ambient radius");
  const double r2 = r * r;
  const double a2 = a * a;
  HypersphereReduction red;
  red.lambda_prime = 2.0 * m * (1.0 / a2 + lambda / (2.0 * m) - 1.0 / r2);
  red.tau_norm_sq = (double(m) * m / r2) * (2.0 - r2 / a2) - m * lambda;
  red.h_iota_sq = 1.0 / r2 - lambda / m;
  red.feasible = red.tau_norm_sq >= -1e-12;
  return red;
}

// A_H spectrum data at a gap endpoint x = |H|^2.  theta is the eigenvalue of
// multiplicity m-1 (the splitting factor block), omega the simple one (the
// circle block); (m-1) theta + omega = m x, and the splitting circle has
// curvature kappa and radius r / sqrt(1 + kappa^2 r^2).
inline SpectrumDetail spectrum_detail(const GapParams& p, double x) {
  validate_gap_params(p);
  if (!(x > 0.0)) throw std::domain_error("spectrum detail needs x = |H|^2 > 0");
  const double m = p.m;
  const double r2 = p.r * p.r;
  SpectrumDetail sd;
  sd.at_endpoint = false;
  if (p.m > 2) {
    const GapResult gap = gap_endpoints(p);
    if (gap.range_kind != RangeKind::Infeasible)
      sd.at_endpoint = std::abs(x - gap.x1) <= 1e-10 || std::abs(x - gap.x2) <= 1e-10;
  }
  const double root_arg = 4.0 * m * m * x + r2 * p.lambda * p.lambda;
  const double spread = std::sqrt(root_arg) / (m * m * p.r);
  sd.theta = x + spread;
  sd.omega = x - (m - 1) * spread;
  const double sigma_sq = (m / r2 - p.lambda - m * x) * x / (m * (m - 1));
  if (sigma_sq < -1e-15)
    throw std::domain_error("spectrum undefined: x exceeds the CMC bound (negative radicand)");
  sd.sigma = std::sqrt(std::max(sigma_sq, 0.0));
  const double kappa_sq = sd.omega * (m / r2 - p.lambda - m * sd.theta) / (sd.omega - sd.theta);
  if (kappa_sq < -1e-12) throw std::domain_error("spectrum undefined: negative kappa^2");
  sd.kappa = std::sqrt(std::max(kappa_sq, 0.0));
  sd.circle_radius = p.r / std::sqrt(1.0 + std::max(kappa_sq, 0.0) * r2);
  return sd;
}

enum class EqualitySide { none, lower, upper, both };

struct OkumuraResult {
  double lower = 0.0;      // -((m-2)/sqrt(m(m-1))) (sum b_i^2)^{3/2}
  double upper = 0.0;
  double sum_cubes = 0.0;
  EqualitySide equality_side = EqualitySide::none;
};

// Okumura's bound: for traceless b_1..b_m,
//   |sum b_i^3| <= ((m-2)/sqrt(m(m-1))) (sum b_i^2)^{3/2},
// with equality on the upper (lower) side iff m-1 of the values are equal and
// non-positive (non-negative).
inline OkumuraResult okumura(std::span<const double> spectrum) {
  const int m = static_cast<int>(spectrum.size());
  if (m < 2) throw std::invalid_argument("okumura needs at least two values");
  double sum = 0.0, sum_sq = 0.0, sum_cu = 0.0;
  for (double b : spectrum) {
    sum += b;
    sum_sq += b * b;
    sum_cu += b * b * b;
  }
  if (std::abs(sum) > 1e-10)
    throw std::invalid_argument("okumura needs a traceless spectrum (sum within 1e-10 of 0)");
  OkumuraResult res;
  res.upper = (m - 2) / std::sqrt(double(m) * (m - 1)) * std::pow(sum_sq, 1.5);
  res.lower = -res.upper;
  res.sum_cubes = sum_cu;

  std::vector<double> sorted(spectrum.begin(), spectrum.end());
  std::sort(sorted.begin(), sorted.end());
  const double tol = 1e-10;
  // m-1 smallest equal and non-positive -> the single large positive value
  // balances them: upper equality.  Mirror image for lower equality.
  const bool upper_eq = sorted[m - 2] - sorted[0] <= tol && sorted[m - 2] <= tol;
  const bool lower_eq = sorted[m - 1] - sorted[1] <= tol && sorted[1] >= -tol;
  if (upper_eq && lower_eq)
    res.equality_side = EqualitySide::both;
  else if (upper_eq)
    res.equality_side = EqualitySide::upper;
  else if (lower_eq)
    res.equality_side = EqualitySide::lower;
  return res;
}

}  // namespace bihgap

#endif  // BIHGAP_GAP_ANALYSIS_HPP
