#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "bihgap/core_geometry.hpp"
#include "bihgap/gap_analysis.hpp"

using namespace bihgap;

namespace {

ProductConfig two_factor_config(int m, double r1_sq, double r2_sq) {
  ProductConfig cfg;
  cfg.ambient_radius = std::sqrt(r1_sq + r2_sq);
  FactorSpec sphere;
  sphere.dim = m - 1;
  sphere.radius = std::sqrt(r1_sq);
  FactorSpec circle;
  circle.dim = 1;
  circle.radius = std::sqrt(r2_sq);
  cfg.factors.push_back(sphere);
  cfg.factors.push_back(circle);
  return cfg;
}

}  // namespace

TEST_CASE("cmc bound values") {
  CHECK(cmc_bound({4, 1.0, 0.0}) == 1.0);
  CHECK(cmc_bound({4, 1.0, 4.0}) == 0.0);
  CHECK(cmc_bound({6, 1.0, 2.0}) == Catch::Approx(2.0 / 3.0).margin(1e-15));
  CHECK(cmc_bound({3, 1.0, 9.0}) < 0.0);  // only minimal immersions remain
  CHECK_THROWS_AS(cmc_bound({1, 1.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(cmc_bound({3, -1.0, 0.0}), std::domain_error);
}

TEST_CASE("gap endpoints at lambda zero") {
  const GapResult res = gap_endpoints({3, 1.0, 0.0});
  CHECK(res.x1 == 0.0);  // exact: the quadratic has c = 0
  CHECK(res.x2 == Catch::Approx(1.0 / 9.0).margin(1e-15));
  CHECK(res.range_kind == RangeKind::LambdaNonpositive);
  CHECK(res.lambda_threshold == Catch::Approx(3.0 - 2.0 * std::sqrt(2.0)).margin(1e-15));

  for (int m = 3; m <= 12; ++m) {
    const GapResult g = gap_endpoints({m, 1.0, 0.0});
    CHECK(g.x1 == 0.0);
    const double expected = double(m - 2) * (m - 2) / (double(m) * m);
    CHECK(g.x2 == Catch::Approx(expected).margin(1e-15));
  }
}

TEST_CASE("critical lambda collapses the endpoints") {
  const GapResult res = gap_endpoints({5, 1.0, 1.0});
  CHECK(res.range_kind == RangeKind::LambdaCritical);
  CHECK(res.x1 == res.x2);
  CHECK(res.x2 == Catch::Approx(2.0 / 25.0).margin(1e-14));
  CHECK(res.lambda_threshold == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("infeasible lambda reports no endpoints") {
  const GapResult res = gap_endpoints({5, 1.0, 2.0});
  CHECK(res.range_kind == RangeKind::Infeasible);
  CHECK(std::isnan(res.x1));
  CHECK(std::isnan(res.x2));

  // Far above the threshold the radicand turns positive again, but the
  // quadratic has negative roots only; this must stay infeasible.
  const GapResult far = gap_endpoints({3, 1.0, 6.0});
  CHECK(gap_radicand(3, 1.0, 6.0) > 0.0);
  CHECK(far.range_kind == RangeKind::Infeasible);

  CHECK_THROWS_AS(gap_endpoints({2, 1.0, 0.0}), std::domain_error);
}

TEST_CASE("roots satisfy the gap quadratic") {
  // Vieta identities at 1e-12 relative accuracy over a feasible grid.
  for (const int m : {3, 4, 5, 7, 10}) {
    for (const double r : {0.5, 1.0, 2.0}) {
      const double star = lambda_threshold(m, r);
      for (const double f : {-8.0, -1.0, 0.0, 0.3, 0.7, 0.95}) {
        const double lambda = f <= 0.0 ? f / (r * r) : f * star;
        const GapResult res = gap_endpoints({m, r, lambda});
        REQUIRE(res.range_kind != RangeKind::Infeasible);
        const double m2 = double(m) * m;
        const double prod = (m - 1) * lambda * lambda / (m2 * m2);
        const double sum = ((m - 2.0) * (m - 2.0) / (r * r) - m * lambda) / m2;
        CHECK(res.x1 * res.x2 == Catch::Approx(prod).epsilon(1e-12).margin(1e-300));
        CHECK(res.x1 + res.x2 == Catch::Approx(sum).epsilon(1e-12));
        // ordering: 0 <= x1 <= x2 < cmc bound
        CHECK(res.x1 >= 0.0);
        CHECK(res.x1 <= res.x2);
        CHECK(res.x2 < cmc_bound({m, r, lambda}));
        if (lambda == 0.0)
          CHECK(res.x1 == 0.0);
        else
          CHECK(res.x1 > 0.0);
        CHECK(res.range_kind ==
              (lambda <= 0.0 ? RangeKind::LambdaNonpositive : RangeKind::LambdaInterior));
      }
    }
  }
}

TEST_CASE("endpoints scale like 1/r^2") {
  for (const int m : {3, 5, 8}) {
    for (const double r : {0.5, 2.0, 3.0}) {
      const double lambda = -1.3;
      const GapResult unit = gap_endpoints({m, 1.0, lambda * r * r});
      const GapResult scaled = gap_endpoints({m, r, lambda});
      CHECK(scaled.x2 == Catch::Approx(unit.x2 / (r * r)).epsilon(1e-12));
      CHECK(scaled.x1 == Catch::Approx(unit.x1 / (r * r)).epsilon(1e-12).margin(1e-300));
    }
  }
}

TEST_CASE("splitting radii at lambda zero are equal") {
  for (int m = 3; m <= 12; ++m) {
    const auto [r1_sq, r2_sq] = splitting_radii({m, 1.0, 0.0}, Branch::x2);
    CHECK(r1_sq == Catch::Approx(0.5).margin(1e-14));
    CHECK(r2_sq == Catch::Approx(0.5).margin(1e-14));
  }
  const auto [r1_sq, r2_sq] = splitting_radii({4, 1.7, 0.0}, Branch::x2);
  CHECK(r1_sq == Catch::Approx(1.7 * 1.7 / 2.0).margin(1e-13));
  CHECK(r2_sq == Catch::Approx(1.7 * 1.7 / 2.0).margin(1e-13));
}

TEST_CASE("splitting radii at the critical point") {
  const auto [r1_sq, r2_sq] = splitting_radii({5, 1.0, 1.0}, Branch::x2);
  CHECK(r1_sq == Catch::Approx(2.0 / 3.0).margin(1e-14));
  CHECK(r2_sq == Catch::Approx(1.0 / 3.0).margin(1e-14));
  // closed form (m - 1 - sqrt(m-1)) r^2 / (m - 2) at the collapsed point
  CHECK(r1_sq == Catch::Approx((5.0 - 1.0 - 2.0) / 3.0).margin(1e-14));
}

TEST_CASE("splitting radii preconditions and sum rule") {
  CHECK_THROWS_AS(splitting_radii({3, 1.0, -0.5}, Branch::x1), std::domain_error);
  CHECK_THROWS_AS(splitting_radii({3, 1.0, 0.0}, Branch::x1), std::domain_error);
  CHECK_THROWS_AS(splitting_radii({3, 1.0, 0.25}, Branch::x2), std::domain_error);  // > lambda*
  CHECK_THROWS_AS(splitting_radii({2, 1.0, 0.0}, Branch::x2), std::domain_error);
  for (const int m : {3, 4, 6, 9}) {
    for (const double r : {0.7, 1.0, 1.9}) {
      const double star = lambda_threshold(m, r);
      for (const double f : {-3.0, 0.0, 0.5, 0.9}) {
        const double lambda = f <= 0.0 ? f : f * star;
        const auto [r1_sq, r2_sq] = splitting_radii({m, r, lambda}, Branch::x2);
        CHECK(r1_sq + r2_sq == Catch::Approx(r * r).epsilon(1e-12));
        CHECK(r1_sq > 0.0);
        CHECK(r2_sq > 0.0);
        if (lambda > 0.0) {
          const auto [s1, s2] = splitting_radii({m, r, lambda}, Branch::x1);
          CHECK(s1 + s2 == Catch::Approx(r * r).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("sphere-circle solutions per case") {
  const auto critical = sphere_circle_solutions(5, 1.0, 1.0);
  REQUIRE(critical.size() == 1);
  CHECK(critical[0].case_id == 1);
  CHECK(critical[0].r1_sq == Catch::Approx(2.0 / 3.0).margin(1e-14));
  CHECK(critical[0].r2_sq == Catch::Approx(1.0 / 3.0).margin(1e-14));

  const auto zero = sphere_circle_solutions(3, 1.0, 0.0);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].case_id == 3);
  CHECK(zero[0].r1_sq == 0.5);
  CHECK(zero[0].r2_sq == 0.5);
  CHECK(zero[0].alpha == 1.0);

  const auto surfaces = sphere_circle_solutions(2, 1.0, -2.0);
  REQUIRE(surfaces.size() == 2);
  CHECK(surfaces[0].alpha == Catch::Approx(2.0 - std::sqrt(3.0)).margin(1e-14));
  CHECK(surfaces[1].alpha == Catch::Approx(2.0 + std::sqrt(3.0)).margin(1e-14));

  CHECK(sphere_circle_solutions(5, 1.0, 2.0).empty());   // above lambda*
  CHECK(sphere_circle_solutions(2, 1.0, 0.0).empty());   // alpha (m-1) = 1 excluded
}

TEST_CASE("sphere-circle products really solve the equation") {
  // Residual closure on [(m-1, r1), (1, r2)] for every emitted solution.
  for (const int m : {2, 3, 4, 6, 9}) {
    for (const double r : {0.8, 1.0, 1.5}) {
      const double star = lambda_threshold(m, r);
      for (const double f : {-4.0, -0.6, 0.0, 0.45, 0.85, 1.0}) {
        const double lambda = f <= 0.0 ? f : f * star;
        for (const auto& sol : sphere_circle_solutions(m, r, lambda)) {
          const auto cfg = two_factor_config(m, sol.r1_sq, sol.r2_sq);
          for (const double v : lambda_residual(cfg, lambda)) CHECK(std::abs(v) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("splitting radii match the sphere-circle pairs") {
  for (const int m : {3, 4, 7}) {
    for (const double r : {1.0, 1.6}) {
      const double star = lambda_threshold(m, r);
      for (const double f : {-2.0, -0.4, 0.35, 0.8}) {
        const double lambda = f <= 0.0 ? f : f * star;
        const auto sols = sphere_circle_solutions(m, r, lambda);
        REQUIRE(sols.size() == 2);
        REQUIRE(sols[0].alpha_root == 1);
        REQUIRE(sols[1].alpha_root == 2);
        const auto [x2_r1, x2_r2] = splitting_radii({m, r, lambda}, Branch::x2);
        CHECK(x2_r1 == Catch::Approx(sols[1].r1_sq).epsilon(1e-12));
        CHECK(x2_r2 == Catch::Approx(sols[1].r2_sq).epsilon(1e-12));
        if (lambda > 0.0) {
          const auto [x1_r1, x1_r2] = splitting_radii({m, r, lambda}, Branch::x1);
          CHECK(x1_r1 == Catch::Approx(sols[0].r1_sq).epsilon(1e-12));
          CHECK(x1_r2 == Catch::Approx(sols[0].r2_sq).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("sphere-circle curvatures sit at the gap endpoints") {
  for (const int m : {3, 5, 8}) {
    const double r = 1.0;
    for (const double lambda : {-1.5, -0.2, 0.12 * lambda_threshold(m, r)}) {
      const auto gap = gap_endpoints({m, r, lambda});
      for (const auto& sol : sphere_circle_solutions(m, r, lambda)) {
        const auto cfg = two_factor_config(m, sol.r1_sq, sol.r2_sq);
        const double h_sq = mean_curvature(cfg).h_norm_sq;
        const double target = sol.alpha_root == 1 ? gap.x1 : gap.x2;
        CHECK(h_sq == Catch::Approx(target).epsilon(1e-11).margin(1e-14));
      }
    }
  }
}

TEST_CASE("umbilical hypersphere radius") {
  for (const int m : {2, 3, 4, 7}) CHECK(umbilical_hypersphere_radius({m, 1.0, 0.0}) ==
                                         Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
  CHECK(umbilical_hypersphere_radius({4, 1.0, 2.0}) ==
        Catch::Approx(std::sqrt(2.0 / 3.0)).margin(1e-15));
  // degenerate limit lambda -> m / r^2: radius approaches the ambient radius
  CHECK(umbilical_hypersphere_radius({2, 2.0, 0.4999}) == Catch::Approx(2.0).margin(1e-2));
  CHECK_THROWS_AS(umbilical_hypersphere_radius({2, 2.0, 0.5}), std::domain_error);
  CHECK_THROWS_AS(umbilical_hypersphere_radius({3, 1.0, 5.0}), std::domain_error);

  // Chen-Yano form: a = r / sqrt(1 + r^2 h_max^2)
  for (const int m : {3, 5}) {
    for (const double r : {0.8, 1.0, 2.5}) {
      for (const double lambda : {-3.0, 0.0, 0.5 * m / (r * r)}) {
        const double a = umbilical_hypersphere_radius({m, r, lambda});
        const double h_sq = cmc_bound({m, r, lambda});
        CHECK(a == Catch::Approx(r / std::sqrt(1.0 + r * r * h_sq)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("hypersphere reduction") {
  const auto degenerate = hypersphere_reduction(4, 1.0, 1.0, 0.0);
  CHECK(degenerate.lambda_prime == 0.0);
  CHECK(degenerate.tau_norm_sq == 16.0);
  CHECK(degenerate.h_iota_sq == 1.0);
  CHECK(degenerate.feasible);

  // The tension norm vanishes exactly at the umbilical radius.
  for (const int m : {2, 3, 6}) {
    for (const double lambda : {-2.0, 0.0, 0.3}) {
      const double a = umbilical_hypersphere_radius({m, 1.0, lambda});
      const auto at = hypersphere_reduction(m, a, 1.0, lambda);
      CHECK(std::abs(at.tau_norm_sq) < 1e-12);
      CHECK(at.feasible);
      const auto below = hypersphere_reduction(m, 0.97 * a, 1.0, lambda);
      CHECK_FALSE(below.feasible);
      CHECK(at.h_iota_sq == Catch::Approx(1.0 - lambda / m).margin(1e-15));
    }
  }
  CHECK_THROWS_AS(hypersphere_reduction(3, 1.2, 1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(hypersphere_reduction(3, -0.5, 1.0, 0.0), std::domain_error);
}

TEST_CASE("endpoint spectrum at lambda zero") {
  for (int m = 3; m <= 12; ++m) {
    const GapParams p{m, 1.0, 0.0};
    const double x = gap_endpoints(p).x2;
    const SpectrumDetail sd = spectrum_detail(p, x);
    CHECK(sd.at_endpoint);
    CHECK(sd.theta == Catch::Approx(double(m - 2) / m).margin(1e-12));
    CHECK(sd.omega == Catch::Approx(-double(m - 2) / m).margin(1e-12));
    CHECK(sd.circle_radius * sd.circle_radius == Catch::Approx(0.5).margin(1e-12));
  }
}

TEST_CASE("endpoint spectrum invariants") {
  for (const int m : {3, 4, 6, 10}) {
    for (const double r : {0.9, 1.0, 1.8}) {
      const double star = lambda_threshold(m, r);
      for (const double f : {-2.5, 0.0, 0.6, 1.0}) {
        const double lambda = f <= 0.0 ? f : f * star;
        const GapParams p{m, r, lambda};
        const GapResult gap = gap_endpoints(p);
        for (const Branch branch : {Branch::x1, Branch::x2}) {
          const double x = branch == Branch::x1 ? gap.x1 : gap.x2;
          if (!(x > 0.0)) continue;
          const SpectrumDetail sd = spectrum_detail(p, x);
          CHECK(sd.at_endpoint);
          CHECK((m - 1) * sd.theta + sd.omega == Catch::Approx(m * x).margin(1e-12));
          CHECK(sd.theta - sd.omega == Catch::Approx(m * sd.sigma).margin(1e-12));
          if (branch == Branch::x2 || lambda > 0.0) {
            const auto [r1_sq, r2_sq] = splitting_radii(p, branch);
            (void)r1_sq;
            CHECK(sd.circle_radius * sd.circle_radius == Catch::Approx(r2_sq).epsilon(1e-11));
          }
        }
      }
    }
  }
}

TEST_CASE("spectrum at the collapsed endpoint") {
  const SpectrumDetail sd = spectrum_detail({5, 1.0, 1.0}, 2.0 / 25.0);
  CHECK(sd.at_endpoint);
  CHECK(sd.circle_radius * sd.circle_radius == Catch::Approx(1.0 / 3.0).margin(1e-12));
  CHECK(sd.theta == Catch::Approx(0.2).margin(1e-12));
  CHECK(sd.omega == Catch::Approx(-0.4).margin(1e-12));
}

TEST_CASE("spectrum away from the endpoints computes but flags") {
  const SpectrumDetail sd = spectrum_detail({3, 1.0, 0.0}, 0.05);
  CHECK_FALSE(sd.at_endpoint);
  CHECK((3 - 1) * sd.theta + sd.omega == Catch::Approx(3 * 0.05).margin(1e-12));
  CHECK_THROWS_AS(spectrum_detail({3, 1.0, 0.0}, 1.5), std::domain_error);  // beyond the bound
  CHECK_THROWS_AS(spectrum_detail({3, 1.0, 0.0}, 0.0), std::domain_error);
}

TEST_CASE("okumura bound landmarks") {
  const std::vector<double> lower_case{1.0, 1.0, -2.0};
  const auto res = okumura(lower_case);
  CHECK(res.sum_cubes == Catch::Approx(-6.0).margin(1e-14));
  CHECK(res.lower == Catch::Approx(-6.0).margin(1e-12));
  CHECK(res.upper == Catch::Approx(6.0).margin(1e-12));
  CHECK(res.equality_side == EqualitySide::lower);

  const std::vector<double> zeros{0.0, 0.0, 0.0};
  CHECK(okumura(zeros).equality_side == EqualitySide::both);

  const std::vector<double> upper_case{-1.0, -1.0, -1.0, 3.0};
  const auto up = okumura(upper_case);
  CHECK(up.equality_side == EqualitySide::upper);
  CHECK(up.sum_cubes == Catch::Approx(up.upper).epsilon(1e-12));

  const std::vector<double> not_traceless{1.0, 1.0, 1.0};
  CHECK_THROWS_AS(okumura(not_traceless), std::invalid_argument);
  const std::vector<double> too_short{0.0};
  CHECK_THROWS_AS(okumura(too_short), std::invalid_argument);
}

TEST_CASE("okumura bound holds for random traceless spectra") {
  std::mt19937 rng(123456);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> msel(3, 10);
  int strict = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int m = msel(rng);
    std::vector<double> b(m);
    double mean = 0.0;
    for (double& v : b) {
      v = gauss(rng);
      mean += v;
    }
    mean /= m;
    double sum = 0.0;
    for (double& v : b) {
      v -= mean;
      sum += v;
    }
    b.back() -= sum;  // absorb round-off so the trace is exactly ~0
    const auto res = okumura(b);
    CHECK(res.sum_cubes >= res.lower - 1e-9 * (1.0 + std::abs(res.lower)));
    CHECK(res.sum_cubes <= res.upper + 1e-9 * (1.0 + res.upper));
    if (res.equality_side == EqualitySide::none) ++strict;
  }
  CHECK(strict == 10000);  // equality is a measure-zero event
}

TEST_CASE("okumura equality detection for constructed spectra") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> mag(0.1, 4.0);
  for (int m = 3; m <= 10; ++m) {
    const double t = mag(rng);
    // m-1 entries equal to -t (non-positive), one at (m-1)t: upper equality.
    std::vector<double> upper(m, -t);
    upper.back() = (m - 1) * t;
    const auto u = okumura(upper);
    CHECK(u.equality_side == EqualitySide::upper);
    CHECK(u.sum_cubes == Catch::Approx(u.upper).epsilon(1e-10));
    // mirror: lower equality
    std::vector<double> lower(m, t);
    lower.back() = -(m - 1) * t;
    const auto l = okumura(lower);
    CHECK(l.equality_side == EqualitySide::lower);
    CHECK(l.sum_cubes == Catch::Approx(l.lower).epsilon(1e-10));
  }
}
