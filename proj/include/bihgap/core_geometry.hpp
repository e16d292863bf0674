#ifndef BIHGAP_CORE_GEOMETRY_HPP
#define BIHGAP_CORE_GEOMETRY_HPP

#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bihgap/rational.hpp"

// Closed-form extrinsic geometry of products of minimal submanifolds.
//
// The model: factors L_i^{d_i}, each minimal in a round sphere S(a_i), are
// multiplied into M^m = L_1 x ... x L_k sitting inside S^n(r), which requires
// sum_i a_i^2 = r^2.  Writing eta_i = x_i / a_i for the unit conormals of the
// factor spheres, the tension field of the inclusion is
//
//   tau = mH = sum_i (m a_i / r^2 - d_i / a_i) eta_i,
//
// the shape operator A_H acts on the factor-i tangent block as the scalar
// mu_i = (d_i / a_i^2 - m / r^2) / m, and
//
//   trace B(., A_H .) = sum_i mu_i (-(d_i / a_i) eta_i + (d_i / r^2) rbar),
//
// with rbar = sum_i a_i eta_i the ambient position.  Everything below is a
// direct evaluation of these expressions; all quantities are polynomial in
// the squared radii except for one overall factor of a_i per eta-component,
// which is why the exact (rational) kernels work on squared radii and report
// per-factor values scaled by a_i.

namespace bihgap {

struct FactorSpec {
  int dim = 1;
  double radius = 1.0;
  std::string label;
  // Set when the radius is known as an exact rational (e.g. parsed from a
  // "p/q" literal); `radius` then holds its binary64 rounding.
  std::optional<Rational> radius_exact;
};

struct ProductConfig {
  std::vector<FactorSpec> factors;
  double ambient_radius = 1.0;
  std::optional<Rational> ambient_radius_exact;

  int total_dim() const {
    int m = 0;
    for (const auto& f : factors) m += f.dim;
    return m;
  }

  std::vector<int> dims() const {
    std::vector<int> d;
    d.reserve(factors.size());
    for (const auto& f : factors) d.push_back(f.dim);
    return d;
  }

  std::vector<double> radius_sq() const {
    std::vector<double> s;
    s.reserve(factors.size());
    for (const auto& f : factors) s.push_back(f.radius * f.radius);
    return s;
  }

  // Exact squared radii when every factor (and the ambient radius) carries an
  // exact value and the normalization sum_i a_i^2 = r^2 holds exactly.
  std::optional<std::pair<std::vector<Rational>, Rational>> exact_squares() const {
    if (!ambient_radius_exact) return std::nullopt;
    Rational r2 = *ambient_radius_exact * *ambient_radius_exact;
    std::vector<Rational> sq;
    Rational sum = 0;
    for (const auto& f : factors) {
      if (!f.radius_exact) return std::nullopt;
      Rational s = *f.radius_exact * *f.radius_exact;
      sum += s;
      sq.push_back(s);
    }
    if (sum != r2) return std::nullopt;
    return std::make_pair(std::move(sq), r2);
  }

  void validate() const {
    if (factors.empty()) throw std::domain_error("product config has no factors");
    double sum = 0.0;
    for (const auto& f : factors) {
      if (f.dim < 1) throw std::domain_error("factor dimension must be >= 1");
      if (!(f.radius > 0.0)) throw std::domain_error("factor radius must be positive");
      sum += f.radius * f.radius;
    }
    const double r2 = ambient_radius * ambient_radius;
    if (!(ambient_radius > 0.0)) throw std::domain_error("ambient radius must be positive");
    if (std::abs(sum - r2) > 1e-12) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "factor radius squares sum to " << sum << " but the ambient radius squared is "
          << r2 << "; the factor spheres must fill the ambient sphere";
      throw std::domain_error(msg.str());
    }
  }
};

struct CurvatureReport {
  // eta_i coefficients of tau = mH (so H itself has components h_components/m).
  std::vector<double> h_components;
  double h_norm_sq = 0.0;  // |H|^2 = sum h_components^2 / m^2
  // A_H eigenvalue per factor with its multiplicity (= factor dimension).
  std::vector<std::pair<double, int>> ah_eigenvalues;
};

template <class T>
struct ProductCurvature {
  std::vector<T> mu;           // A_H eigenvalue on the factor-i block
  std::vector<T> tension_sq;   // squared eta_i coefficient of tau = mH
  std::vector<int> tension_sign;
  T h_norm_sq{};
  int total_dim = 0;
};

// Squared-radius kernel, usable with T = double or T = Rational.
template <class T>
ProductCurvature<T> product_curvature(const std::vector<int>& dims,
                                      const std::vector<T>& radius_sq,
                                      const T& ambient_radius_sq) {
  if (dims.size() != radius_sq.size() || dims.empty())
    throw std::domain_error("dimension/radius lists must be nonempty and of equal length");
  const int m = std::accumulate(dims.begin(), dims.end(), 0);
  ProductCurvature<T> pc;
  pc.total_dim = m;
  pc.mu.reserve(dims.size());
  pc.tension_sq.reserve(dims.size());
  pc.tension_sign.reserve(dims.size());
  T comp_sq_sum{};
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const T& s = radius_sq[k];
    const T d = T(dims[k]);
    // a_k * (eta_k coefficient of tau) = m a_k^2 / r^2 - d_k
    const T scaled = T(m) * s / ambient_radius_sq - d;
    pc.tension_sq.push_back(scaled * scaled / s);
    pc.tension_sign.push_back(sign_of(scaled));
    pc.mu.push_back((d / s - T(m) / ambient_radius_sq) / T(m));
    comp_sq_sum += pc.tension_sq.back();
  }
  pc.h_norm_sq = comp_sq_sum / (T(m) * T(m));
  return pc;
}

// Per-factor coefficients (on eta_k) of trace B(., A_H .) - (m/r^2 - lambda) H,
// scaled by a_k so the result is rational in the squared radii.  A zero vector
// is exactly the lambda-biharmonicity of the inclusion; the unscaled residual
// is recovered by dividing component k by a_k.
template <class T>
std::vector<T> lambda_residual_scaled(const std::vector<int>& dims,
                                      const std::vector<T>& radius_sq,
                                      const T& ambient_radius_sq, const T& lambda) {
  const auto pc = product_curvature(dims, radius_sq, ambient_radius_sq);
  const int m = pc.total_dim;
  const T target = T(m) / ambient_radius_sq - lambda;  // m/r^2 - lambda
  const T common = (T(m) * pc.h_norm_sq - target) / ambient_radius_sq;
  std::vector<T> out;
  out.reserve(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k)
    out.push_back(T(dims[k]) * (target / T(m) - pc.mu[k]) + radius_sq[k] * common);
  return out;
}

inline CurvatureReport mean_curvature(const ProductConfig& config) {
  config.validate();
  const int m = config.total_dim();
  const double r2 = config.ambient_radius * config.ambient_radius;
  CurvatureReport report;
  double comp_sq_sum = 0.0;
  for (const auto& f : config.factors) {
    const double c = m * f.radius / r2 - f.dim / f.radius;
    report.h_components.push_back(c);
    report.ah_eigenvalues.emplace_back((f.dim / (f.radius * f.radius) - m / r2) / m, f.dim);
    comp_sq_sum += c * c;
  }
  report.h_norm_sq = comp_sq_sum / (double(m) * double(m));
  return report;
}

// Coefficients on eta_k of trace B(., A_H .) - (m/r^2 - lambda) H.  All zero
// (up to round-off) exactly when the product is lambda-biharmonic in S^n(r).
inline std::vector<double> lambda_residual(const ProductConfig& config, double lambda) {
  config.validate();
  const double r2 = config.ambient_radius * config.ambient_radius;
  auto scaled = lambda_residual_scaled<double>(config.dims(), config.radius_sq(), r2, lambda);
  for (std::size_t k = 0; k < scaled.size(); ++k) scaled[k] /= config.factors[k].radius;
  return scaled;
}

// Specialization lambda = 0 in the unit sphere: the classical biharmonicity
// residual (coefficients of trace B(., A_H .) - mH).  Requires r = 1; for
// other ambient radii use lambda_residual, which carries the r-dependence.
inline std::vector<double> biharmonic_residual(const ProductConfig& config) {
  if (std::abs(config.ambient_radius - 1.0) > 1e-12)
    throw std::domain_error("biharmonic_residual requires ambient radius 1; use lambda_residual");
  return lambda_residual(config, 0.0);
}

// Both sides of |A_H|^2 = (m/r^2 - lambda)|H|^2, the norm form of the
// lambda-biharmonicity condition for parallel mean curvature.  Returned as
// (lhs, rhs); they agree whenever lambda_residual vanishes.
inline std::pair<double, double> pmc_norm_identity(const ProductConfig& config, double lambda) {
  config.validate();
  const int m = config.total_dim();
  const double r2 = config.ambient_radius * config.ambient_radius;
  const auto report = mean_curvature(config);
  double lhs = 0.0;
  for (const auto& [mu, mult] : report.ah_eigenvalues) lhs += mult * mu * mu;
  const double rhs = (m / r2 - lambda) * report.h_norm_sq;
  return {lhs, rhs};
}

}  // namespace bihgap

#endif  // BIHGAP_CORE_GEOMETRY_HPP
