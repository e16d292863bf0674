#ifndef BIHGAP_RATIONAL_HPP
#define BIHGAP_RATIONAL_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bihgap {

// Exact rational arithmetic on a 64-bit numerator/denominator pair.
// Values are kept normalized (gcd 1, denominator positive).  Arithmetic is
// carried out in 128-bit intermediates and throws std::overflow_error once a
// reduced result no longer fits in 64 bits; the quantities handled here
// (radius squares, case coefficients 1/(2N), small linear combinations) stay
// far below that limit.
class Rational {
public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(std::int64_t n, std::int64_t d) { *this = reduce(n, d); }

  // Accepts "p", "-p", or "p/q" with q > 0 (no whitespace, base 10).
  static Rational from_string(std::string_view text) {
    const auto bad = [&] {
      throw std::invalid_argument("not a rational literal: '" + std::string(text) + "'");
    };
    std::int64_t n = 0;
    std::int64_t d = 1;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, n);
    if (ec != std::errc{}) bad();
    if (ptr != last) {
      if (*ptr != '/') bad();
      auto [qtr, qec] = std::from_chars(ptr + 1, last, d);
      if (qec != std::errc{} || qtr != last || d <= 0) bad();
    }
    return Rational(n, d);
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const {
    return static_cast<double>(static_cast<long double>(num_) / static_cast<long double>(den_));
  }

  std::string str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) {
      s += '/';
      s += std::to_string(den_);
    }
    return s;
  }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  // Exact square root when both reduced parts are perfect squares.
  std::optional<Rational> exact_sqrt() const {
    if (num_ < 0) return std::nullopt;
    const auto root = [](std::int64_t v) -> std::optional<std::int64_t> {
      auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
      for (std::int64_t c = r > 1 ? r - 1 : 0; c <= r + 1; ++c)
        if (c * c == v) return c;
      return std::nullopt;
    };
    auto rn = root(num_);
    auto rd = root(den_);
    if (!rn || !rd) return std::nullopt;
    return Rational(*rn, *rd);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return reduce(I128(a.num_) * b.den_ + I128(b.num_) * a.den_, I128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return reduce(I128(a.num_) * b.den_ - I128(b.num_) * a.den_, I128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return reduce(I128(a.num_) * b.num_, I128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return reduce(I128(a.num_) * b.den_, I128(a.den_) * b.num_);
  }
  Rational operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
  }
  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return I128(a.num_) * b.den_ < I128(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
  using I128 = __int128;

  static I128 gcd128(I128 a, I128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      I128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational reduce(I128 n, I128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (n == 0) d = 1;
    I128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr I128 lo = std::numeric_limits<std::int64_t>::min();
    constexpr I128 hi = std::numeric_limits<std::int64_t>::max();
    if (n < lo || n > hi || d > hi) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline int sign_of(double v) { return (v > 0) - (v < 0); }
inline int sign_of(const Rational& v) { return v.sign(); }

}  // namespace bihgap

#endif  // BIHGAP_RATIONAL_HPP
