#pragma once

#include <cstdint>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lfdr {

// Exact rational on int64 numerator / positive int64 denominator, always kept
// reduced. Intermediates widen to 128 bits; a result that does not fit int64
// throws std::overflow_error. Comparisons are exact (cross multiplication in
// 128 bits), which is what the sign tests on expectation prefixes rely on.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { reduce(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  bool is_positive() const { return num_ > 0; }

  Rational operator-() const {
    Rational r;
    r.num_ = check_narrow(-static_cast<__int128>(num_));
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const __int128 lhs = static_cast<__int128>(a.num_) * (b.den_ / g);
    const __int128 rhs = static_cast<__int128>(b.num_) * (a.den_ / g);
    const __int128 den = static_cast<__int128>(a.den_) * (b.den_ / g);
    return make_reduced(lhs + rhs, den);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    const std::int64_t g1 = std::gcd(std::abs(a.num_), b.den_);
    const std::int64_t g2 = std::gcd(std::abs(b.num_), a.den_);
    const __int128 num = static_cast<__int128>(a.num_ / g1) * (b.num_ / g2);
    const __int128 den = static_cast<__int128>(a.den_ / g2) * (b.den_ / g1);
    return make_reduced(num, den);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    Rational inv;
    inv.num_ = b.num_ < 0 ? -b.den_ : b.den_;
    inv.den_ = std::abs(b.num_);
    return a * inv;
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  std::int64_t floor_int() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }
  std::int64_t ceil_int() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
  }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  // Best rational with denominator <= max_den whose value is within rel_tol of
  // x (continued-fraction convergents). Recovers decimals typed into configs,
  // e.g. 0.6 -> 3/5. Returns nullopt when no convergent gets close enough.
  static std::optional<Rational> from_double(double x, std::int64_t max_den = 1000000000,
                                             double rel_tol = 1e-12);

  // "3", "-7", "0.05", "-1/20". Whole string must parse.
  static std::optional<Rational> parse(std::string_view text);

  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  static std::int64_t check_narrow(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
      throw std::overflow_error("Rational: value exceeds 64-bit range");
    return static_cast<std::int64_t>(v);
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }
  static Rational make_reduced(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) {
      den = -den;
      num = -num;
    }
    const __int128 g = num == 0 ? den : gcd128(num, den);
    Rational r;
    r.num_ = check_narrow(num / g);
    r.den_ = check_narrow(den / g);
    return r;
  }
  void reduce() { *this = make_reduced(num_, den_); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline std::optional<Rational> Rational::from_double(double x, std::int64_t max_den, double rel_tol) {
  if (!std::isfinite(x)) return std::nullopt;
  if (x == 0.0) return Rational(0);
  const double tol = rel_tol * std::max(1.0, std::fabs(x));
  const bool neg = x < 0;
  double v = std::fabs(x);
  // Convergents h_k / k_k of the continued fraction of v.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double frac = v;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_f = std::floor(frac);
    if (a_f > static_cast<double>(std::numeric_limits<std::int64_t>::max()) / 2) break;
    const std::int64_t a = static_cast<std::int64_t>(a_f);
    __int128 h2 = static_cast<__int128>(a) * h1 + h0;
    __int128 k2 = static_cast<__int128>(a) * k1 + k0;
    if (k2 > max_den || h2 > std::numeric_limits<std::int64_t>::max()) break;
    h0 = h1;
    h1 = static_cast<std::int64_t>(h2);
    k0 = k1;
    k1 = static_cast<std::int64_t>(k2);
    const double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::fabs(approx - v) <= tol) {
      return Rational(neg ? -h1 : h1, k1);
    }
    const double rem = frac - a_f;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  return std::nullopt;
}

inline std::optional<Rational> Rational::parse(std::string_view text) {
  auto parse_int = [](std::string_view s, std::int64_t& out) -> bool {
    if (s.empty()) return false;
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) return false;
    __int128 v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
      v = v * 10 + (s[i] - '0');
      if (v > std::numeric_limits<std::int64_t>::max()) return false;
    }
    out = static_cast<std::int64_t>(neg ? -v : v);
    return true;
  };
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::int64_t n = 0, d = 0;
    if (!parse_int(text.substr(0, slash), n) || !parse_int(text.substr(slash + 1), d) || d == 0)
      return std::nullopt;
    return Rational(n, d);
  }
  const auto dot = text.find('.');
  if (dot != std::string_view::npos) {
    std::string digits(text.substr(0, dot));
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 18) return std::nullopt;
    digits.append(frac);
    std::int64_t n = 0;
    if (!parse_int(digits, n)) return std::nullopt;
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    return Rational(n, den);
  }
  std::int64_t n = 0;
  if (!parse_int(text, n)) return std::nullopt;
  return Rational(n);
}

}  // namespace lfdr
