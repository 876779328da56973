#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sedwalk {

/// Normalized fraction over 64-bit integers. Arithmetic is overflow-checked
/// through 128-bit intermediates and throws std::overflow_error when the
/// reduced result no longer fits.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) { assign(num, den); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }

  std::string to_string() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses "7", "-3", "2/5" or a plain decimal such as "0.125". Anything
  /// else (exponents, inf, nan) yields nullopt.
  static std::optional<Rational> parse(std::string_view text) {
    if (text.empty()) return std::nullopt;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      auto n = parse_int(text.substr(0, slash));
      auto d = parse_int(text.substr(slash + 1));
      if (!n || !d || *d == 0) return std::nullopt;
      return Rational(*n, *d);
    }
    auto dot = text.find('.');
    if (dot == std::string_view::npos) {
      auto n = parse_int(text);
      if (!n) return std::nullopt;
      return Rational(*n);
    }
    bool negative = text.front() == '-';
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 17 || frac.find_first_not_of("0123456789") != std::string_view::npos) {
      return std::nullopt;
    }
    std::string digits(whole);
    digits += frac;
    if (digits == "-" || digits == "+" || digits.empty()) return std::nullopt;
    auto n = parse_int(digits);
    if (!n) return std::nullopt;
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Rational r(*n, den);
    if (negative && r.num_ > 0) r.num_ = -r.num_;
    return r;
  }

 private:
  static std::optional<std::int64_t> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
    if (i == s.size() || s.find_first_not_of("0123456789", i) != std::string_view::npos) return std::nullopt;
    try {
      return std::stoll(std::string(s));
    } catch (const std::out_of_range&) {
      return std::nullopt;
    }
  }

  static Rational from_wide(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      __int128 r = a % b;
      a = b;
      b = r;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
    if (n > lim || n < -lim || d > lim) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  void assign(std::int64_t n, std::int64_t d) { *this = from_wide(n, d); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

/// Edge weight: exact when the input was rational, floating point otherwise.
class Weight {
 public:
  Weight() : Weight(Rational(1)) {}
  Weight(Rational exact) : exact_(exact), value_(exact.to_double()) {}
  Weight(std::int64_t n) : Weight(Rational(n)) {}
  static Weight real(double v) {
    Weight w;
    w.exact_.reset();
    w.value_ = v;
    return w;
  }

  double value() const { return value_; }
  const std::optional<Rational>& exact() const { return exact_; }
  bool is_exact() const { return exact_.has_value(); }

  friend Weight operator*(const Weight& a, const Weight& b) {
    if (a.exact_ && b.exact_) return Weight(*a.exact_ * *b.exact_);
    return real(a.value_ * b.value_);
  }
  friend Weight operator+(const Weight& a, const Weight& b) {
    if (a.exact_ && b.exact_) return Weight(*a.exact_ + *b.exact_);
    return real(a.value_ + b.value_);
  }

  /// Exact comparison when both sides are rational; relative 1e-12 otherwise.
  bool same_as(const Weight& o) const {
    if (exact_ && o.exact_) return *exact_ == *o.exact_;
    double scale = std::max({1.0, std::abs(value_), std::abs(o.value_)});
    return std::abs(value_ - o.value_) <= 1e-12 * scale;
  }

  std::string to_string() const;

 private:
  std::optional<Rational> exact_;
  double value_ = 1.0;
};

inline std::string Weight::to_string() const {
  if (exact_) return exact_->to_string();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value_);
  return buf;
}

}  // namespace sedwalk
