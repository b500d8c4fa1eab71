#pragma once

// Exact binary fixed-point reals.
//
// Fixed  : Q64.64, a signed 128-bit integer counting units of 2^-64. Used for
//          the horizontal coordinates (x, y) and the rotation numbers.
// Fiber  : a signed 256-bit value with 128 fractional bits. Used for the
//          vertical coordinate z. The product of two Fixed values lands here
//          without rounding, so every group operation is exact.

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "heislab/errors.hpp"

namespace heislab {

using i128 = __int128;
using u128 = unsigned __int128;

namespace detail {

inline std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return {out.rbegin(), out.rend()};
}

inline std::string i128_to_string(i128 v) {
  if (v < 0) return "-" + u128_to_string(-static_cast<u128>(v));
  return u128_to_string(static_cast<u128>(v));
}

inline u128 abs_u128(i128 v) { return v < 0 ? -static_cast<u128>(v) : static_cast<u128>(v); }

}  // namespace detail

class Fixed {
 public:
  static constexpr int kFracBits = 64;

  constexpr Fixed() = default;

  static constexpr Fixed from_raw(i128 raw) {
    Fixed f;
    f.raw_ = raw;
    return f;
  }
  static constexpr Fixed from_int(std::int64_t v) { return from_raw(static_cast<i128>(v) << kFracBits); }

  // Nearest multiple of 2^-64.
  static Fixed from_double(double v) {
    if (!std::isfinite(v) || std::fabs(v) >= 0x1p62) {
      throw malformed_input("Fixed::from_double: value out of range");
    }
    return from_raw(static_cast<i128>(std::nearbyint(std::ldexp(v, kFracBits))));
  }

  // Accepts a decimal literal ("-0.4142135623730950488") or an exact dyadic
  // fraction ("N/2^K"). Decimals round to the nearest 2^-64 multiple.
  static Fixed parse(std::string_view text);

  constexpr i128 raw() const { return raw_; }

  constexpr std::int64_t floor() const { return static_cast<std::int64_t>(raw_ >> kFracBits); }
  constexpr Fixed frac() const { return from_raw(raw_ & ((static_cast<i128>(1) << kFracBits) - 1)); }
  double to_double() const { return std::ldexp(static_cast<double>(raw_), -kFracBits); }

  // Exact "N/2^K" with K minimal.
  std::string to_dyadic_string() const {
    i128 n = raw_;
    int k = kFracBits;
    while (k > 0 && (n & 1) == 0) {
      n >>= 1;
      --k;
    }
    return detail::i128_to_string(n) + "/2^" + std::to_string(k);
  }

  friend constexpr Fixed operator+(Fixed a, Fixed b) { return from_raw(a.raw_ + b.raw_); }
  friend constexpr Fixed operator-(Fixed a, Fixed b) { return from_raw(a.raw_ - b.raw_); }
  friend constexpr Fixed operator-(Fixed a) { return from_raw(-a.raw_); }
  Fixed& operator+=(Fixed o) {
    raw_ += o.raw_;
    return *this;
  }
  Fixed& operator-=(Fixed o) {
    raw_ -= o.raw_;
    return *this;
  }

  friend Fixed operator*(Fixed a, std::int64_t k) {
    i128 out;
    if (__builtin_mul_overflow(a.raw_, static_cast<i128>(k), &out)) {
      throw numerical_error("Fixed: integer scaling overflows Q64.64");
    }
    return from_raw(out);
  }
  friend Fixed operator*(std::int64_t k, Fixed a) { return a * k; }

  friend constexpr bool operator==(Fixed, Fixed) = default;
  friend constexpr auto operator<=>(Fixed a, Fixed b) { return a.raw_ <=> b.raw_; }

 private:
  i128 raw_ = 0;
};

class Fiber {
 public:
  static constexpr int kFracBits = 128;

  constexpr Fiber() = default;
  constexpr Fiber(i128 hi, u128 lo) : hi_(hi), lo_(lo) {}

  static constexpr Fiber from_int(std::int64_t v) { return {v, 0}; }
  static constexpr Fiber from_fixed(Fixed f) {
    const i128 r = f.raw();
    return {r >> 64, static_cast<u128>(static_cast<std::uint64_t>(r)) << 64};
  }
  static Fiber from_double(double v) {
    if (!std::isfinite(v) || std::fabs(v) >= 0x1p100) {
      throw malformed_input("Fiber::from_double: value out of range");
    }
    double fl = std::floor(v);
    double r = v - fl;
    if (r >= 1.0) {  // v a tiny negative number
      r = 0.0;
      fl += 1.0;
    }
    return {static_cast<i128>(fl), static_cast<u128>(std::ldexp(r, kFracBits))};
  }

  // a * b, exact.
  static Fiber product(Fixed a, Fixed b) {
    const bool negative = (a.raw() < 0) != (b.raw() < 0);
    const u128 ua = detail::abs_u128(a.raw());
    const u128 ub = detail::abs_u128(b.raw());
    const auto a0 = static_cast<std::uint64_t>(ua), a1 = static_cast<std::uint64_t>(ua >> 64);
    const auto b0 = static_cast<std::uint64_t>(ub), b1 = static_cast<std::uint64_t>(ub >> 64);
    const u128 p00 = static_cast<u128>(a0) * b0;
    const u128 p01 = static_cast<u128>(a0) * b1;
    const u128 p10 = static_cast<u128>(a1) * b0;
    const u128 p11 = static_cast<u128>(a1) * b1;
    const u128 mid = (p00 >> 64) + static_cast<std::uint64_t>(p01) + static_cast<std::uint64_t>(p10);
    const u128 lo = (mid << 64) | static_cast<std::uint64_t>(p00);
    const u128 hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    Fiber out(static_cast<i128>(hi), lo);
    return negative ? -out : out;
  }

  constexpr i128 floor() const { return hi_; }
  constexpr Fiber frac() const { return {0, lo_}; }
  constexpr u128 frac_bits() const { return lo_; }
  double to_double() const { return static_cast<double>(hi_) + std::ldexp(static_cast<double>(lo_), -kFracBits); }
  double frac_to_double() const { return std::ldexp(static_cast<double>(lo_), -kFracBits); }

  friend constexpr Fiber operator+(Fiber a, Fiber b) {
    const u128 lo = a.lo_ + b.lo_;
    const i128 carry = lo < a.lo_ ? 1 : 0;
    return {a.hi_ + b.hi_ + carry, lo};
  }
  friend constexpr Fiber operator-(Fiber a) {
    if (a.lo_ == 0) return {-a.hi_, 0};
    return {~a.hi_, -a.lo_};
  }
  friend constexpr Fiber operator-(Fiber a, Fiber b) { return a + (-b); }
  Fiber& operator+=(Fiber o) { return *this = *this + o; }
  Fiber& operator-=(Fiber o) { return *this = *this - o; }

  // Integer multiple, exact. |k| must keep the integer part inside 127 bits.
  friend Fiber operator*(Fiber a, std::int64_t k) {
    const bool negative = k < 0;
    const std::uint64_t uk = negative ? -static_cast<std::uint64_t>(k) : static_cast<std::uint64_t>(k);
    const u128 l0 = static_cast<u128>(static_cast<std::uint64_t>(a.lo_)) * uk;
    const u128 l1 = static_cast<u128>(static_cast<std::uint64_t>(a.lo_ >> 64)) * uk;
    const u128 mid = (l0 >> 64) + static_cast<std::uint64_t>(l1);
    const u128 lo = (mid << 64) | static_cast<std::uint64_t>(l0);
    const u128 carry = (l1 >> 64) + (mid >> 64);
    i128 hi;
    if (__builtin_mul_overflow(a.hi_, static_cast<i128>(uk), &hi)) {
      throw numerical_error("Fiber: integer scaling overflow");
    }
    Fiber out(hi + static_cast<i128>(carry), lo);
    return negative ? -out : out;
  }
  friend Fiber operator*(std::int64_t k, Fiber a) { return a * k; }

  friend constexpr bool operator==(Fiber, Fiber) = default;
  friend constexpr auto operator<=>(Fiber a, Fiber b) {
    if (auto c = a.hi_ <=> b.hi_; c != 0) return c;
    return a.lo_ <=> b.lo_;
  }

 private:
  i128 hi_ = 0;
  u128 lo_ = 0;
};

namespace detail {
// cpp_int reads a leading zero as an octal prefix
inline std::string strip_zeros(std::string d) {
  const auto first = d.find_first_not_of('0');
  return first == std::string::npos ? "0" : d.substr(first);
}
}  // namespace detail

inline Fixed Fixed::parse(std::string_view text) {
  using boost::multiprecision::cpp_int;
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) throw malformed_input("empty number");
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    s.erase(s.begin());
  }
  const auto all_digits = [](std::string_view d) {
    return !d.empty() && d.find_first_not_of("0123456789") == std::string_view::npos;
  };

  cpp_int numerator;
  cpp_int denominator = 1;
  if (const auto slash = s.find("/2^"); slash != std::string::npos) {
    const std::string n = s.substr(0, slash), k = s.substr(slash + 3);
    if (!all_digits(n) || !all_digits(k) || k.size() > 4) throw malformed_input("bad dyadic literal '" + std::string(text) + "'");
    numerator = cpp_int(detail::strip_zeros(n));
    denominator <<= std::stoi(k);
  } else {
    const auto dot = s.find('.');
    std::string ip = s.substr(0, dot), fp = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!all_digits(ip) || (dot != std::string::npos && !all_digits(fp))) {
      throw malformed_input("bad decimal literal '" + std::string(text) + "'");
    }
    numerator = cpp_int(detail::strip_zeros(ip + fp));
    for (std::size_t i = 0; i < fp.size(); ++i) denominator *= 10;
  }
  // round(numerator * 2^64 / denominator), ties away from zero
  cpp_int scaled = ((numerator << (kFracBits + 1)) + denominator) / (2 * denominator);
  if (scaled >= (cpp_int(1) << 126)) throw malformed_input("number out of Q64.64 range");
  auto raw = static_cast<i128>(static_cast<u128>(scaled));
  return from_raw(negative ? -raw : raw);
}

// Circle distance |a - b| mod 1 in [0, 1/2].
inline double circle_distance(double a, double b) {
  const double d = a - b;
  return std::fabs(d - std::nearbyint(d));
}

}  // namespace heislab
