#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include "support.hpp"

using namespace heislab;
using boost::multiprecision::cpp_int;
using heislab::testing::Gen;

namespace {

// Fiber value scaled by 2^128, as an exact big integer.
cpp_int scaled(const Fiber& f) {
  cpp_int hi = 0;
  const i128 h = f.floor();
  const u128 mag = h < 0 ? -static_cast<u128>(h) : static_cast<u128>(h);
  hi = cpp_int(static_cast<std::uint64_t>(mag >> 64)) << 64 | cpp_int(static_cast<std::uint64_t>(mag));
  if (h < 0) hi = -hi;
  const u128 lo = f.frac_bits();
  return (hi << 128) + (cpp_int(static_cast<std::uint64_t>(lo >> 64)) << 64) + cpp_int(static_cast<std::uint64_t>(lo));
}

cpp_int big(i128 v) {
  const u128 mag = v < 0 ? -static_cast<u128>(v) : static_cast<u128>(v);
  cpp_int out = cpp_int(static_cast<std::uint64_t>(mag >> 64)) << 64 | cpp_int(static_cast<std::uint64_t>(mag));
  return v < 0 ? cpp_int(-out) : out;
}

}  // namespace

TEST(Fixed, ParsesDecimalAndDyadicLiterals) {
  EXPECT_EQ(Fixed::parse("0.5").raw(), static_cast<i128>(1) << 63);
  EXPECT_EQ(Fixed::parse("-1.25"), Fixed::from_double(-1.25));
  EXPECT_EQ(Fixed::parse("3/2^2"), Fixed::from_double(0.75));
  EXPECT_EQ(Fixed::parse(" 7 "), Fixed::from_int(7));
  EXPECT_EQ(Fixed::parse(".25"), Fixed::from_double(0.25));
  EXPECT_THROW(Fixed::parse("abc"), malformed_input);
  EXPECT_THROW(Fixed::parse("1.2.3"), malformed_input);
  EXPECT_THROW(Fixed::parse(""), malformed_input);
}

TEST(Fixed, DecimalRoundsToNearestDyadic) {
  // 0.1 * 2^64 = 1844674407370955161.6 -> ...162
  EXPECT_EQ(Fixed::parse("0.1").raw(), static_cast<i128>(1844674407370955162ULL));
  EXPECT_EQ(Fixed::parse("-0.1").raw(), -static_cast<i128>(1844674407370955162ULL));
}

TEST(Fixed, DyadicStringRoundTrips) {
  Gen gen(11);
  for (int i = 0; i < 2000; ++i) {
    const Fixed v = gen.fixed(-1000, 1000);
    EXPECT_EQ(Fixed::parse(v.to_dyadic_string()), v);
  }
  EXPECT_EQ(Fixed::from_double(0.5).to_dyadic_string(), "1/2^1");
  EXPECT_EQ(Fixed::from_int(-3).to_dyadic_string(), "-3/2^0");
}

TEST(Fixed, FloorAndFracAreExact) {
  const Fixed v = Fixed::from_double(-2.75);
  EXPECT_EQ(v.floor(), -3);
  EXPECT_EQ(v.frac(), Fixed::from_double(0.25));
  EXPECT_EQ(v.floor() + v.frac().to_double(), -2.75);
}

TEST(Fiber, ProductMatchesBigIntegerOracle) {
  Gen gen(12);
  for (int i = 0; i < 5000; ++i) {
    const Fixed a = gen.fixed(-1'000'000, 1'000'000), b = gen.fixed(-1'000'000, 1'000'000);
    EXPECT_EQ(scaled(Fiber::product(a, b)), big(a.raw()) * big(b.raw()));
  }
}

TEST(Fiber, AdditiveOperationsMatchOracle) {
  Gen gen(13);
  for (int i = 0; i < 5000; ++i) {
    const Fiber a = gen.fiber(-100, 100), b = gen.fiber(-100, 100);
    EXPECT_EQ(scaled(a + b), scaled(a) + scaled(b));
    EXPECT_EQ(scaled(a - b), scaled(a) - scaled(b));
    EXPECT_EQ(scaled(-a), -scaled(a));
    const auto k = gen.integer(-100000, 100000);
    EXPECT_EQ(scaled(a * k), scaled(a) * k);
  }
}

TEST(Fiber, FromFixedAndDouble) {
  EXPECT_EQ(Fiber::from_fixed(Fixed::from_double(-0.5)), Fiber::from_double(-0.5));
  EXPECT_EQ(Fiber::from_double(-0.5).floor(), -1);
  EXPECT_DOUBLE_EQ(Fiber::from_double(-0.5).frac_to_double(), 0.5);
  // a tiny negative value must not produce a fraction of exactly one
  const Fiber tiny = Fiber::from_double(-1e-30);
  EXPECT_EQ(tiny.floor(), 0);
  EXPECT_EQ(tiny.frac_bits(), 0u);
}
