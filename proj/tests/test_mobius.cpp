#include <gtest/gtest.h>

#include <array>
#include <vector>

#include "heislab/mobius.hpp"

using namespace heislab;

namespace {

// mu by trial division.
int mu_oracle(std::uint64_t n) {
  int sign = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    n /= d;
    if (n % d == 0) return 0;
    sign = -sign;
  }
  return n > 1 ? -sign : sign;
}

bool prime_oracle(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST(Mobius, Examples) {
  const auto mu = sieve_mobius(100);
  EXPECT_EQ(mu(1), 1);
  EXPECT_EQ(mu(2), -1);
  EXPECT_EQ(mu(4), 0);
  EXPECT_EQ(mu(6), 1);
  EXPECT_EQ(mu(30), -1);
  EXPECT_EQ(mu(97), -1);
  EXPECT_EQ(mu(100), 0);
}

TEST(Mobius, AgreesWithTrialDivision) {
  const std::uint64_t N = 100000;
  const auto mu = sieve_mobius(N);
  std::int64_t m = 0;
  std::vector<std::int64_t> oracle_mertens;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const int expect = mu_oracle(n);
    ASSERT_EQ(mu(n), expect) << "n=" << n;
    m += expect;
    if (n == 1000 || n == 10000 || n == 100000) oracle_mertens.push_back(m);
  }
  const std::array<std::uint64_t, 3> cps{1000, 10000, 100000};
  EXPECT_EQ(mu.mertens_at(cps), oracle_mertens);
  EXPECT_EQ(mu.mertens(1000), oracle_mertens[0]);
  // known values of the Mertens function
  EXPECT_EQ(oracle_mertens[0], 2);
  EXPECT_EQ(oracle_mertens[1], -23);
  EXPECT_EQ(oracle_mertens[2], -48);
}

TEST(Mobius, MinusOneOnPrimes) {
  const auto mu = sieve_mobius(10000);
  for (std::uint64_t p = 2; p <= 10000; ++p)
    if (prime_oracle(p)) {
      EXPECT_EQ(mu(p), -1) << p;
    }
}

TEST(Mobius, InversionIdentity) {
  const std::uint64_t N = 10000;
  const auto mu = sieve_mobius(N);
  std::vector<int> divisor_sum(N + 1, 0);
  for (std::uint64_t d = 1; d <= N; ++d)
    for (std::uint64_t n = d; n <= N; n += d) divisor_sum[n] += mu(d);
  for (std::uint64_t n = 1; n <= N; ++n) EXPECT_EQ(divisor_sum[n], n == 1 ? 1 : 0);
}

TEST(Mobius, MultiplicativeAndSquareful) {
  const auto mu = sieve_mobius(5000);
  for (std::uint64_t a = 1; a <= 70; ++a)
    for (std::uint64_t b = 1; b <= 70; ++b) {
      std::uint64_t x = a, y = b;
      while (y != 0) x = std::exchange(y, x % y);
      if (x == 1) {
        EXPECT_EQ(mu(a * b), mu(a) * mu(b));
      }
    }
  for (std::uint64_t p : {2u, 3u, 5u, 7u})
    for (std::uint64_t k = 1; p * p * k <= 5000; ++k) EXPECT_EQ(mu(p * p * k), 0);
}

TEST(Mobius, PackingBoundariesAndRange) {
  for (const std::uint64_t N : {1u, 2u, 31u, 32u, 33u, 63u, 64u, 65u}) {
    const auto mu = sieve_mobius(N);
    EXPECT_EQ(mu.bound(), N);
    for (std::uint64_t n = 1; n <= N; ++n) EXPECT_EQ(mu(n), mu_oracle(n)) << N << " " << n;
    EXPECT_THROW(mu(N + 1), contract_error);
    EXPECT_THROW(mu(0), contract_error);
  }
  EXPECT_THROW(sieve_mobius(0), contract_error);
  EXPECT_THROW(sieve_mobius(MobiusTable::kMaxBound + 1), contract_error);
}
