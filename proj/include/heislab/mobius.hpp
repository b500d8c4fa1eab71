#pragma once

// Moebius function by a linear (Euler) sieve, packed two bits per entry.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "heislab/errors.hpp"

namespace heislab {

class MobiusTable {
 public:
  static constexpr std::uint64_t kMaxBound = 1'000'000'000;

  MobiusTable() = default;

  std::uint64_t bound() const { return bound_; }

  int operator()(std::uint64_t n) const {
    if (n == 0 || n > bound_) throw contract_error("MobiusTable: index " + std::to_string(n) + " out of range");
    return decode(code(n));
  }

  // M(n) = sum_{k<=n} mu(k)
  std::int64_t mertens(std::uint64_t n) const {
    std::int64_t m = 0;
    for (std::uint64_t k = 1; k <= n; ++k) m += (*this)(k);
    return m;
  }

  // M at each (increasing) checkpoint in one pass.
  std::vector<std::int64_t> mertens_at(std::span<const std::uint64_t> checkpoints) const {
    std::vector<std::int64_t> out;
    out.reserve(checkpoints.size());
    std::int64_t m = 0;
    std::uint64_t k = 0;
    for (const std::uint64_t c : checkpoints) {
      if (c > bound_) throw contract_error("mertens_at: checkpoint beyond sieve bound");
      while (k < c) m += (*this)(++k);
      out.push_back(m);
    }
    return out;
  }

  friend MobiusTable sieve_mobius(std::uint64_t N);

 private:
  // 0 -> 0, 1 -> +1, 2 -> -1, 3 -> not yet reached by the sieve (a prime)
  static constexpr unsigned kUnvisited = 3;

  static int decode(unsigned c) { return c == 1 ? 1 : (c == 2 ? -1 : 0); }
  static unsigned encode(int mu) { return mu == 1 ? 1U : (mu == -1 ? 2U : 0U); }

  unsigned code(std::uint64_t n) const { return static_cast<unsigned>(words_[n >> 5] >> ((n & 31) * 2)) & 3U; }
  void set(std::uint64_t n, unsigned c) {
    const unsigned shift = (n & 31) * 2;
    auto& w = words_[n >> 5];
    w = (w & ~(std::uint64_t{3} << shift)) | (std::uint64_t{c} << shift);
  }

  std::uint64_t bound_ = 0;
  std::vector<std::uint64_t> words_;
};

inline MobiusTable sieve_mobius(std::uint64_t N) {
  if (N < 1 || N > MobiusTable::kMaxBound) throw contract_error("sieve_mobius: N must lie in [1, 1e9]");
  MobiusTable t;
  t.bound_ = N;
  t.words_.assign(N / 32 + 1, ~std::uint64_t{0});
  t.set(1, MobiusTable::encode(1));

  // only primes up to N/2 ever multiply a cofactor >= 2
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= N; ++i) {
    unsigned ci = t.code(i);
    if (ci == MobiusTable::kUnvisited) {
      ci = MobiusTable::encode(-1);
      t.set(i, ci);
      if (i <= N / 2) primes.push_back(static_cast<std::uint32_t>(i));
    }
    const int mu_i = MobiusTable::decode(ci);
    for (const std::uint32_t p : primes) {
      const std::uint64_t m = i * p;
      if (m > N) break;
      if (i % p == 0) {
        t.set(m, 0);
        break;
      }
      t.set(m, MobiusTable::encode(-mu_i));
    }
  }
  return t;
}

}  // namespace heislab
