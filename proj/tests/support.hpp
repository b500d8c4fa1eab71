#pragma once

// Random instance generators shared by the test binaries.

#include <cstdint>
#include <random>

#include "heislab/heislab.hpp"

namespace heislab::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::int64_t integer(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::uint64_t bits() { return rng_(); }

  // integer part in [lo, hi] plus a uniformly random 64-bit fraction
  Fixed fixed(std::int64_t lo = -8, std::int64_t hi = 8) {
    return Fixed::from_raw((static_cast<i128>(integer(lo, hi)) << 64) + static_cast<i128>(bits()));
  }
  Fixed unit_fixed() { return fixed(0, 0); }
  Fiber fiber(std::int64_t lo = -8, std::int64_t hi = 8) {
    return {integer(lo, hi), (static_cast<u128>(bits()) << 64) | bits()};
  }

  GroupElement<FixedCoords> element(GroupLaw law, std::int64_t span = 8) {
    return {fixed(-span, span), fixed(-span, span), fiber(-span, span), law};
  }
  LatticeElement lattice(std::int64_t span = 6) { return {integer(-span, span), integer(-span, span), integer(-span, span)}; }

  BaseFunctionSpec base_function(int max_terms = 2) {
    BaseFunctionSpec h;
    h.d1 = integer(-3, 3);
    h.d2 = integer(-3, 3);
    const auto n = integer(0, max_terms);
    for (std::int64_t i = 0; i < n; ++i) {
      h.terms.push_back({integer(-2, 2), integer(-2, 2), real(-0.3, 0.3), real(0.0, 6.283)});
    }
    return h;
  }

  SkewSystem system(int max_terms = 2) { return {unit_fixed(), unit_fixed(), base_function(max_terms)}; }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline Fixed fx(double v) { return Fixed::from_double(v); }
inline Fiber fb(double v) { return Fiber::from_double(v); }

inline GroupElement<FixedCoords> elem(double x, double y, double z, GroupLaw law = GroupLaw::heisenberg()) {
  return {fx(x), fx(y), fb(z), law};
}

// Standard test system: alpha ~ sqrt2 - 1, beta ~ sqrt3 - 1, h = x + 0.1 sin(2 pi (x + y)).
inline SkewSystem standard_system() {
  BaseFunctionSpec h;
  h.d1 = 1;
  h.terms.push_back({1, 1, 0.1, 0.0});
  return {Fixed::parse("0.41421356237309504880168872420969807857"),
          Fixed::parse("0.73205080756887729352744634150587236694"), h};
}

}  // namespace heislab::testing
