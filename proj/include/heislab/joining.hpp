#pragma once

// The prime-pair joining: G1 = {(g1, g2) in G^2 : q(x1,y1) = p(x2,y2)}, its
// quotient by the diagonal centre D = {z1 = z2}, and the projection
//     pi(px, py, z1, qx, qy, z2) = (x, y, z1 - z2)
// onto the twisted group G* (twist p^2 - q^2).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>

#include "heislab/errors.hpp"
#include "heislab/group.hpp"

namespace heislab {

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline void require_prime_pair(std::int64_t p, std::int64_t q) {
  if (!is_prime(p) || !is_prime(q)) {
    throw contract_error("prime pair required, got (" + std::to_string(p) + ", " + std::to_string(q) + ")");
  }
  if (p <= q) throw contract_error("prime pair must satisfy p > q");
}

inline GroupLaw star_law(std::int64_t p, std::int64_t q) {
  require_prime_pair(p, q);
  return GroupLaw::star(p * p - q * q);
}

template <class C = FixedCoords>
struct JoiningPair {
  GroupElement<C> first;
  GroupElement<C> second;
  std::int64_t p = 3;
  std::int64_t q = 2;
};

namespace detail {

// Distance of v from the nearest integer.
inline double off_integer(Fixed v) { return v.frac() == Fixed{} ? 0.0 : circle_distance(v.to_double(), 0.0); }
inline double off_integer(double v) { return circle_distance(v, 0.0); }

inline bool is_integer(Fixed v, double) { return v.frac() == Fixed{}; }
inline bool is_integer(double v, double tol) { return off_integer(v) <= tol; }

inline bool is_zero(Fixed v, double) { return v == Fixed{}; }
inline bool is_zero(double v, double tol) { return std::fabs(v) <= tol; }

// Exact quotient v / k; the caller guarantees divisibility.
inline Fixed divide_exact(Fixed v, std::int64_t k) {
  if (v.raw() % k != 0) throw malformed_input("project_pi: coordinate not divisible by prime");
  return Fixed::from_raw(v.raw() / k);
}
inline double divide_exact(double v, std::int64_t k) { return v / static_cast<double>(k); }

// (s, t) with q s - p t = 1.
inline std::pair<std::int64_t, std::int64_t> bezout(std::int64_t q, std::int64_t p) {
  std::int64_t old_r = q, r = p, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t quot = old_r / r;
    old_r = std::exchange(r, old_r - quot * r);
    old_s = std::exchange(s, old_s - quot * s);
    old_t = std::exchange(t, old_t - quot * t);
  }
  // old_s * q + old_t * p = 1
  return {old_s, -old_t};
}

}  // namespace detail

// True iff q*x1 - p*x2 and q*y1 - p*y2 are integers: the pair of cosets lies
// in X1 = G1 Gamma^2 / Gamma^2. Exact on the fixed-point path.
template <class C>
bool joining_membership(const JoiningPair<C>& pair, double tol = 1e-12) {
  if (!is_prime(pair.p) || !is_prime(pair.q) || pair.p == pair.q) {
    throw contract_error("joining_membership: p, q must be distinct primes");
  }
  const auto dx = pair.first.x * pair.q - pair.second.x * pair.p;
  const auto dy = pair.first.y * pair.q - pair.second.y * pair.p;
  return detail::is_integer(dx, tol) && detail::is_integer(dy, tol);
}

// Right-multiplies each factor by a horizontal lattice element so that the
// pair satisfies q(x1,y1) = p(x2,y2) exactly. Same cosets, now a point of G1.
template <class C>
JoiningPair<C> lift_to_joining_group(const JoiningPair<C>& pair) {
  if (!joining_membership(pair)) throw malformed_input("lift_to_joining_group: pair is not in X1");
  const auto [s, t] = detail::bezout(pair.q, pair.p);
  const auto shift_for = [&](const auto& d) {
    const std::int64_t m = static_cast<std::int64_t>(std::llround(coord::to_double(d)));
    // q a1 - p a2 = -m
    return std::pair{-m * s, -m * t};
  };
  const auto [a1, a2] = shift_for(pair.first.x * pair.q - pair.second.x * pair.p);
  const auto [b1, b2] = shift_for(pair.first.y * pair.q - pair.second.y * pair.p);
  JoiningPair<C> out = pair;
  out.first = mul(pair.first, LatticeElement{a1, b1, 0}.template embed<C>(pair.first.law));
  out.second = mul(pair.second, LatticeElement{a2, b2, 0}.template embed<C>(pair.second.law));
  return out;
}

// pi : G1 -> G*, (px, py, z1, qx, qy, z2) -> (x, y, z1 - z2).
template <class C>
GroupElement<C> project_pi(const JoiningPair<C>& g6, double tol = 1e-12) {
  require_prime_pair(g6.p, g6.q);
  if (g6.first.law != GroupLaw::heisenberg() || g6.second.law != GroupLaw::heisenberg()) {
    throw contract_error("project_pi: factors must use the Heisenberg law");
  }
  const auto cx = g6.first.x * g6.q - g6.second.x * g6.p;
  const auto cy = g6.first.y * g6.q - g6.second.y * g6.p;
  if (!detail::is_zero(cx, tol) || !detail::is_zero(cy, tol)) {
    throw malformed_input("project_pi: tuple violates q(x1,y1) = p(x2,y2)");
  }
  return {detail::divide_exact(g6.first.x, g6.p), detail::divide_exact(g6.first.y, g6.p), g6.first.z - g6.second.z,
          star_law(g6.p, g6.q)};
}

// A point of T^3 in the coordinates of the fundamental domain of X*.
template <class C = FixedCoords>
struct TorusPoint {
  typename C::Base x{};
  typename C::Base y{};
  typename C::Vertical z{};

  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

// rho : X* -> T^3 reads off the canonical representative.
template <class C>
TorusPoint<C> rho(const NilPoint<C>& pt) {
  if (pt.law().kind != LawKind::star) throw contract_error("rho: expects a point of X*");
  return {pt.rep().x, pt.rep().y, pt.rep().z};
}

template <class C>
NilPoint<C> rho_inverse(const TorusPoint<C>& t, const GroupLaw& law) {
  return NilPoint<C>::from_reduced({t.x, t.y, t.z, law});
}

// Max over coordinates of the circle distance.
template <class C>
double torus_distance(const TorusPoint<C>& a, const TorusPoint<C>& b) {
  using coord::to_double;
  return std::max({circle_distance(to_double(a.x), to_double(b.x)), circle_distance(to_double(a.y), to_double(b.y)),
                   circle_distance(to_double(a.z), to_double(b.z))});
}

}  // namespace heislab
