#pragma once

// Test functions of pure vertical frequency on X and their joining descent.
//
// A vertical observable is F(x) = e(xi z~) phi(x~, y~) on the canonical
// representative (x~, y~, z~); phi is a bump compactly supported inside the
// open unit square, which makes F continuous on the nilmanifold. Base modes
// F = e(k1 x + k2 y) have xi = 0.

#include <cmath>
#include <complex>
#include <cstdint>

#include "heislab/base_function.hpp"
#include "heislab/errors.hpp"
#include "heislab/group.hpp"
#include "heislab/joining.hpp"

namespace heislab {

// Tensor bump b(|x-cx|/r) b(|y-cy|/r), b(t) = 1 - (3t^2 - 2t^3) on [0,1].
struct Bump {
  double center_x = 0.5;
  double center_y = 0.5;
  double radius = 0.375;
  double amplitude = 1.0;

  static double profile(double t) {
    if (t >= 1.0) return 0.0;
    return 1.0 - t * t * (3.0 - 2.0 * t);
  }

  double operator()(double x, double y) const {
    return amplitude * profile(std::fabs(x - center_x) / radius) * profile(std::fabs(y - center_y) / radius);
  }

  // sup-norm Lipschitz bound: the profile has slope at most 3/2 per radius
  double lipschitz() const { return 2.0 * std::fabs(amplitude) * 1.5 / radius; }

  void validate() const {
    if (!(radius > 0.0) || center_x - radius <= 0.0 || center_x + radius >= 1.0 || center_y - radius <= 0.0 ||
        center_y + radius >= 1.0) {
      throw malformed_input("Bump: support must lie inside the open unit square");
    }
  }

  friend bool operator==(const Bump&, const Bump&) = default;
};

struct Observable {
  enum class Kind { vertical, base_mode };

  Kind kind = Kind::vertical;
  std::int64_t xi = 1;
  Bump bump;
  std::int64_t k1 = 0;
  std::int64_t k2 = 0;

  static Observable vertical(std::int64_t xi, Bump bump = {}) { return {Kind::vertical, xi, bump, 0, 0}; }
  static Observable base_mode(std::int64_t k1, std::int64_t k2) { return {Kind::base_mode, 0, {}, k1, k2}; }
  static Observable constant() { return base_mode(0, 0); }

  double sup_norm() const { return kind == Kind::base_mode ? 1.0 : std::fabs(bump.amplitude); }

  void validate() const {
    if (kind == Kind::vertical) bump.validate();
  }

  friend bool operator==(const Observable&, const Observable&) = default;
};

namespace detail {

// e(xi z) with xi z reduced mod 1 before leaving exact arithmetic
inline std::complex<double> vertical_phase(std::int64_t xi, const Fiber& z) { return unit_phase((z * xi).frac_to_double()); }
inline std::complex<double> vertical_phase(std::int64_t xi, double z) {
  return unit_phase(coord::frac(static_cast<double>(xi) * z));
}

inline std::complex<double> base_phase(std::int64_t k1, std::int64_t k2, Fixed x, Fixed y) {
  return unit_phase((x * k1 + y * k2).frac().to_double());
}
inline std::complex<double> base_phase(std::int64_t k1, std::int64_t k2, double x, double y) {
  return unit_phase(static_cast<double>(k1) * x + static_cast<double>(k2) * y);
}

}  // namespace detail

template <class C>
std::complex<double> eval_observable(const Observable& obs, const NilPoint<C>& pt) {
  const auto& r = pt.rep();
  if (obs.kind == Observable::Kind::base_mode) return detail::base_phase(obs.k1, obs.k2, r.x, r.y);
  const double weight = obs.bump(coord::to_double(r.x), coord::to_double(r.y));
  if (weight == 0.0) return {0.0, 0.0};
  return weight * detail::vertical_phase(obs.xi, r.z);
}

// (1/m) sum_j F((x, y, j/m) Gamma): the fibre integral by an m-point rule,
// exact for frequencies below m.
template <class C = FixedCoords>
std::complex<double> fiber_average(const Observable& obs, const typename C::Base& x, const typename C::Base& y,
                                   std::int64_t m, GroupLaw law = GroupLaw::heisenberg()) {
  if (m < 2 * std::abs(obs.xi) + 2) throw contract_error("fiber_average: need m >= 2|xi| + 2");
  std::complex<double> acc{};
  for (std::int64_t j = 0; j < m; ++j) {
    const auto z = coord::from_real<typename C::Vertical>(static_cast<double>(j) / static_cast<double>(m));
    acc += eval_observable(obs, canonical_rep(GroupElement<C>{x, y, z, law}));
  }
  return acc / static_cast<double>(m);
}

// f1(x1, x2) = F(x1) conj(F(x2)) on X1 and its descent f* to X*.
struct JoiningObservable {
  Observable source;
  std::int64_t p = 3;
  std::int64_t q = 2;

  JoiningObservable(Observable src, std::int64_t p_, std::int64_t q_) : source(src), p(p_), q(q_) {
    require_prime_pair(p, q);
    if (source.kind != Observable::Kind::vertical || source.xi == 0) {
      throw contract_error("JoiningObservable: source must have nonzero vertical frequency");
    }
  }
};

template <class C>
std::complex<double> eval_pair_observable(const JoiningObservable& jobs, const NilPoint<C>& first,
                                          const NilPoint<C>& second) {
  return eval_observable(jobs.source, first) * std::conj(eval_observable(jobs.source, second));
}

// f* at the X* point with rho coordinates (x, y, z): evaluate f1 on the G1
// lift (px, py, z, qx, qy, 0).
template <class C>
std::complex<double> eval_joining_observable(const JoiningObservable& jobs, const TorusPoint<C>& pt) {
  const auto law = GroupLaw::heisenberg();
  const auto first = canonical_rep(GroupElement<C>{pt.x * jobs.p, pt.y * jobs.p, pt.z, law});
  const auto second = canonical_rep(GroupElement<C>{pt.x * jobs.q, pt.y * jobs.q, typename C::Vertical{}, law});
  return eval_pair_observable(jobs, first, second);
}

}  // namespace heislab
