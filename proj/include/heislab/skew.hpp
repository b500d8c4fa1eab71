#pragma once

// Skew products on Heisenberg nilmanifolds.
//
//   T  : x -> (alpha, beta, h(x,y)) x            on X  = G/Gamma
//   T* : x -> (alpha, beta, H(x,y)) * x          on X* = G*/Gamma*
//   T*': (x,y,z) -> (x+alpha, y+beta, z+H'(x,y))  on T^3, conjugate to T* by rho
//
// with H(x,y) = h_p(px,py) - h_q(qx,qy) for the prime pair p > q.

#include <algorithm>
#include <cstdint>

#include "heislab/base_function.hpp"
#include "heislab/errors.hpp"
#include "heislab/group.hpp"
#include "heislab/joining.hpp"

namespace heislab {

struct SkewSystem {
  Fixed alpha;
  Fixed beta;
  BaseFunctionSpec h;
};

// Rotation numbers on the float path are snapped to a 2^-52 grid, so that
// x + alpha is exact for x on the grid in [0, 2) and the float stepper does not
// drift away from the closed form.
inline Fixed float_grid(Fixed v) {
  constexpr i128 step = i128{1} << 12;
  const i128 r = v.raw();
  return Fixed::from_raw((r + step / 2) - (((r + step / 2) % step) + step) % step);
}

template <class C>
GroupElement<C> rotation_element(const SkewSystem& sys, std::uint64_t n, const typename C::Vertical& fiber,
                                 const GroupLaw& law) {
  const auto k = static_cast<std::int64_t>(n);
  if constexpr (std::is_same_v<C, FloatCoords>) {
    return {(float_grid(sys.alpha) * k).to_double(), (float_grid(sys.beta) * k).to_double(), fiber, law};
  } else {
    return {sys.alpha * k, sys.beta * k, fiber, law};
  }
}

template <class C>
NilPoint<C> step_T(const SkewSystem& sys, const NilPoint<C>& pt) {
  if (pt.law() != GroupLaw::heisenberg()) throw contract_error("step_T: point must live on X");
  const auto& r = pt.rep();
  return translate(rotation_element<C>(sys, 1, h_value<C>(sys.h, r.x, r.y), pt.law()), pt);
}

// h_n along the base orbit of (x, y), in the policy's representation.
template <class C>
typename C::Vertical cocycle_sum_in(const SkewSystem& sys, const typename C::Base& x, const typename C::Base& y,
                                    std::uint64_t n) {
  if constexpr (std::is_same_v<C, FixedCoords>) {
    return cocycle_sum(sys.h, x, y, n, sys.alpha, sys.beta);
  } else {
    return cocycle_sum(sys.h, x, y, n, sys.alpha.to_double(), sys.beta.to_double());
  }
}

// T^n x = (n alpha, n beta, h_n(x, y)) x
template <class C>
NilPoint<C> iterate_T(const SkewSystem& sys, const NilPoint<C>& pt, std::uint64_t n) {
  if (pt.law() != GroupLaw::heisenberg()) throw contract_error("iterate_T: point must live on X");
  if (n == 0) return pt;
  const auto& r = pt.rep();
  if constexpr (std::is_same_v<C, FloatCoords>) {
    // The rotation is split as (A, B, 0)(a', b', w) with A, B integers so
    // that no product of two large coordinates is ever formed.
    const Fixed ga = float_grid(sys.alpha), gb = float_grid(sys.beta);
    const auto k = static_cast<std::int64_t>(n);
    const Fixed na = ga * k, nb = gb * k;
    const double c = static_cast<double>(pt.law().twist);
    const double A = static_cast<double>(na.floor()), B = static_cast<double>(nb.floor());
    const double fa = na.frac().to_double(), fb = nb.frac().to_double();
    const double w = cocycle_sum_mod1(sys.h, r.x, r.y, n, ga.to_double(), gb.to_double()) - c * (A * fb - fa * B);
    const auto q = translate(GroupElement<C>{fa, fb, w - std::floor(w), pt.law()}, pt).rep();
    const double z = q.z + 2.0 * c * (A * q.y - B * q.x);
    return canonical_rep(GroupElement<C>{q.x, q.y, z - std::floor(z), pt.law()});
  } else {
    return translate(rotation_element<C>(sys, n, cocycle_sum_in<C>(sys, r.x, r.y, n), pt.law()), pt);
  }
}

struct JoiningSystem {
  SkewSystem base;
  std::int64_t p = 3;
  std::int64_t q = 2;
  std::int64_t twist = 5;

  GroupLaw law() const { return GroupLaw::star(twist); }
};

inline JoiningSystem build_joining(const SkewSystem& sys, std::int64_t p, std::int64_t q) {
  require_prime_pair(p, q);
  return {sys, p, q, p * p - q * q};
}

// Lift of H(x, y) = h_p(px, py) - h_q(qx, qy).
template <class C>
typename C::Vertical eval_H_lift(const JoiningSystem& js, const typename C::Base& x, const typename C::Base& y) {
  return cocycle_sum_in<C>(js.base, x * js.p, y * js.p, static_cast<std::uint64_t>(js.p)) -
         cocycle_sum_in<C>(js.base, x * js.q, y * js.q, static_cast<std::uint64_t>(js.q));
}

inline double eval_H_lift(const JoiningSystem& js, double x, double y) { return eval_H_lift<FloatCoords>(js, x, y); }

// T*: left translation by (alpha, beta, H(x, y)) under the twisted law.
template <class C>
NilPoint<C> step_Tstar(const JoiningSystem& js, const NilPoint<C>& pt) {
  if (pt.law() != js.law()) throw contract_error("step_Tstar: point must live on X*");
  const auto& r = pt.rep();
  return translate(rotation_element<C>(js.base, 1, eval_H_lift<C>(js, r.x, r.y), pt.law()), pt);
}

namespace detail {

// (x + a, y + b, z + H + c((a y - b x) - (x + a) floor(y + b) + floor(x + a)(y + b))) reduced mod 1.
template <class C>
TorusPoint<C> trivialized_shift(const JoiningSystem& js, const TorusPoint<C>& pt, const typename C::Base& a,
                                const typename C::Base& b, const typename C::Vertical& cocycle) {
  const std::int64_t c = js.twist;
  const auto X = pt.x + a, Y = pt.y + b;
  const std::int64_t fx = coord::floor_int(X), fy = coord::floor_int(Y);
  const auto increment = cocycle + coord::product(a * c, pt.y) - coord::product(b * c, pt.x) +
                         coord::to_vertical(Y * (c * fx) - X * (c * fy));
  return {coord::unit(X - coord::from_int<typename C::Base>(fx)), coord::unit(Y - coord::from_int<typename C::Base>(fy)),
          coord::unit(coord::frac(pt.z + increment))};
}

}  // namespace detail

// H'(x, y) for (x, y) in [0,1)^2, as a real number.
template <class C>
typename C::Vertical cocycle_H_prime(const JoiningSystem& js, const typename C::Base& x, const typename C::Base& y) {
  const std::int64_t c = js.twist;
  const auto a = coord::from_fixed<typename C::Base>(js.base.alpha);
  const auto b = coord::from_fixed<typename C::Base>(js.base.beta);
  const auto X = x + a, Y = y + b;
  const std::int64_t fx = coord::floor_int(X), fy = coord::floor_int(Y);
  return eval_H_lift<C>(js, x, y) + coord::product(a * c, y) - coord::product(b * c, x) +
         coord::to_vertical(Y * (c * fx) - X * (c * fy));
}

template <class C>
TorusPoint<C> step_Tstar_trivialized(const JoiningSystem& js, const TorusPoint<C>& pt) {
  if (coord::floor_int(pt.x) != 0 || coord::floor_int(pt.y) != 0 || coord::floor_int(pt.z) != 0) {
    throw contract_error("step_Tstar_trivialized: coordinates must lie in [0,1)");
  }
  return detail::trivialized_shift<C>(js, pt, coord::from_fixed<typename C::Base>(js.base.alpha),
                                      coord::from_fixed<typename C::Base>(js.base.beta),
                                      eval_H_lift<C>(js, pt.x, pt.y));
}

// H_n(x, y) = sum_{i<n} H(x + i alpha, y + i beta), summed term by term.
template <class C>
typename C::Vertical cocycle_Hn(const JoiningSystem& js, const typename C::Base& x, const typename C::Base& y,
                                std::uint64_t n) {
  typename C::Vertical acc{};
  const auto a = coord::from_fixed<typename C::Base>(js.base.alpha);
  const auto b = coord::from_fixed<typename C::Base>(js.base.beta);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::int64_t>(i);
    if constexpr (std::is_same_v<C, FixedCoords>) {
      acc += eval_H_lift<C>(js, x + a * k, y + b * k);
    } else {
      acc += eval_H_lift<C>(js, x + a * static_cast<double>(k), y + b * static_cast<double>(k));
    }
  }
  return acc;
}

// H'_n(x, y) = H_n + c((n alpha y - n beta x) - (x + n alpha) floor(y + n beta) + floor(x + n alpha)(y + n beta)).
template <class C>
typename C::Vertical cocycle_Hn_prime(const JoiningSystem& js, const typename C::Base& x, const typename C::Base& y,
                                      std::uint64_t n) {
  if (n == 0) throw contract_error("cocycle_Hn_prime: n must be positive");
  const std::int64_t c = js.twist;
  const auto k = static_cast<std::int64_t>(n);
  const auto na = coord::from_fixed<typename C::Base>(js.base.alpha * k);
  const auto nb = coord::from_fixed<typename C::Base>(js.base.beta * k);
  const auto X = x + na, Y = y + nb;
  const std::int64_t fx = coord::floor_int(X), fy = coord::floor_int(Y);
  return cocycle_Hn<C>(js, x, y, n) + coord::product(na * c, y) - coord::product(nb * c, x) +
         coord::to_vertical(Y * (c * fx) - X * (c * fy));
}

// (T*')^n in closed form.
template <class C>
TorusPoint<C> iterate_Tstar_trivialized(const JoiningSystem& js, const TorusPoint<C>& pt, std::uint64_t n) {
  if (n == 0) return pt;
  const auto k = static_cast<std::int64_t>(n);
  const auto X = pt.x + coord::from_fixed<typename C::Base>(js.base.alpha * k);
  const auto Y = pt.y + coord::from_fixed<typename C::Base>(js.base.beta * k);
  return {coord::unit(coord::frac(X)), coord::unit(coord::frac(Y)),
          coord::unit(coord::frac(pt.z + cocycle_Hn_prime<C>(js, pt.x, pt.y, n)))};
}

// Real lift of H_n(x, y) via H_n(x,y) = h_{pn}(px, py) - h_{qn}(qx, qy), with
// closed-form Birkhoff sums when h is trigonometric. This is the fast path
// used on dense meshes; cocycle_Hn is the term-by-term reference.
inline double Hn_lift(const JoiningSystem& js, double x, double y, std::uint64_t n) {
  const auto pn = static_cast<std::uint64_t>(js.p) * n, qn = static_cast<std::uint64_t>(js.q) * n;
  const auto p = static_cast<double>(js.p), q = static_cast<double>(js.q);
  const auto& s = js.base;
  if (s.h.has_closed_form_sums()) {
    return cocycle_sum_closed(s.h, p * x, p * y, pn, s.alpha, s.beta) -
           cocycle_sum_closed(s.h, q * x, q * y, qn, s.alpha, s.beta);
  }
  const double a = s.alpha.to_double(), b = s.beta.to_double();
  return cocycle_sum(s.h, p * x, p * y, pn, a, b) - cocycle_sum(s.h, q * x, q * y, qn, a, b);
}

}  // namespace heislab
