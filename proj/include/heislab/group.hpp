#pragma once

// The Heisenberg group G = R^3 with
//     (x,y,z)(x',y',z') = (x+x', y+y', z+z' + c(xy' - x'y)),
// c = 1, and the twisted group G* of a prime pair, same law with c = p^2 - q^2.
// Both share the integer lattice Z^3 and the fundamental domain [0,1)^3.
//
// Every routine is a template over a coordinate policy: FixedCoords is exact,
// FloatCoords mirrors it in double precision.

#include <cmath>
#include <cstdint>
#include <string>

#include "heislab/errors.hpp"
#include "heislab/fixed.hpp"

namespace heislab {

struct FixedCoords {
  using Base = Fixed;      // x, y
  using Vertical = Fiber;  // z
};

struct FloatCoords {
  using Base = double;
  using Vertical = double;
};

// Coordinate primitives, overloaded per representation.
namespace coord {

inline std::int64_t floor_int(Fixed v) { return v.floor(); }
inline std::int64_t floor_int(double v) { return static_cast<std::int64_t>(std::floor(v)); }
inline std::int64_t floor_int(const Fiber& v) {
  const i128 f = v.floor();
  if (f > INT64_MAX || f < INT64_MIN) throw numerical_error("vertical coordinate exceeds int64 lattice range");
  return static_cast<std::int64_t>(f);
}

inline Fiber product(Fixed a, Fixed b) { return Fiber::product(a, b); }
inline double product(double a, double b) { return a * b; }

inline Fiber to_vertical(Fixed v) { return Fiber::from_fixed(v); }
inline double to_vertical(double v) { return v; }

inline double to_double(Fixed v) { return v.to_double(); }
inline double to_double(const Fiber& v) { return v.to_double(); }
inline double to_double(double v) { return v; }

template <class T>
T from_int(std::int64_t v);
template <>
inline Fixed from_int<Fixed>(std::int64_t v) { return Fixed::from_int(v); }
template <>
inline Fiber from_int<Fiber>(std::int64_t v) { return Fiber::from_int(v); }
template <>
inline double from_int<double>(std::int64_t v) { return static_cast<double>(v); }

// Rotation numbers live in Fixed; the float path reads their double value.
template <class T>
T from_fixed(Fixed v);
template <>
inline Fixed from_fixed<Fixed>(Fixed v) { return v; }
template <>
inline double from_fixed<double>(Fixed v) { return v.to_double(); }

template <class T>
T from_real(double v);
template <>
inline Fixed from_real<Fixed>(double v) { return Fixed::from_double(v); }
template <>
inline Fiber from_real<Fiber>(double v) { return Fiber::from_double(v); }
template <>
inline double from_real<double>(double v) { return v; }

inline Fixed frac(Fixed v) { return v.frac(); }
inline Fiber frac(const Fiber& v) { return v.frac(); }
inline double frac(double v) {
  const double r = v - std::floor(v);
  return r >= 1.0 ? 0.0 : r;
}

// Representation fix-up after subtracting a lattice part: exact types are
// already in [0,1); doubles can land on 1.0 or -0 through rounding.
inline Fixed unit(Fixed v) { return v; }
inline Fiber unit(const Fiber& v) { return v; }
inline double unit(double v) { return (v < 0.0 || v >= 1.0) ? frac(v) : v + 0.0; }

}  // namespace coord

enum class LawKind { heisenberg, star };

struct GroupLaw {
  LawKind kind = LawKind::heisenberg;
  std::int64_t twist = 1;

  static GroupLaw heisenberg() { return {LawKind::heisenberg, 1}; }
  static GroupLaw star(std::int64_t twist) {
    if (twist == 0) throw contract_error("GroupLaw: twist must be nonzero");
    return {LawKind::star, twist};
  }

  std::string name() const {
    return kind == LawKind::heisenberg ? std::string("heisenberg") : "star(c=" + std::to_string(twist) + ")";
  }

  friend bool operator==(const GroupLaw&, const GroupLaw&) = default;
};

template <class C = FixedCoords>
struct GroupElement {
  using Base = typename C::Base;
  using Vertical = typename C::Vertical;

  Base x{};
  Base y{};
  Vertical z{};
  GroupLaw law = GroupLaw::heisenberg();

  static GroupElement identity(GroupLaw law = GroupLaw::heisenberg()) { return {Base{}, Base{}, Vertical{}, law}; }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

struct LatticeElement {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t m = 0;

  template <class C = FixedCoords>
  GroupElement<C> embed(GroupLaw law) const {
    return {coord::from_int<typename C::Base>(a), coord::from_int<typename C::Base>(b),
            coord::from_int<typename C::Vertical>(m), law};
  }

  friend bool operator==(const LatticeElement&, const LatticeElement&) = default;
};

// c * (x y' - x' y), the commutator term of the law.
template <class C>
typename C::Vertical twisted_area(const typename C::Base& x, const typename C::Base& y, const typename C::Base& x2,
                                  const typename C::Base& y2, std::int64_t twist) {
  return coord::product(x * twist, y2) - coord::product(x2 * twist, y);
}

template <class C>
GroupElement<C> mul(const GroupElement<C>& g, const GroupElement<C>& h, const GroupLaw& law) {
  if (g.law != law || h.law != law) {
    throw contract_error("mul: operands tagged " + g.law.name() + " and " + h.law.name() + " under " + law.name());
  }
  return {g.x + h.x, g.y + h.y, g.z + h.z + twisted_area<C>(g.x, g.y, h.x, h.y, law.twist), law};
}

template <class C>
GroupElement<C> mul(const GroupElement<C>& g, const GroupElement<C>& h) {
  return mul(g, h, g.law);
}

template <class C>
GroupElement<C> inv(const GroupElement<C>& g) {
  return {-g.x, -g.y, -g.z, g.law};
}

// The unique lattice point gamma with g * gamma^-1 in [0,1)^3:
//     (floor x, floor y, floor(z - c(x floor y - floor x y))).
template <class C>
LatticeElement lattice_floor(const GroupElement<C>& g) {
  const std::int64_t a = coord::floor_int(g.x);
  const std::int64_t b = coord::floor_int(g.y);
  const std::int64_t c = g.law.twist;
  const auto shear = coord::to_vertical(g.x * (c * b) - g.y * (c * a));
  return {a, b, coord::floor_int(g.z - shear)};
}

// Canonical fundamental-domain representative of the coset g Gamma.
template <class C = FixedCoords>
class NilPoint {
 public:
  using Element = GroupElement<C>;

  NilPoint() = default;

  static NilPoint identity(GroupLaw law = GroupLaw::heisenberg()) {
    NilPoint p;
    p.rep_ = Element::identity(law);
    return p;
  }

  // Wraps a triple already known to lie in [0,1)^3.
  static NilPoint from_reduced(const Element& rep) {
    if (!in_unit_box(rep)) throw malformed_input("NilPoint: representative outside [0,1)^3");
    NilPoint p;
    p.rep_ = rep;
    return p;
  }

  static bool in_unit_box(const Element& e) {
    const auto inside = [](const auto& v) { return coord::floor_int(v) == 0; };
    return inside(e.x) && inside(e.y) && inside(e.z);
  }

  const Element& rep() const { return rep_; }
  const GroupLaw& law() const { return rep_.law; }

  friend bool operator==(const NilPoint&, const NilPoint&) = default;

 private:
  Element rep_{};
};

template <class C>
NilPoint<C> canonical_rep(const GroupElement<C>& g) {
  const LatticeElement gamma = lattice_floor(g);
  GroupElement<C> r = mul(g, inv(gamma.template embed<C>(g.law)));
  r.x = coord::unit(r.x);
  r.y = coord::unit(r.y);
  r.z = coord::unit(r.z);
  return NilPoint<C>::from_reduced(r);
}

// Left translation g * x on G/Gamma.
template <class C>
NilPoint<C> translate(const GroupElement<C>& g, const NilPoint<C>& pt) {
  return canonical_rep(mul(g, pt.rep()));
}

// Exact -> double shadow of an element, for cross-checking the float path.
inline GroupElement<FloatCoords> to_float(const GroupElement<FixedCoords>& g) {
  return {g.x.to_double(), g.y.to_double(), g.z.to_double(), g.law};
}

}  // namespace heislab
