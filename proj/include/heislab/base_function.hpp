#pragma once

// Fiber functions h : T^2 -> T^1 of the skew product, given by an explicit
// continuous lift
//     lift(x, y) = d1 x + d2 y + P(x, y),   P Z^2-periodic and Lipschitz,
// where P is a finite trigonometric sum, optionally plus a periodic bilinear
// interpolation table.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "heislab/errors.hpp"
#include "heislab/fixed.hpp"
#include "heislab/group.hpp"

namespace heislab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// e(t) = exp(2 pi i t)
inline std::complex<double> unit_phase(double t) {
  const double r = t - std::floor(t);
  return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

// amplitude * sin(2 pi (k1 x + k2 y) + phase), phase in radians.
struct TrigTerm {
  std::int64_t k1 = 0;
  std::int64_t k2 = 0;
  double amplitude = 0.0;
  double phase = 0.0;

  friend bool operator==(const TrigTerm&, const TrigTerm&) = default;
};

// Periodic bilinear interpolation of samples on an nx-by-ny grid of [0,1)^2.
struct PeriodicTable {
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> values;  // row-major, values[i * ny + j] at (i/nx, j/ny)

  double at(std::size_t i, std::size_t j) const { return values[(i % nx) * ny + (j % ny)]; }

  double operator()(double x, double y) const {
    const double fx = x * static_cast<double>(nx), fy = y * static_cast<double>(ny);
    const double ix = std::floor(fx), iy = std::floor(fy);
    const double tx = fx - ix, ty = fy - iy;
    const auto i = static_cast<std::size_t>(ix) % nx, j = static_cast<std::size_t>(iy) % ny;
    return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) + (1 - tx) * ty * at(i, j + 1) +
           tx * ty * at(i + 1, j + 1);
  }

  // Bound in the sup-norm metric: max |d/dx| + max |d/dy| over cells.
  double lipschitz() const {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      for (std::size_t j = 0; j < ny; ++j) {
        mx = std::max(mx, std::fabs(at(i + 1, j) - at(i, j)) * static_cast<double>(nx));
        my = std::max(my, std::fabs(at(i, j + 1) - at(i, j)) * static_cast<double>(ny));
      }
    }
    return mx + my;
  }

  void validate() const {
    if (nx == 0 || ny == 0 || values.size() != nx * ny) throw malformed_input("PeriodicTable: shape mismatch");
  }

  friend bool operator==(const PeriodicTable&, const PeriodicTable&) = default;
};

struct BaseFunctionSpec {
  std::int64_t d1 = 0;
  std::int64_t d2 = 0;
  std::int64_t offset = 0;  // integer shift selecting the lift
  std::vector<TrigTerm> terms;
  std::optional<PeriodicTable> table;

  static BaseFunctionSpec zero() { return {}; }

  // The periodic part, for (x, y) in [0,1)^2.
  double periodic(double x, double y) const {
    double s = 0.0;
    for (const auto& t : terms) {
      const double arg = static_cast<double>(t.k1) * x + static_cast<double>(t.k2) * y;
      s += t.amplitude * std::sin(kTwoPi * (arg - std::floor(arg)) + t.phase);
    }
    if (table) s += (*table)(x, y);
    return s;
  }

  // Lipschitz constant of the lift in the sup-norm metric on R^2.
  double lipschitz() const {
    double l = static_cast<double>(std::abs(d1) + std::abs(d2));
    for (const auto& t : terms) {
      l += std::fabs(t.amplitude) * kTwoPi * static_cast<double>(std::abs(t.k1) + std::abs(t.k2));
    }
    if (table) l += table->lipschitz();
    return l;
  }

  bool has_closed_form_sums() const { return !table.has_value(); }

  bool is_zero() const { return d1 == 0 && d2 == 0 && offset == 0 && !table && std::all_of(terms.begin(), terms.end(), [](auto& t) { return t.amplitude == 0.0; }); }

  void validate() const {
    for (const auto& t : terms) {
      if (!std::isfinite(t.amplitude) || !std::isfinite(t.phase)) throw malformed_input("trig term must be finite");
    }
    if (table) table->validate();
  }

  friend bool operator==(const BaseFunctionSpec&, const BaseFunctionSpec&) = default;
};

// The lift d1 x + d2 y + P(x, y); P is always read at the reduced point, so
// lift(x+1, y) - lift(x, y) = d1 holds exactly on the fixed-point path.
inline double eval_h_lift(const BaseFunctionSpec& h, double x, double y) {
  return static_cast<double>(h.offset) + static_cast<double>(h.d1) * x + static_cast<double>(h.d2) * y +
         h.periodic(coord::frac(x), coord::frac(y));
}

inline Fiber eval_h_lift(const BaseFunctionSpec& h, Fixed x, Fixed y) {
  return Fiber::from_fixed(x * h.d1 + y * h.d2 + Fixed::from_int(h.offset)) + Fiber::from_double(h.periodic(x.frac().to_double(), y.frac().to_double()));
}

namespace detail {

// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

}  // namespace detail

// h_n(x, y) = sum_{i<n} h(x + i alpha, y + i beta), as a real lift.
inline double cocycle_sum(const BaseFunctionSpec& h, double x, double y, std::uint64_t n, double alpha, double beta) {
  detail::CompensatedSum acc;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto di = static_cast<double>(i);
    acc.add(eval_h_lift(h, x + di * alpha, y + di * beta));
  }
  return acc.value();
}

// Exact variant: the base points and the running sum are fixed point.
inline Fiber cocycle_sum(const BaseFunctionSpec& h, Fixed x, Fixed y, std::uint64_t n, Fixed alpha, Fixed beta) {
  Fiber acc;
  Fixed u = x, v = y;
  for (std::uint64_t i = 0; i < n; ++i) {
    acc += eval_h_lift(h, u, v);
    u += alpha;
    v += beta;
  }
  return acc;
}

// h_n mod 1 in floating point, walking the base orbit the way the float
// stepper does (reduce after each rotation) and evaluating the lift at the
// reduced point. Integer shifts of the lift drop out mod 1.
inline double cocycle_sum_mod1(const BaseFunctionSpec& h, double x, double y, std::uint64_t n, double alpha, double beta) {
  double acc = 0.0, u = x, v = y;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double val = eval_h_lift(h, u, v);
    acc += val - std::floor(val);
    acc -= std::floor(acc);
    u += alpha;
    u -= std::floor(u);
    v += beta;
    v -= std::floor(v);
  }
  return acc;
}

// O(#terms) evaluation of h_n for trigonometric h: the linear part is an
// arithmetic series and each term a geometric series in e(k1 alpha + k2 beta).
inline double cocycle_sum_closed(const BaseFunctionSpec& h, double x, double y, std::uint64_t n, Fixed alpha,
                                 Fixed beta) {
  if (!h.has_closed_form_sums()) throw contract_error("cocycle_sum_closed: table-valued h has no closed form");
  const auto dn = static_cast<double>(n);
  const double a = alpha.to_double(), b = beta.to_double();
  double total = dn * (static_cast<double>(h.offset) + static_cast<double>(h.d1) * x + static_cast<double>(h.d2) * y) +
                 (static_cast<double>(h.d1) * a + static_cast<double>(h.d2) * b) * (dn * (dn - 1.0) * 0.5);
  for (const auto& t : h.terms) {
    if (t.amplitude == 0.0 || n == 0) continue;
    const Fixed theta = alpha * t.k1 + beta * t.k2;
    const std::complex<double> start =
        unit_phase(static_cast<double>(t.k1) * x + static_cast<double>(t.k2) * y) * std::polar(1.0, t.phase);
    std::complex<double> geometric;
    const double theta_off = circle_distance(theta.frac().to_double(), 0.0);
    if (theta_off == 0.0) {
      geometric = dn;
    } else if (theta_off < 1e-6) {
      // too close to resonance for the quotient formula
      for (std::uint64_t m = 0; m < n; ++m) geometric += unit_phase((theta * static_cast<std::int64_t>(m)).frac().to_double());
    } else {
      const std::complex<double> ratio = unit_phase(theta.frac().to_double());
      const std::complex<double> last = unit_phase((theta * static_cast<std::int64_t>(n)).frac().to_double());
      geometric = (last - 1.0) / (ratio - 1.0);
    }
    total += t.amplitude * (start * geometric).imag();
  }
  return total;
}

// h evaluated in the representation of the coordinate policy.
template <class C>
typename C::Vertical h_value(const BaseFunctionSpec& h, const typename C::Base& x, const typename C::Base& y) {
  return eval_h_lift(h, x, y);
}

}  // namespace heislab
