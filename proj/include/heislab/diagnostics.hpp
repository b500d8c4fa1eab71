#pragma once

// Numerical diagnostics for the reduced joining system T*':
// Weyl sums along orbits, a truncated-Fourier search for solutions of the
// cohomological equation, winding and Lipschitz measurements of the cocycles,
// the boundary increment of F_n and the constants delta_1, nu.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "heislab/base_function.hpp"
#include "heislab/errors.hpp"
#include "heislab/orbit.hpp"
#include "heislab/skew.hpp"

namespace heislab {

// ---------------------------------------------------------------- Weyl sums

using Frequency = std::array<std::int64_t, 3>;

struct WeylReport {
  Frequency k{};
  std::vector<std::pair<std::uint64_t, double>> checkpoints;  // (N, |(1/N) sum e(k . orbit_n)|)
};

// All nonzero k in Z^3 with max |k_i| <= bound, lexicographic.
inline std::vector<Frequency> frequencies_up_to(std::int64_t bound) {
  std::vector<Frequency> out;
  for (std::int64_t a = -bound; a <= bound; ++a)
    for (std::int64_t b = -bound; b <= bound; ++b)
      for (std::int64_t c = -bound; c <= bound; ++c)
        if (a != 0 || b != 0 || c != 0) out.push_back({a, b, c});
  return out;
}

inline std::vector<WeylReport> weyl_sums(const JoiningSystem& js, const TorusPoint<FixedCoords>& start,
                                         std::span<const Frequency> freqs, std::span<const std::uint64_t> checkpoints,
                                         const OrbitSegmentPlan& plan) {
  std::int64_t K = 0;
  for (const auto& k : freqs) {
    if (k[0] == 0 && k[1] == 0 && k[2] == 0) throw contract_error("weyl_sums: zero frequency");
    for (const auto v : k) K = std::max(K, std::abs(v));
  }
  const JoiningOrbit orbit(js, rho_inverse(start, js.law()));
  const auto width = freqs.size();
  const auto sums = orbit_stream(
      orbit, checkpoints, width, plan,
      [&](std::uint64_t, const NilPoint<FixedCoords>& pt, std::span<std::complex<double>> acc) {
        const auto& r = pt.rep();
        // e(j x), e(j y), e(j z) for |j| <= K by repeated products
        std::array<std::vector<std::complex<double>>, 3> pw;
        const std::array<std::complex<double>, 3> base{unit_phase(r.x.to_double()), unit_phase(r.y.to_double()),
                                                       unit_phase(r.z.frac_to_double())};
        for (int c = 0; c < 3; ++c) {
          auto& v = pw[c];
          v.assign(static_cast<std::size_t>(2 * K + 1), {1.0, 0.0});
          for (std::int64_t j = 1; j <= K; ++j) {
            v[static_cast<std::size_t>(K + j)] = v[static_cast<std::size_t>(K + j - 1)] * base[c];
            v[static_cast<std::size_t>(K - j)] = std::conj(v[static_cast<std::size_t>(K + j)]);
          }
        }
        for (std::size_t f = 0; f < width; ++f) {
          const auto& k = freqs[f];
          acc[f] += pw[0][static_cast<std::size_t>(K + k[0])] * pw[1][static_cast<std::size_t>(K + k[1])] *
                    pw[2][static_cast<std::size_t>(K + k[2])];
        }
      });
  std::vector<WeylReport> out(width);
  for (std::size_t f = 0; f < width; ++f) {
    out[f].k = freqs[f];
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
      out[f].checkpoints.emplace_back(checkpoints[c], std::abs(sums[c][f]) / static_cast<double>(checkpoints[c]));
    }
  }
  return out;
}

// ------------------------------------------------------------------ winding

struct WindingOptions {
  double lipschitz_bound = 1.0;  // of the lift along x
  int max_doublings = 24;
  double integrality_tol = 1e-6;
};

// Degree in x of a circle-valued map on T^2 at height y0, counted as the sum
// of wrapped increments over a uniform mesh of spacing <= 1/(4 Lip). The mesh
// doubles while any increment exceeds 1/4.
template <class Lift>
std::int64_t winding_in_x(Lift&& lift, double y0, const WindingOptions& opt = {}) {
  auto mesh = static_cast<std::uint64_t>(std::max(8.0, std::ceil(4.0 * opt.lipschitz_bound)));
  for (int attempt = 0; attempt <= opt.max_doublings; ++attempt, mesh *= 2) {
    detail::CompensatedSum total;
    double worst = 0.0;
    double prev = lift(0.0, y0);
    for (std::uint64_t j = 1; j <= mesh; ++j) {
      const double cur = lift(static_cast<double>(j) / static_cast<double>(mesh), y0);
      const double d = cur - prev;
      const double wrapped = d - std::nearbyint(d);
      worst = std::max(worst, std::fabs(wrapped));
      total.add(wrapped);
      prev = cur;
    }
    if (worst > 0.25) continue;
    const double w = total.value();
    const double rounded = std::nearbyint(w);
    if (std::fabs(w - rounded) > opt.integrality_tol) {
      throw numerical_error("winding_in_x: increment total " + std::to_string(w) + " is not an integer");
    }
    return static_cast<std::int64_t>(rounded);
  }
  throw numerical_error("winding_in_x: mesh refinement exhausted");
}

// ---------------------------------------------------------------- Lipschitz

// Largest finite-difference slope between neighbouring nodes of a
// (mesh+1)^2 grid on [0,1]^2, sup-norm distance. A lower bound for Lip(lift).
template <class Lift>
double lipschitz_estimate(Lift&& lift, std::size_t mesh) {
  if (mesh < 2) throw contract_error("lipschitz_estimate: mesh must be >= 2");
  const double h = 1.0 / static_cast<double>(mesh);
  std::vector<double> prev_row(mesh + 1), row(mesh + 1);
  double best = 0.0;
  for (std::size_t i = 0; i <= mesh; ++i) {
    for (std::size_t j = 0; j <= mesh; ++j) row[j] = lift(static_cast<double>(i) * h, static_cast<double>(j) * h);
    for (std::size_t j = 0; j <= mesh; ++j) {
      if (j > 0) best = std::max(best, std::fabs(row[j] - row[j - 1]));
      if (i > 0) {
        best = std::max(best, std::fabs(row[j] - prev_row[j]));
        if (j > 0) best = std::max(best, std::fabs(row[j] - prev_row[j - 1]));
        if (j < mesh) best = std::max(best, std::fabs(row[j] - prev_row[j + 1]));
      }
    }
    std::swap(prev_row, row);
  }
  return best / h;
}

// ----------------------------------------------------- boundary increment

struct BoundaryIncrement {
  double computed = 0.0;     // F_n(1, y) - F_n(0, y) from the assembled lift
  double closed_form = 0.0;  // nk(p^2-q^2)d1 - nk(p^2-q^2)beta - floor(n beta)
};

// F_n(x, y) = k H~_n(x, y) + nk(p^2-q^2)(alpha y - beta x) - floor(n beta)(x + n alpha) + floor(n alpha)(y + n beta),
// with the continuous lift H~_n normalised by H~_n(0, 0) in [0, 1).
inline double F_n_lift(const JoiningSystem& js, std::int64_t k, std::uint64_t n, double x, double y) {
  const auto kn = static_cast<std::int64_t>(n);
  const double c = static_cast<double>(js.twist);
  const double a = js.base.alpha.to_double(), b = js.base.beta.to_double();
  const double na = (js.base.alpha * kn).to_double(), nb = (js.base.beta * kn).to_double();
  const auto fna = static_cast<double>((js.base.alpha * kn).floor());
  const auto fnb = static_cast<double>((js.base.beta * kn).floor());
  const double shift = std::floor(Hn_lift(js, 0.0, 0.0, n));
  const double H = Hn_lift(js, x, y, n) - shift;
  const double dk = static_cast<double>(k), dn = static_cast<double>(n);
  return dk * H + dn * dk * c * (a * y - b * x) - fnb * (x + na) + fna * (y + nb);
}

inline BoundaryIncrement boundary_increment_Fn(const JoiningSystem& js, std::int64_t k, std::uint64_t n, double y) {
  if (!(y >= 0.0 && y < 1.0)) throw contract_error("boundary_increment_Fn: y must lie in [0,1)");
  const auto kn = static_cast<std::int64_t>(n);
  const double c = static_cast<double>(js.twist);
  const double dk = static_cast<double>(k), dn = static_cast<double>(n);
  BoundaryIncrement out;
  out.computed = F_n_lift(js, k, n, 1.0, y) - F_n_lift(js, k, n, 0.0, y);
  out.closed_form = dn * dk * c * static_cast<double>(js.base.h.d1) - dn * dk * c * js.base.beta.to_double() -
                    static_cast<double>((js.base.beta * kn).floor());
  return out;
}

// ---------------------------------------------------------- proof constants

struct ProofConstants {
  std::int64_t k = 1, p = 3, q = 2, d1 = 1;
  double alpha = 0.0, beta = 0.0, L = 0.0;
  double discriminant = 0.0;  // |k(p^2-q^2)d1 - k(p^2-q^2)beta - beta|
  double delta1 = 0.0;        // discriminant / (24 k (p^2+q^2)(L + |alpha| + |beta|))
  double nu = 0.0;            // 6 / discriminant
};

inline ProofConstants proof_constants(std::int64_t k, std::int64_t p, std::int64_t q, std::int64_t d1, double alpha,
                                      double beta, double L) {
  require_prime_pair(p, q);
  if (k < 1) throw contract_error("proof_constants: k must be >= 1");
  if (!(L >= 0.0)) throw contract_error("proof_constants: L must be nonnegative");
  const double c = static_cast<double>(p * p - q * q);
  const double s = static_cast<double>(p * p + q * q);
  const double dk = static_cast<double>(k);
  ProofConstants pc{k, p, q, d1, alpha, beta, L};
  pc.discriminant = std::fabs(dk * c * static_cast<double>(d1) - dk * c * beta - beta);
  if (pc.discriminant <= 1e-12) {
    throw contract_error("proof_constants: discriminant vanishes; beta sits on the rational resonance (beta must be irrational)");
  }
  pc.delta1 = pc.discriminant / (24.0 * dk * s * (L + std::fabs(alpha) + std::fabs(beta)));
  pc.nu = 6.0 / pc.discriminant;
  return pc;
}

// -------------------------------------------------------- coboundary search

struct CoboundaryResult {
  double residual = 0.0;  // sqrt(12 * mean ||R(T0 w) - R(w) - g(w)||^2), circle distance
  std::size_t modes_solved = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> skipped_modes;  // small denominators
  std::int64_t grid = 0;
};

// Least-squares solution of R(x+alpha, y+beta) - R(x, y) = g(x, y) - (wx x + wy y)
// in Fourier modes |m|, |n| <= M, then the residual of the full equation mod 1.
// The integer-slope part wx x + wy y has no periodic solution and is left in
// the residual. A small residual is evidence for, never proof of, a solution.
template <class G>
CoboundaryResult coboundary_residual(G&& g, Fixed alpha, Fixed beta, std::int64_t M, std::int64_t wx = 0,
                                     std::int64_t wy = 0, double small_denominator = 1e-9) {
  if (M < 1) throw contract_error("coboundary_search: cutoff M must be >= 1");
  using cd = std::complex<double>;
  const std::int64_t K = 8 * (M + 1);
  const std::size_t W = static_cast<std::size_t>(2 * M + 1);
  const auto Ku = static_cast<std::size_t>(K);
  std::vector<double> nodes(Ku);
  for (std::size_t i = 0; i < Ku; ++i) nodes[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(K);

  std::vector<double> full(Ku * Ku), periodic(Ku * Ku);
  for (std::size_t i = 0; i < Ku; ++i) {
    for (std::size_t j = 0; j < Ku; ++j) {
      full[i * Ku + j] = g(nodes[i], nodes[j]);
      periodic[i * Ku + j] = full[i * Ku + j] - static_cast<double>(wx) * nodes[i] - static_cast<double>(wy) * nodes[j];
    }
  }
  // table[i][m] = e(m t_i) for m in [-M, M], t_i = nodes[i] + shift
  const auto phase_table = [&](double shift) {
    std::vector<cd> t(Ku * W);
    for (std::size_t i = 0; i < Ku; ++i)
      for (std::int64_t m = -M; m <= M; ++m) t[i * W + static_cast<std::size_t>(m + M)] = unit_phase(static_cast<double>(m) * (nodes[i] + shift));
    return t;
  };
  const auto e0 = phase_table(0.0);

  // forward transform, separable
  std::vector<cd> A(Ku * W);
  for (std::size_t i = 0; i < Ku; ++i)
    for (std::size_t n = 0; n < W; ++n) {
      cd s{};
      for (std::size_t j = 0; j < Ku; ++j) s += periodic[i * Ku + j] * std::conj(e0[j * W + n]);
      A[i * W + n] = s;
    }
  std::vector<cd> coeff(W * W);
  CoboundaryResult res;
  res.grid = K;
  const double norm = 1.0 / static_cast<double>(K * K);
  for (std::size_t m = 0; m < W; ++m)
    for (std::size_t n = 0; n < W; ++n) {
      const std::int64_t mm = static_cast<std::int64_t>(m) - M, nn = static_cast<std::int64_t>(n) - M;
      if (mm == 0 && nn == 0) continue;  // constants are not coboundaries
      cd s{};
      for (std::size_t i = 0; i < Ku; ++i) s += A[i * W + n] * std::conj(e0[i * W + m]);
      const cd denom = unit_phase((alpha * mm + beta * nn).frac().to_double()) - 1.0;
      if (std::abs(denom) < small_denominator) {
        res.skipped_modes.emplace_back(mm, nn);
        continue;
      }
      coeff[m * W + n] = s * norm / denom;
      ++res.modes_solved;
    }

  // R on a (shifted) grid, separable synthesis
  const auto synthesize = [&](double sx, double sy) {
    const auto ex = phase_table(sx), ey = phase_table(sy);
    std::vector<cd> B(Ku * W);
    for (std::size_t i = 0; i < Ku; ++i)
      for (std::size_t n = 0; n < W; ++n) {
        cd s{};
        for (std::size_t m = 0; m < W; ++m) s += coeff[m * W + n] * ex[i * W + m];
        B[i * W + n] = s;
      }
    std::vector<double> R(Ku * Ku);
    for (std::size_t i = 0; i < Ku; ++i)
      for (std::size_t j = 0; j < Ku; ++j) {
        cd s{};
        for (std::size_t n = 0; n < W; ++n) s += B[i * W + n] * ey[j * W + n];
        R[i * Ku + j] = s.real();
      }
    return R;
  };
  const auto R0 = synthesize(0.0, 0.0);
  const auto R1 = synthesize(alpha.to_double(), beta.to_double());

  detail::CompensatedSum sq;
  for (std::size_t idx = 0; idx < Ku * Ku; ++idx) {
    const double d = circle_distance(R1[idx] - R0[idx], full[idx]);
    sq.add(d * d);
  }
  res.residual = std::sqrt(12.0 * sq.value() * norm);
  return res;
}

// The equation R(T0 w) = R(w) + k H'(w) for the reduced joining system.
inline CoboundaryResult coboundary_search(const JoiningSystem& js, std::int64_t k, std::int64_t M) {
  if (k < 1) throw contract_error("coboundary_search: k must be positive");
  const auto g = [&](double x, double y) {
    return static_cast<double>(k) * cocycle_H_prime<FloatCoords>(js, x, y);
  };
  return coboundary_residual(g, js.base.alpha, js.base.beta, M, k * js.twist * js.base.h.d1,
                             k * js.twist * js.base.h.d2);
}

}  // namespace heislab
