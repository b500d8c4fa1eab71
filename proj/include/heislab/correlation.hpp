#pragma once

// Moebius correlation estimators along skew-product orbits:
//   correlation_sum     (1/N) sum_{n<=N} F(T^n x0) mu(n)
//   bilinear_sum        (1/N) sum_{n<=N} F(T^{pn} x0) conj F(T^{qn} x0)
//   davenport_baseline  (1/N) sum_{n<=N} mu(n) e(n alpha)

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "heislab/errors.hpp"
#include "heislab/mobius.hpp"
#include "heislab/observables.hpp"
#include "heislab/orbit.hpp"
#include "heislab/skew.hpp"

namespace heislab {

struct CorrelationCheckpoint {
  std::uint64_t N = 0;
  std::complex<double> value;
  double modulus = 0.0;
};

struct CorrelationReport {
  std::vector<CorrelationCheckpoint> checkpoints;
  std::map<std::string, std::string> metadata;
};

enum class OrbitWeight { mobius, ones };

namespace detail {

inline CorrelationReport make_report(std::span<const std::uint64_t> checkpoints, const std::vector<Accumulator>& sums,
                                     std::size_t slot = 0) {
  CorrelationReport r;
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    const auto v = sums[k][slot] / static_cast<double>(checkpoints[k]);
    r.checkpoints.push_back({checkpoints[k], v, std::abs(v)});
  }
  return r;
}

inline std::string describe(const SkewSystem& sys) {
  return "alpha=" + sys.alpha.to_dyadic_string() + " beta=" + sys.beta.to_dyadic_string() +
         " d1=" + std::to_string(sys.h.d1) + " d2=" + std::to_string(sys.h.d2) +
         " terms=" + std::to_string(sys.h.terms.size()) + (sys.h.table ? " +table" : "");
}

inline std::string describe(const Observable& obs) {
  if (obs.kind == Observable::Kind::base_mode) return "base_mode(" + std::to_string(obs.k1) + "," + std::to_string(obs.k2) + ")";
  return "vertical(xi=" + std::to_string(obs.xi) + ")";
}

inline std::string describe(const NilPoint<FixedCoords>& pt) {
  const auto& r = pt.rep();
  return "(" + r.x.to_dyadic_string() + ", " + r.y.to_dyadic_string() + ", " + std::to_string(r.z.to_double()) + ")";
}

inline void require_sieve(const MobiusTable& mu, std::span<const std::uint64_t> checkpoints) {
  if (checkpoints.empty()) throw contract_error("no checkpoints given");
  if (checkpoints.back() > mu.bound()) {
    throw contract_error("checkpoint " + std::to_string(checkpoints.back()) + " exceeds sieve bound " +
                         std::to_string(mu.bound()));
  }
}

}  // namespace detail

inline CorrelationReport correlation_sum(const SkewSystem& sys, const Observable& obs,
                                         const NilPoint<FixedCoords>& start, const MobiusTable* mu,
                                         std::span<const std::uint64_t> checkpoints, const OrbitSegmentPlan& plan,
                                         OrbitWeight weight = OrbitWeight::mobius) {
  obs.validate();
  if (weight == OrbitWeight::mobius) {
    if (mu == nullptr) throw contract_error("correlation_sum: Moebius table required");
    detail::require_sieve(*mu, checkpoints);
  }
  const SkewOrbit orbit(sys, start);
  const auto sums = orbit_stream(orbit, checkpoints, 1, plan,
                                 [&](std::uint64_t n, const NilPoint<FixedCoords>& pt, std::span<std::complex<double>> acc) {
                                   const int w = weight == OrbitWeight::mobius ? (*mu)(n) : 1;
                                   if (w != 0) acc[0] += static_cast<double>(w) * eval_observable(obs, pt);
                                 });
  auto report = detail::make_report(checkpoints, sums);
  report.metadata = {{"quantity", weight == OrbitWeight::mobius ? "mobius_correlation" : "birkhoff_average"},
                     {"system", detail::describe(sys)},
                     {"observable", detail::describe(obs)},
                     {"start", detail::describe(start)},
                     {"segment_size", std::to_string(plan.segment_size)}};
  return report;
}

// Direct route: the pair orbit (T^{pn} x0, T^{qn} x0) on X x X.
inline CorrelationReport bilinear_sum(const SkewSystem& sys, const Observable& obs, const NilPoint<FixedCoords>& start,
                                      std::int64_t p, std::int64_t q, std::span<const std::uint64_t> checkpoints,
                                      const OrbitSegmentPlan& plan) {
  require_prime_pair(p, q);
  obs.validate();
  const PairOrbit orbit(sys, start, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(q));
  const auto sums = orbit_stream(orbit, checkpoints, 1, plan,
                                 [&](std::uint64_t, const PairOrbit::Point& pts, std::span<std::complex<double>> acc) {
                                   acc[0] += eval_observable(obs, pts.first) * std::conj(eval_observable(obs, pts.second));
                                 });
  auto report = detail::make_report(checkpoints, sums);
  report.metadata = {{"quantity", "bilinear_direct"},
                     {"system", detail::describe(sys)},
                     {"observable", detail::describe(obs)},
                     {"start", detail::describe(start)},
                     {"p", std::to_string(p)},
                     {"q", std::to_string(q)},
                     {"segment_size", std::to_string(plan.segment_size)}};
  return report;
}

// Reduced route: (1/N) sum f*(T*^n x0*) with x0* = rho(pi(x0, x0)).
inline CorrelationReport bilinear_sum_reduced(const SkewSystem& sys, const Observable& obs,
                                              const NilPoint<FixedCoords>& start, std::int64_t p, std::int64_t q,
                                              std::span<const std::uint64_t> checkpoints, const OrbitSegmentPlan& plan) {
  const JoiningSystem js = build_joining(sys, p, q);
  const JoiningObservable jobs(obs, p, q);
  obs.validate();
  const auto lifted = lift_to_joining_group(JoiningPair<FixedCoords>{start.rep(), start.rep(), p, q});
  const auto star_start = canonical_rep(project_pi(lifted));
  const JoiningOrbit orbit(js, star_start);
  const auto sums = orbit_stream(orbit, checkpoints, 1, plan,
                                 [&](std::uint64_t, const NilPoint<FixedCoords>& pt, std::span<std::complex<double>> acc) {
                                   acc[0] += eval_joining_observable(jobs, rho(pt));
                                 });
  auto report = detail::make_report(checkpoints, sums);
  report.metadata = {{"quantity", "bilinear_reduced"},
                     {"system", detail::describe(sys)},
                     {"observable", detail::describe(obs)},
                     {"start", detail::describe(start)},
                     {"p", std::to_string(p)},
                     {"q", std::to_string(q)},
                     {"twist", std::to_string(js.twist)},
                     {"segment_size", std::to_string(plan.segment_size)}};
  return report;
}

inline CorrelationReport davenport_baseline(const MobiusTable& mu, Fixed alpha,
                                            std::span<const std::uint64_t> checkpoints) {
  detail::require_sieve(mu, checkpoints);
  CorrelationReport report;
  std::complex<double> acc{};
  std::uint64_t n = 0;
  for (const std::uint64_t N : checkpoints) {
    if (N <= n) throw contract_error("davenport_baseline: checkpoints must be increasing");
    for (++n; n <= N; ++n) {
      const int m = mu(n);
      if (m != 0) acc += static_cast<double>(m) * unit_phase((alpha * static_cast<std::int64_t>(n)).frac().to_double());
    }
    n = N;
    const auto v = acc / static_cast<double>(N);
    report.checkpoints.push_back({N, v, std::abs(v)});
  }
  report.metadata = {{"quantity", "davenport_baseline"}, {"alpha", alpha.to_dyadic_string()}};
  return report;
}

}  // namespace heislab
