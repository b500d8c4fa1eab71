#pragma once

// Deterministic segmented orbit engine.
//
// A skew-product orbit is determined by the running cocycle sum S_n along the
// base rotation. The engine splits [0, N] into fixed-size segments:
//   pass 1  each segment's cocycle total, independently;
//   scan    exclusive prefix over segment totals, in segment order;
//   pass 2  each segment replays its points from its offset and feeds a sink.
// Sink contributions are summed inside a segment in index order and segments
// are combined in index order, so the output does not depend on worker_count.

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdint>
#include <span>
#include <thread>
#include <utility>
#include <vector>

#include "heislab/errors.hpp"
#include "heislab/joining.hpp"
#include "heislab/skew.hpp"

namespace heislab {

struct OrbitSegmentPlan {
  std::uint64_t segment_size = std::uint64_t{1} << 16;
  unsigned worker_count = 1;

  void validate() const {
    if (segment_size == 0 || (segment_size & (segment_size - 1)) != 0) {
      throw contract_error("OrbitSegmentPlan: segment_size must be a power of two");
    }
    if (worker_count == 0) throw contract_error("OrbitSegmentPlan: worker_count must be positive");
  }

  friend bool operator==(const OrbitSegmentPlan&, const OrbitSegmentPlan&) = default;
};

// T^power on X started at `start`: increments are h_power at the base points.
class SkewOrbit {
 public:
  using Sum = Fiber;
  using Point = NilPoint<FixedCoords>;

  SkewOrbit(SkewSystem sys, Point start, std::uint64_t power = 1)
      : sys_(std::move(sys)), start_(start), power_(power) {
    if (start_.law() != GroupLaw::heisenberg()) throw contract_error("SkewOrbit: start must live on X");
    if (power_ == 0) throw contract_error("SkewOrbit: power must be positive");
  }

  Sum increment(std::uint64_t i) const {
    const auto k = static_cast<std::int64_t>(i * power_);
    const Fixed u = (start_.rep().x + sys_.alpha * k).frac();
    const Fixed v = (start_.rep().y + sys_.beta * k).frac();
    return cocycle_sum(sys_.h, u, v, power_, sys_.alpha, sys_.beta);
  }

  Point point(std::uint64_t n, const Sum& s) const {
    if (n == 0) return start_;
    return translate(rotation_element<FixedCoords>(sys_, n * power_, s, start_.law()), start_);
  }

 private:
  SkewSystem sys_;
  Point start_;
  std::uint64_t power_;
};

// T* on X*, in rho coordinates (canonical representatives under the star law).
class JoiningOrbit {
 public:
  using Sum = Fiber;
  using Point = NilPoint<FixedCoords>;

  JoiningOrbit(JoiningSystem js, Point start) : js_(std::move(js)), start_(start) {
    if (start_.law() != js_.law()) throw contract_error("JoiningOrbit: start must live on X*");
  }

  Sum increment(std::uint64_t i) const {
    const auto k = static_cast<std::int64_t>(i);
    const Fixed u = (start_.rep().x + js_.base.alpha * k).frac();
    const Fixed v = (start_.rep().y + js_.base.beta * k).frac();
    return eval_H_lift<FixedCoords>(js_, u, v);
  }

  Point point(std::uint64_t n, const Sum& s) const {
    if (n == 0) return start_;
    return translate(rotation_element<FixedCoords>(js_.base, n, s, start_.law()), start_);
  }

 private:
  JoiningSystem js_;
  Point start_;
};

// (T^p x T^q) on X x X.
class PairOrbit {
 public:
  struct Sum {
    Fiber first;
    Fiber second;
    friend Sum operator+(const Sum& a, const Sum& b) { return {a.first + b.first, a.second + b.second}; }
    Sum& operator+=(const Sum& o) { return *this = *this + o; }
  };
  using Point = std::pair<NilPoint<FixedCoords>, NilPoint<FixedCoords>>;

  PairOrbit(const SkewSystem& sys, NilPoint<FixedCoords> start, std::uint64_t p, std::uint64_t q)
      : first_(sys, start, p), second_(sys, start, q) {}

  Sum increment(std::uint64_t i) const { return {first_.increment(i), second_.increment(i)}; }
  Point point(std::uint64_t n, const Sum& s) const { return {first_.point(n, s.first), second_.point(n, s.second)}; }

 private:
  SkewOrbit first_;
  SkewOrbit second_;
};

using Accumulator = std::vector<std::complex<double>>;

namespace detail {

struct SegmentResult {
  // accumulator snapshots at every checkpoint falling inside the segment
  std::vector<std::pair<std::size_t, Accumulator>> snapshots;
  Accumulator total;
};

template <class F>
void run_indexed(std::size_t count, unsigned workers, F&& body) {
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t j = 0; j < count; ++j) body(j);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t j = next.fetch_add(1); j < count; j = next.fetch_add(1)) body(j);
    });
  }
}

}  // namespace detail

// Sums sink(n, T^n start, acc) over n = 1..N for every checkpoint N.
// The sink adds `width` complex values into acc. Returns one accumulator per
// checkpoint (unnormalised).
template <class Dynamics, class Sink>
std::vector<Accumulator> orbit_stream(const Dynamics& dyn, std::span<const std::uint64_t> checkpoints,
                                      std::size_t width, const OrbitSegmentPlan& plan, Sink&& sink) {
  using Sum = typename Dynamics::Sum;
  plan.validate();
  if (checkpoints.empty()) throw contract_error("orbit_stream: no checkpoints");
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    if (checkpoints[k] == 0 || (k > 0 && checkpoints[k] <= checkpoints[k - 1])) {
      throw contract_error("orbit_stream: checkpoints must be positive and strictly increasing");
    }
  }
  const std::uint64_t N = checkpoints.back();
  if (N >= (std::uint64_t{1} << 63)) throw contract_error("orbit_stream: N must be below 2^63");

  const std::uint64_t S = plan.segment_size;
  const std::size_t segments = static_cast<std::size_t>(N / S + 1);  // covers indices 0..N

  // pass 1: cocycle totals over increments i in [jS, min((j+1)S, N))
  std::vector<Sum> totals(segments);
  detail::run_indexed(segments, plan.worker_count, [&](std::size_t j) {
    const std::uint64_t lo = j * S, hi = std::min<std::uint64_t>((j + 1) * S, N);
    Sum acc{};
    for (std::uint64_t i = lo; i < hi; ++i) acc += dyn.increment(i);
    totals[j] = acc;
  });

  std::vector<Sum> offsets(segments);
  for (std::size_t j = 1; j < segments; ++j) offsets[j] = offsets[j - 1] + totals[j - 1];

  // pass 2
  std::vector<detail::SegmentResult> results(segments);
  detail::run_indexed(segments, plan.worker_count, [&](std::size_t j) {
    const std::uint64_t lo = j * S, hi = std::min<std::uint64_t>((j + 1) * S, N + 1);
    auto& res = results[j];
    Accumulator acc(width);
    auto ck = static_cast<std::size_t>(std::lower_bound(checkpoints.begin(), checkpoints.end(), lo) - checkpoints.begin());
    Sum s = offsets[j];
    for (std::uint64_t n = lo; n < hi; ++n) {
      if (n >= 1) {
        sink(n, dyn.point(n, s), std::span<std::complex<double>>(acc));
        if (ck < checkpoints.size() && checkpoints[ck] == n) res.snapshots.emplace_back(ck++, acc);
      }
      if (n < N) s += dyn.increment(n);
    }
    res.total = std::move(acc);
  });

  std::vector<Accumulator> out(checkpoints.size(), Accumulator(width));
  Accumulator before(width);  // sum of all earlier segment totals
  bool first = true;
  for (const auto& res : results) {
    for (const auto& [k, snap] : res.snapshots) {
      for (std::size_t w = 0; w < width; ++w) out[k][w] = first ? snap[w] : before[w] + snap[w];
    }
    for (std::size_t w = 0; w < width; ++w) before[w] = first ? res.total[w] : before[w] + res.total[w];
    first = false;
  }
  return out;
}

}  // namespace heislab
