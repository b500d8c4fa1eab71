#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace heislab;
using heislab::testing::elem;
using heislab::testing::Gen;

namespace {

const std::complex<double> kI{0.0, 1.0};

}  // namespace

TEST(Observable, Examples) {
  const auto obs = Observable::vertical(1);
  const auto pt = canonical_rep(elem(0.5, 0.5, 0.25));
  EXPECT_LE(std::abs(eval_observable(obs, pt) - kI), 1e-15);
  const auto shifted = canonical_rep(translate(elem(0, 0, 0.5), pt).rep());
  EXPECT_LE(std::abs(eval_observable(obs, shifted) + kI), 1e-15);
  EXPECT_EQ(eval_observable(obs, canonical_rep(elem(0.1, 0.5, 0.3))), std::complex<double>(0.0, 0.0));
  EXPECT_EQ(eval_observable(obs, canonical_rep(elem(0.5, 0.9, 0.3))), std::complex<double>(0.0, 0.0));
  EXPECT_THROW(Observable::vertical(1, Bump{0.5, 0.5, 0.5, 1.0}).validate(), malformed_input);
}

TEST(Observable, BumpProfileAndBound) {
  const Bump b;
  EXPECT_EQ(b(0.5, 0.5), 1.0);
  EXPECT_EQ(Bump::profile(1.0), 0.0);
  EXPECT_EQ(Bump::profile(0.0), 1.0);
  EXPECT_DOUBLE_EQ(Bump::profile(0.5), 0.5);
  Gen gen(71);
  for (int i = 0; i < 2000; ++i) {
    const double x = gen.real(0, 1), y = gen.real(0, 1), dx = gen.real(-1e-3, 1e-3), dy = gen.real(-1e-3, 1e-3);
    EXPECT_LE(std::fabs(b(x + dx, y + dy) - b(x, y)), b.lipschitz() * std::max(std::fabs(dx), std::fabs(dy)) + 1e-15);
  }
}

TEST(Observable, VerticalEquivarianceAndBound) {
  Gen gen(72);
  for (const std::int64_t xi : {1, 2, -3, 7}) {
    const auto obs = Observable::vertical(xi, Bump{0.45, 0.55, 0.3, 0.8});
    for (int i = 0; i < 2000; ++i) {
      const auto pt = canonical_rep(gen.element(GroupLaw::heisenberg(), 3));
      const Fiber s = gen.fiber(-2, 2);
      const auto moved = canonical_rep(translate(GroupElement<FixedCoords>{Fixed{}, Fixed{}, s, GroupLaw::heisenberg()}, pt).rep());
      const auto expect = unit_phase((s * xi).frac_to_double()) * eval_observable(obs, pt);
      EXPECT_LE(std::abs(eval_observable(obs, moved) - expect), 1e-12);
      EXPECT_LE(std::abs(eval_observable(obs, pt)), obs.sup_norm() * (1 + 1e-12));
    }
  }
}

TEST(Observable, ContinuousAcrossTheGluing) {
  // F is well defined on X: evaluating different representatives of the same
  // coset, and points straddling the fundamental-domain faces, never jumps.
  const auto obs = Observable::vertical(2);
  Gen gen(73);
  const double eps = 1e-7;
  for (int i = 0; i < 2000; ++i) {
    const double y = gen.real(0, 1), z = gen.real(0, 1);
    const auto below = canonical_rep(heislab::testing::elem(-eps, y, z));
    const auto above = canonical_rep(heislab::testing::elem(eps, y, z));
    EXPECT_LE(std::abs(eval_observable(obs, below) - eval_observable(obs, above)), obs.bump.lipschitz() * 2 * eps + 1e-12);
    const auto left = canonical_rep(heislab::testing::elem(y, -eps, z));
    const auto right = canonical_rep(heislab::testing::elem(y, eps, z));
    EXPECT_LE(std::abs(eval_observable(obs, left) - eval_observable(obs, right)), obs.bump.lipschitz() * 2 * eps + 1e-12);
  }
}

TEST(FiberAverage, Orthogonality) {
  Gen gen(74);
  for (int i = 0; i < 200; ++i) {
    const Fixed x = gen.unit_fixed(), y = gen.unit_fixed();
    EXPECT_LE(std::abs(fiber_average(Observable::vertical(1), x, y, 16)), 1e-12);
    EXPECT_LE(std::abs(fiber_average(Observable::vertical(2), x, y, 8)), 1e-12);
    for (const std::int64_t xi : {1, 2, 3}) EXPECT_LE(std::abs(fiber_average(Observable::vertical(xi), x, y, 32)), 1e-10);
    EXPECT_LE(std::abs(fiber_average<FloatCoords>(Observable::vertical(3), x.to_double(), y.to_double(), 32)), 1e-10);
  }
  EXPECT_EQ(fiber_average(Observable::constant(), heislab::testing::fx(0.3), heislab::testing::fx(0.6), 4),
            std::complex<double>(1.0, 0.0));
  EXPECT_THROW(fiber_average(Observable::vertical(3), Fixed{}, Fixed{}, 7), contract_error);
}

TEST(JoiningObservable, Examples) {
  const auto obs = Observable::vertical(1, Bump{0.5, 0.5, 0.45, 1.0});
  const JoiningObservable jobs(obs, 3, 2);
  const auto x0 = canonical_rep(elem(0.4, 0.6, 0.3));
  EXPECT_NEAR(std::abs(eval_pair_observable(jobs, x0, x0) - std::norm(eval_observable(obs, x0))), 0.0, 1e-15);
  Gen gen(75);
  for (int i = 0; i < 500; ++i) {
    const auto a = gen.element(GroupLaw::heisenberg(), 2), b = gen.element(GroupLaw::heisenberg(), 2);
    const GroupElement<FixedCoords> shift{Fixed{}, Fixed{}, gen.fiber(-1, 1), GroupLaw::heisenberg()};
    const auto before = eval_pair_observable(jobs, canonical_rep(a), canonical_rep(b));
    const auto after = eval_pair_observable(jobs, canonical_rep(mul(shift, a)), canonical_rep(mul(shift, b)));
    EXPECT_LE(std::abs(before - after), 1e-12);
  }
  EXPECT_THROW(JoiningObservable(Observable::constant(), 3, 2), contract_error);
  EXPECT_THROW(JoiningObservable(obs, 2, 3), contract_error);
}

TEST(JoiningObservable, DescentAgreesOnOrbitPoints) {
  const auto sys = heislab::testing::standard_system();
  for (const auto& [p, q] : {std::pair{3, 2}, {7, 5}}) {
    const JoiningObservable jobs(Observable::vertical(1), p, q);
    auto first = NilPoint<FixedCoords>::identity(), second = first;
    for (int n = 1; n <= 300; ++n) {
      first = iterate_T(sys, first, static_cast<std::uint64_t>(p));
      second = iterate_T(sys, second, static_cast<std::uint64_t>(q));
      const auto star = canonical_rep(project_pi(lift_to_joining_group(JoiningPair<FixedCoords>{first.rep(), second.rep(), p, q})));
      EXPECT_LE(std::abs(eval_pair_observable(jobs, first, second) - eval_joining_observable(jobs, rho(star))), 1e-9);
    }
  }
}

TEST(JoiningObservable, ZeroMeanOnTheJoiningNilmanifold) {
  const JoiningObservable jobs(Observable::vertical(1), 3, 2);
  std::mt19937_64 rng(76);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int samples = 200000;
  std::complex<double> sum{};
  double sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto v = eval_joining_observable(jobs, TorusPoint<FloatCoords>{u(rng), u(rng), u(rng)});
    sum += v;
    sq += std::norm(v);
  }
  const auto mean = sum / static_cast<double>(samples);
  const double se = std::sqrt((sq / samples - std::norm(mean)) / samples);
  EXPECT_LE(std::abs(mean), 3 * se);
}
