#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "support.hpp"

using namespace heislab;
using heislab::testing::Gen;

namespace {

using Dec = boost::multiprecision::cpp_dec_float_50;

JoiningSystem standard_joining(std::int64_t p = 3, std::int64_t q = 2) {
  return build_joining(heislab::testing::standard_system(), p, q);
}

SkewSystem with_h(BaseFunctionSpec h) {
  auto sys = heislab::testing::standard_system();
  sys.h = std::move(h);
  return sys;
}

}  // namespace

TEST(Weyl, FirstCoordinateFrequencyObeysGeometricBound) {
  const auto js = standard_joining();
  const std::array<Frequency, 2> freqs{Frequency{1, 0, 0}, Frequency{0, -1, 0}};
  const std::array<std::uint64_t, 4> cps{10, 100, 1000, 100000};
  const auto reports = weyl_sums(js, TorusPoint<FixedCoords>{}, freqs, cps, {});
  const double theta[2] = {js.base.alpha.to_double(), js.base.beta.to_double()};
  for (std::size_t f = 0; f < 2; ++f) {
    for (const auto& [N, v] : reports[f].checkpoints) {
      const double bound = 1.0 / (2.0 * static_cast<double>(N) * circle_distance(theta[f], 0.0));
      EXPECT_LE(v, bound + 1e-12) << N;
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Weyl, TrivialSystemHasUnitSums) {
  const auto js = build_joining(SkewSystem{Fixed{}, Fixed{}, BaseFunctionSpec::zero()}, 3, 2);
  const auto freqs = frequencies_up_to(1);
  EXPECT_EQ(freqs.size(), 26u);
  const std::array<std::uint64_t, 2> cps{10, 1000};
  const TorusPoint<FixedCoords> fixed_point{Fixed{}, Fixed{}, Fiber{}};
  for (const auto& r : weyl_sums(js, fixed_point, freqs, cps, {})) {
    for (const auto& [N, v] : r.checkpoints) EXPECT_NEAR(v, 1.0, 1e-12);
  }
  const std::array<Frequency, 1> zero{Frequency{0, 0, 0}};
  EXPECT_THROW(weyl_sums(js, fixed_point, zero, cps, {}), contract_error);
}

TEST(Weyl, MatchesDirectTrivializedOrbit) {
  const auto js = standard_joining(5, 3);
  const std::array<Frequency, 3> freqs{Frequency{1, 2, 1}, Frequency{0, 0, 1}, Frequency{-2, 1, 2}};
  const std::array<std::uint64_t, 2> cps{100, 777};
  const TorusPoint<FixedCoords> start{heislab::testing::fx(0.25), heislab::testing::fx(0.5), Fiber::from_double(0.125)};
  const auto reports = weyl_sums(js, start, freqs, cps, {64, 2});
  auto pt = start;
  std::array<std::complex<double>, 3> acc{};
  for (std::uint64_t n = 1; n <= 777; ++n) {
    pt = step_Tstar_trivialized(js, pt);
    for (std::size_t f = 0; f < 3; ++f) {
      const auto& k = freqs[f];
      acc[f] += unit_phase(k[0] * pt.x.to_double() + k[1] * pt.y.to_double() + k[2] * pt.z.to_double());
    }
    if (n == 100 || n == 777) {
      for (std::size_t f = 0; f < 3; ++f) {
        EXPECT_NEAR(reports[f].checkpoints[n == 100 ? 0 : 1].second, std::abs(acc[f]) / static_cast<double>(n), 1e-9);
      }
    }
  }
}

TEST(Winding, Examples) {
  BaseFunctionSpec lin;
  lin.d1 = 1;
  const auto js = build_joining(with_h(lin), 3, 2);
  EXPECT_EQ(winding_in_x([&](double x, double y) { return eval_H_lift(js, x, y); }, 0.4, {5.0}), 5);

  Gen gen(91);
  auto flat = gen.base_function(2);
  flat.d1 = 0;
  const auto js0 = build_joining(with_h(flat), 5, 2);
  for (std::uint64_t n : {1u, 4u, 9u}) {
    const double bound = static_cast<double>(n) * 29 * flat.lipschitz();
    EXPECT_EQ(winding_in_x([&](double x, double y) { return Hn_lift(js0, x, y, n); }, 0.7, {bound}), 0);
  }

  BaseFunctionSpec two;
  two.d1 = 2;
  two.terms.push_back({1, 2, 0.15, 0.3});
  const auto js2 = build_joining(with_h(two), 5, 3);
  const double bound = 7.0 * 34 * two.lipschitz();
  EXPECT_EQ(winding_in_x([&](double x, double y) { return Hn_lift(js2, x, y, 7); }, 0.21, {bound}), 224);
}

TEST(Winding, RefinesCoarseMeshAndRejectsFractionalDegree) {
  // stated Lipschitz bound far too small: the mesh must refine on its own
  const auto steep = [](double x, double) { return 3.0 * x + 0.02 * std::sin(2 * M_PI * x); };
  EXPECT_EQ(winding_in_x(steep, 0.0, {0.1}), 3);
  const auto fractional = [](double x, double) { return 2.5 * x; };
  EXPECT_THROW(winding_in_x(fractional, 0.0, {3.0}), numerical_error);
}

TEST(Winding, MultipleOfSingleStepWinding) {
  Gen gen(92);
  for (int i = 0; i < 5; ++i) {
    auto h = gen.base_function(2);
    const auto js = build_joining(with_h(h), 7, 3);
    const double L = h.lipschitz();
    const auto w1 = winding_in_x([&](double x, double y) { return Hn_lift(js, x, y, 1); }, 0.5, {58 * L});
    for (std::uint64_t n : {2u, 5u, 11u}) {
      const auto wn = winding_in_x([&](double x, double y) { return Hn_lift(js, x, y, n); }, 0.5, {58 * L * n});
      EXPECT_EQ(wn, static_cast<std::int64_t>(n) * w1);
    }
  }
}

TEST(Lipschitz, Examples) {
  const double alpha = heislab::testing::standard_system().alpha.to_double();
  EXPECT_NEAR(lipschitz_estimate([&](double x, double) { return 5 * x + 2 * alpha; }, 50), 5.0, 1e-9);
  EXPECT_EQ(lipschitz_estimate([](double, double) { return 0.7; }, 10), 0.0);
  const auto js = standard_joining();
  const double L = js.base.h.lipschitz();
  EXPECT_LE(lipschitz_estimate([&](double x, double y) { return Hn_lift(js, x, y, 20); }, 200), 20 * 13 * L * (1 + 1e-6));
  EXPECT_THROW(lipschitz_estimate([](double, double) { return 0.0; }, 1), contract_error);
}

TEST(BoundaryIncrement, Examples) {
  const auto js = standard_joining();
  const auto inc = boundary_increment_Fn(js, 1, 10, 0.3);
  EXPECT_NEAR(inc.closed_form, 50 - 50 * js.base.beta.to_double() - 7, 1e-12);
  EXPECT_NEAR(inc.closed_form, 6.3975, 1e-4);
  EXPECT_NEAR(inc.computed, inc.closed_form, 1e-6);

  const auto trivial = build_joining(SkewSystem{Fixed{}, Fixed{}, BaseFunctionSpec::zero()}, 3, 2);
  EXPECT_EQ(boundary_increment_Fn(trivial, 1, 5, 0.5).computed, 0.0);
  EXPECT_EQ(boundary_increment_Fn(trivial, 1, 5, 0.5).closed_form, 0.0);

  Gen gen(93);
  for (int i = 0; i < 10; ++i) {
    const double y = gen.real(0, 1);
    EXPECT_NEAR(boundary_increment_Fn(js, 1, 10, y).computed, inc.computed, 1e-6);
  }
  EXPECT_THROW(boundary_increment_Fn(js, 1, 10, 1.0), contract_error);
}

TEST(ProofConstants, StandardExample) {
  const auto sys = heislab::testing::standard_system();
  const double a = sys.alpha.to_double(), b = sys.beta.to_double();
  const auto pc = proof_constants(1, 3, 2, 1, a, b, 1.0);
  EXPECT_NEAR(pc.discriminant, 0.607695, 1e-6);
  EXPECT_NEAR(pc.delta1, 9.075e-4, 1e-7);
  EXPECT_NEAR(pc.nu, 9.873, 1e-3);

  // 50-digit recomputation
  const Dec disc = abs(Dec(5) - Dec(5) * Dec(b) - Dec(b));
  const Dec delta = disc / (Dec(24) * Dec(13) * (Dec(1) + Dec(a) + Dec(b)));
  const Dec nu = Dec(6) / disc;
  EXPECT_NEAR(pc.discriminant, disc.convert_to<double>(), 1e-12 * pc.discriminant);
  EXPECT_NEAR(pc.delta1, delta.convert_to<double>(), 1e-12 * pc.delta1);
  EXPECT_NEAR(pc.nu, nu.convert_to<double>(), 1e-12 * pc.nu);

  const auto k2 = proof_constants(2, 3, 2, 1, a, b, 1.0);
  EXPECT_NEAR(k2.discriminant, std::fabs(10 - 10 * b - b), 1e-14);
  EXPECT_GT(k2.delta1, 0.0);
  EXPECT_TRUE(std::isfinite(k2.nu));
}

TEST(ProofConstants, RationalResonanceIsRejected) {
  // k c d1 = (k c + 1) beta with beta = 5/6
  EXPECT_THROW(proof_constants(1, 3, 2, 1, 0.4, 5.0 / 6.0, 1.0), contract_error);
  EXPECT_THROW(proof_constants(0, 3, 2, 1, 0.4, 0.7, 1.0), contract_error);
  EXPECT_THROW(proof_constants(1, 2, 3, 1, 0.4, 0.7, 1.0), contract_error);
}

TEST(Coboundary, ZeroCocycleHasZeroResidual) {
  const auto res = coboundary_residual([](double, double) { return 0.0; }, heislab::testing::standard_system().alpha,
                                       heislab::testing::standard_system().beta, 8);
  EXPECT_EQ(res.residual, 0.0);
  const auto js = build_joining(SkewSystem{heislab::testing::standard_system().alpha, heislab::testing::standard_system().beta,
                                           BaseFunctionSpec::zero()},
                                3, 2);
  // with h = 0 only the twist terms of H' remain
  EXPECT_GE(coboundary_search(js, 1, 4).residual, 0.0);
  EXPECT_THROW(coboundary_residual([](double, double) { return 0.0; }, Fixed{}, Fixed{}, 0), contract_error);
}

TEST(Coboundary, RecoversSynthesizedCoboundary) {
  const auto sys = heislab::testing::standard_system();
  const double a = sys.alpha.to_double(), b = sys.beta.to_double();
  const auto R = [](double x, double y) {
    return 0.3 * std::cos(2 * M_PI * (x - 2 * y)) + 0.1 * std::sin(2 * M_PI * (3 * x + y) + 0.4) + 0.05 * std::cos(2 * M_PI * 5 * y);
  };
  const auto g = [&](double x, double y) { return R(x + a, y + b) - R(x, y); };
  const auto res = coboundary_residual(g, sys.alpha, sys.beta, 16);
  EXPECT_LE(res.residual, 1e-6);
  EXPECT_TRUE(res.skipped_modes.empty());
  // with a resonant rotation the offending modes are skipped and reported
  const auto resonant = coboundary_residual(g, heislab::testing::fx(0.5), heislab::testing::fx(0.25), 4);
  EXPECT_FALSE(resonant.skipped_modes.empty());
}

TEST(Coboundary, StandardJoiningCocycleIsFarFromCoboundary) {
  const auto res = coboundary_search(standard_joining(), 1, 16);
  EXPECT_GE(res.residual, 0.1);
  EXPECT_EQ(res.grid, 8 * 17);
}
