#pragma once

// Self-check suites run by `heislab verify`. Each suite draws its own seeded
// random instances and compares the library against an independent route.

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "heislab/correlation.hpp"
#include "heislab/diagnostics.hpp"
#include "heislab/group.hpp"
#include "heislab/joining.hpp"
#include "heislab/mobius.hpp"
#include "heislab/observables.hpp"
#include "heislab/orbit.hpp"
#include "heislab/skew.hpp"

namespace heislab {

enum class FaultInjection { none, twist };

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::uint64_t checks = 0;
  std::string detail;  // first failure
};

namespace detail {

class SuiteRng {
 public:
  explicit SuiteRng(std::uint64_t seed) : rng_(seed) {}
  std::int64_t integer(std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  Fixed fixed(std::int64_t span) {
    return Fixed::from_raw((static_cast<i128>(integer(-span, span)) << 64) + static_cast<i128>(rng_()));
  }
  Fiber fiber(std::int64_t span) { return {integer(-span, span), (static_cast<u128>(rng_()) << 64) | rng_()}; }
  GroupElement<FixedCoords> element(GroupLaw law, std::int64_t span = 6) {
    return {fixed(span), fixed(span), fiber(span), law};
  }
  SkewSystem system() {
    BaseFunctionSpec h;
    h.d1 = integer(-2, 2);
    h.d2 = integer(-2, 2);
    for (std::int64_t i = integer(0, 2); i > 0; --i) h.terms.push_back({integer(-2, 2), integer(-2, 2), real(-0.3, 0.3), real(0, 6.28)});
    return {fixed(0), fixed(0), h};
  }

 private:
  std::mt19937_64 rng_;
};

class Checker {
 public:
  explicit Checker(std::string name) { res_.name = std::move(name); }
  void expect(bool ok, const std::string& what) {
    ++res_.checks;
    if (!ok && res_.passed) {
      res_.passed = false;
      res_.detail = what;
    }
  }
  bool failed() const { return !res_.passed; }
  SuiteResult result() const { return res_; }

 private:
  SuiteResult res_;
};

inline SkewSystem standard_verify_system() {
  BaseFunctionSpec h;
  h.d1 = 1;
  h.terms.push_back({1, 1, 0.1, 0.0});
  return {Fixed::parse("0.41421356237309504880168872420969807857"), Fixed::parse("0.73205080756887729352744634150587236694"), h};
}

// mu by trial division
inline int trial_division_mu(std::uint64_t n) {
  int sign = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    n /= d;
    if (n % d == 0) return 0;
    sign = -sign;
  }
  return n > 1 ? -sign : sign;
}

}  // namespace detail

inline SuiteResult verify_group_laws(FaultInjection fault = FaultInjection::none) {
  detail::Checker chk("group-laws");
  detail::SuiteRng rng(101);
  for (const GroupLaw law : {GroupLaw::heisenberg(), GroupLaw::star(5), GroupLaw::star(24)}) {
    // the faulty route multiplies the inner pair under a perturbed twist
    const auto inner = [&](const GroupElement<FixedCoords>& b, const GroupElement<FixedCoords>& c) {
      if (fault != FaultInjection::twist) return mul(b, c);
      const GroupLaw wrong = GroupLaw::star(law.twist + 1);
      auto bc = mul(GroupElement<FixedCoords>{b.x, b.y, b.z, wrong}, GroupElement<FixedCoords>{c.x, c.y, c.z, wrong});
      bc.law = law;
      return bc;
    };
    for (int i = 0; i < 20000 && !chk.failed(); ++i) {
      const auto a = rng.element(law), b = rng.element(law), c = rng.element(law);
      chk.expect(mul(mul(a, b), c) == mul(a, inner(b, c)), "associativity under " + law.name());
      chk.expect(mul(a, inv(a)) == GroupElement<FixedCoords>::identity(law), "inverse under " + law.name());
      const auto m = LatticeElement{0, 0, rng.integer(-9, 9)}.embed<FixedCoords>(law);
      chk.expect(mul(m, a) == mul(a, m), "centrality under " + law.name());
      const auto g1 = LatticeElement{rng.integer(-9, 9), rng.integer(-9, 9), rng.integer(-9, 9)}.embed<FixedCoords>(law);
      const auto g2 = LatticeElement{rng.integer(-9, 9), rng.integer(-9, 9), rng.integer(-9, 9)}.embed<FixedCoords>(law);
      const auto g = mul(g1, g2);
      chk.expect(g.x.frac() == Fixed{} && g.y.frac() == Fixed{} && g.z.frac() == Fiber{}, "lattice closure under " + law.name());
    }
  }
  return chk.result();
}

inline SuiteResult verify_reduction() {
  detail::Checker chk("reduction");
  detail::SuiteRng rng(102);
  const GroupLaw star5 = GroupLaw::star(5);
  const auto e = [](double x, double y, double z, GroupLaw law) {
    return GroupElement<FixedCoords>{Fixed::from_double(x), Fixed::from_double(y), Fiber::from_double(z), law};
  };
  chk.expect(lattice_floor(e(1.5, 0.5, 0.25, star5)) == LatticeElement{1, 0, 2}, "lattice_floor example (star)");
  chk.expect(lattice_floor(e(1.5, 0.5, 0.25, GroupLaw::heisenberg())) == LatticeElement{1, 0, 0}, "lattice_floor example");
  chk.expect(canonical_rep(e(1.5, 0.5, 0.25, star5)).rep() == e(0.5, 0.5, 0.75, star5), "canonical_rep example");
  for (const GroupLaw law : {GroupLaw::heisenberg(), star5, GroupLaw::star(-3)}) {
    for (int i = 0; i < 20000 && !chk.failed(); ++i) {
      const auto g = rng.element(law);
      const auto gamma = LatticeElement{rng.integer(-9, 9), rng.integer(-9, 9), rng.integer(-9, 9)}.embed<FixedCoords>(law);
      const auto r = canonical_rep(g);
      chk.expect(NilPoint<FixedCoords>::in_unit_box(r.rep()), "representative in [0,1)^3");
      chk.expect(canonical_rep(mul(g, gamma)) == r, "coset invariance under " + law.name());
      chk.expect(canonical_rep(r.rep()) == r, "idempotence under " + law.name());
      const auto back = mul(inv(r.rep()), g);
      chk.expect(back.x.frac() == Fixed{} && back.y.frac() == Fixed{} && back.z.frac() == Fiber{},
                 "representative in the same coset");
    }
  }
  return chk.result();
}

inline SuiteResult verify_iterate_oracle() {
  detail::Checker chk("iterate-oracle");
  detail::SuiteRng rng(103);
  for (int t = 0; t < 20 && !chk.failed(); ++t) {
    const auto sys = rng.system();
    const auto start = canonical_rep(rng.element(GroupLaw::heisenberg(), 2));
    auto pt = start;
    for (std::uint64_t n = 1; n <= 512; ++n) {
      pt = step_T(sys, pt);
      if ((n & (n - 1)) == 0 || n % 97 == 0) chk.expect(iterate_T(sys, start, n) == pt, "closed-form iterate vs stepping");
    }
    const auto m = static_cast<std::uint64_t>(rng.integer(0, 300)), n = static_cast<std::uint64_t>(rng.integer(0, 300));
    chk.expect(iterate_T(sys, start, m + n) == iterate_T(sys, iterate_T(sys, start, m), n), "cocycle identity");
  }
  return chk.result();
}

inline SuiteResult verify_commutation() {
  detail::Checker chk("commutation");
  const auto sys = detail::standard_verify_system();
  for (const auto& [p, q] : {std::pair<std::int64_t, std::int64_t>{3, 2}, {5, 3}}) {
    const auto js = build_joining(sys, p, q);
    auto first = NilPoint<FixedCoords>::identity(), second = first;
    auto torus = rho(canonical_rep(project_pi(JoiningPair<FixedCoords>{first.rep(), second.rep(), p, q})));
    for (int n = 1; n <= 200 && !chk.failed(); ++n) {
      first = iterate_T(sys, first, static_cast<std::uint64_t>(p));
      second = iterate_T(sys, second, static_cast<std::uint64_t>(q));
      torus = step_Tstar_trivialized(js, torus);
      const JoiningPair<FixedCoords> pair{first.rep(), second.rep(), p, q};
      chk.expect(joining_membership(pair), "orbit pair stays in the joining");
      const auto image = rho(canonical_rep(project_pi(lift_to_joining_group(pair))));
      chk.expect(torus_distance(image, torus) <= 1e-9, "rho pi (T^p x T^q)^n = (T*')^n rho pi at n=" + std::to_string(n));
    }
  }
  return chk.result();
}

inline SuiteResult verify_winding() {
  detail::Checker chk("winding");
  auto sys = detail::standard_verify_system();
  for (const std::int64_t d1 : {0, 1, 2}) {
    sys.h.d1 = d1;
    for (const auto& [p, q] : {std::pair<std::int64_t, std::int64_t>{3, 2}, {5, 3}}) {
      const auto js = build_joining(sys, p, q);
      for (std::uint64_t n = 1; n <= 10 && !chk.failed(); ++n) {
        const double bound = static_cast<double>(n * static_cast<std::uint64_t>(p * p + q * q)) * sys.h.lipschitz();
        const auto w = winding_in_x([&](double x, double y) { return Hn_lift(js, x, y, n); }, 0.37, {bound});
        chk.expect(w == static_cast<std::int64_t>(n) * (p * p - q * q) * d1,
                   "degree of H_n is n(p^2-q^2)d1 (n=" + std::to_string(n) + ")");
      }
    }
  }
  return chk.result();
}

inline SuiteResult verify_sieve() {
  detail::Checker chk("sieve-oracle");
  const std::uint64_t N = 100000;
  const auto mu = sieve_mobius(N);
  std::int64_t m = 0;
  for (std::uint64_t n = 1; n <= N && !chk.failed(); ++n) {
    const int expect = detail::trial_division_mu(n);
    m += expect;
    chk.expect(mu(n) == expect, "mu(" + std::to_string(n) + ")");
  }
  const std::array<std::uint64_t, 1> last{N};
  chk.expect(mu.mertens_at(last)[0] == m, "Mertens at 1e5");
  return chk.result();
}

inline SuiteResult verify_determinism() {
  detail::Checker chk("determinism");
  const auto sys = detail::standard_verify_system();
  const auto obs = Observable::vertical(1);
  const std::array<std::uint64_t, 3> cps{1000, 50000, 200000};
  const SkewOrbit orbit(sys, NilPoint<FixedCoords>::identity());
  const auto run = [&](unsigned workers) {
    return orbit_stream(orbit, cps, 1, {std::uint64_t{1} << 12, workers},
                        [&](std::uint64_t, const NilPoint<FixedCoords>& pt, std::span<std::complex<double>> acc) {
                          acc[0] += eval_observable(obs, pt);
                        });
  };
  const auto one = run(1), many = run(4);
  for (std::size_t k = 0; k < cps.size(); ++k) {
    chk.expect(one[k][0].real() == many[k][0].real() && one[k][0].imag() == many[k][0].imag(),
               "1 vs 4 workers at N=" + std::to_string(cps[k]));
  }
  return chk.result();
}

inline std::vector<SuiteResult> run_verify_suites(FaultInjection fault = FaultInjection::none) {
  return {verify_group_laws(fault), verify_reduction(),    verify_iterate_oracle(), verify_commutation(),
          verify_winding(),         verify_sieve(),        verify_determinism()};
}

}  // namespace heislab
