// heislab: command-line front end for the skew-product laboratory.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "heislab/heislab.hpp"
#include "heislab/report.hpp"
#include "heislab/runner.hpp"

using namespace heislab;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out;
  unsigned workers = 0;
  std::string segment_size;
  std::string checkpoints;
};

std::uint64_t parse_segment_size(const std::string& s) {
  if (s.rfind("2^", 0) == 0) {
    const auto k = detail::parse_int("--segment-size", s.substr(2));
    if (k < 0 || k > 40) throw malformed_input("--segment-size exponent out of range");
    return std::uint64_t{1} << k;
  }
  return detail::parse_count("--segment-size", s);
}

ExperimentConfig load_config(const CommonOptions& o) {
  ExperimentConfig c = o.config_path.empty() ? ExperimentConfig::standard() : ExperimentConfig::load(o.config_path);
  if (const char* env = std::getenv("LAB_WORKERS"); env != nullptr && *env != '\0') {
    const auto w = detail::parse_int("LAB_WORKERS", env);
    if (w < 1 || w > 1024) throw malformed_input("LAB_WORKERS must lie in [1, 1024]");
    c.plan.worker_count = static_cast<unsigned>(w);
  }
  if (o.workers > 0) c.plan.worker_count = o.workers;
  if (!o.segment_size.empty()) c.plan.segment_size = parse_segment_size(o.segment_size);
  if (!o.out.empty()) c.out = o.out;
  return c;
}

std::vector<std::uint64_t> override_checkpoints(const CommonOptions& o, const std::vector<std::uint64_t>& fallback) {
  if (o.checkpoints.empty()) return fallback;
  return detail::parse_checkpoints("--checkpoints", o.checkpoints);
}

void print_report(const std::string& title, const CorrelationReport& r) {
  std::printf("%s\n%12s  %24s  %24s  %24s\n", title.c_str(), "N", "re", "im", "modulus");
  for (const auto& c : r.checkpoints) {
    std::printf("%12llu  %24.17g  %24.17g  %24.17g\n", static_cast<unsigned long long>(c.N), c.value.real(), c.value.imag(),
                c.modulus);
  }
}

int cmd_verify(const std::string& fault_name) {
  FaultInjection fault = FaultInjection::none;
  if (fault_name == "twist") {
    fault = FaultInjection::twist;
  } else if (fault_name != "none") {
    throw malformed_input("unknown fault '" + fault_name + "' (expected none or twist)");
  }
  bool ok = true;
  for (const auto& s : run_verify_suites(fault)) {
    std::printf("%s %-16s %8llu checks%s%s\n", s.passed ? "PASS" : "FAIL", s.name.c_str(),
                static_cast<unsigned long long>(s.checks), s.passed ? "" : "  first failure: ", s.detail.c_str());
    ok = ok && s.passed;
  }
  std::printf("%s\n", ok ? "all suites passed" : "verification FAILED");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heislab: skew products on Heisenberg nilmanifolds and Moebius correlations"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(HEISLAB_VERSION));

  CommonOptions o;
  app.add_option("--config", o.config_path, "experiment config file (default: built-in standard config)");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--workers", o.workers, "worker threads (default: LAB_WORKERS or config)")->check(CLI::Range(1u, 1024u));
  app.add_option("--segment-size", o.segment_size, "orbit segment size, a power of two (e.g. 2^16)");
  app.add_option("--checkpoints", o.checkpoints, "comma-separated checkpoint list overriding the config");

  std::string fault = "none";
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--inject-fault", fault, "deliberately corrupt a component (none, twist)");

  std::uint64_t bound = 0;
  auto* sieve = app.add_subcommand("sieve", "sieve the Moebius function and report Mertens values");
  sieve->add_option("--bound", bound, "sieve bound (default: config sieve_bound)");

  std::uint64_t n = 1000;
  auto* orbit = app.add_subcommand("orbit", "print T^n and (T*')^n of the identity points");
  orbit->add_option("--n", n, "iterate count");

  auto* correlate = app.add_subcommand("correlate", "Moebius correlation sums along the T orbit");
  auto* bilinear = app.add_subcommand("bilinear", "bilinear prime-pair sums by the direct pair orbit");
  auto* reduce = app.add_subcommand("reduce-joining", "bilinear sums through the reduced joining system, both routes");
  auto* weyl = app.add_subcommand("weyl", "Weyl sums along the reduced orbit");

  double y0 = 0.5;
  auto* winding = app.add_subcommand("winding", "degree in x of H_n and the boundary increment of F_n");
  winding->add_option("--n", n, "iterate count");
  winding->add_option("--y", y0, "height y0 in [0,1)");

  auto* constants = app.add_subcommand("constants", "proof constants delta_1 and nu");
  auto* coboundary = app.add_subcommand("coboundary", "truncated Fourier search for a transfer function");
  auto* run = app.add_subcommand("run", "all experiments, reports and manifest");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return cmd_verify(fault);

    ExperimentConfig cfg = load_config(o);
    if (sieve->parsed()) {
      if (bound > 0) cfg.sieve_bound = bound;
      auto cps = override_checkpoints(o, {});
      if (cps.empty()) {
        for (std::uint64_t c = 10; c <= cfg.sieve_bound; c *= 10) cps.push_back(c);
        if (cps.empty() || cps.back() != cfg.sieve_bound) cps.push_back(cfg.sieve_bound);
      }
      const auto mu = sieve_mobius(cfg.sieve_bound);
      const auto m = mu.mertens_at(cps);
      std::printf("%12s  %10s\n", "N", "M(N)");
      for (std::size_t i = 0; i < cps.size(); ++i) {
        std::printf("%12llu  %10lld\n", static_cast<unsigned long long>(cps[i]), static_cast<long long>(m[i]));
      }
      if (!o.out.empty()) {
        std::filesystem::create_directories(cfg.out);
        write_file(std::filesystem::path(cfg.out) / "mertens.csv", mertens_csv(cps, m));
      }
      return 0;
    }
    if (orbit->parsed()) {
      const auto pt = iterate_T(cfg.system(), NilPoint<FixedCoords>::identity(), n);
      const auto js = cfg.joining();
      const auto star = iterate_Tstar_trivialized(js, TorusPoint<FixedCoords>{}, n);
      std::printf("T^%llu x0      = (%.17g, %.17g, %.17g)\n", static_cast<unsigned long long>(n), pt.rep().x.to_double(),
                  pt.rep().y.to_double(), pt.rep().z.to_double());
      std::printf("(T*')^%llu x0* = (%.17g, %.17g, %.17g)\n", static_cast<unsigned long long>(n), star.x.to_double(),
                  star.y.to_double(), star.z.to_double());
      std::printf("exact x, y:   %s  %s\n", pt.rep().x.to_dyadic_string().c_str(), pt.rep().y.to_dyadic_string().c_str());
      return 0;
    }
    if (winding->parsed()) {
      const auto js = cfg.joining();
      const double lip = static_cast<double>(n) * static_cast<double>(cfg.p * cfg.p + cfg.q * cfg.q) * cfg.h.lipschitz();
      const auto w = winding_in_x([&](double x, double y) { return Hn_lift(js, x, y, n); }, y0, {lip});
      const auto inc = boundary_increment_Fn(js, cfg.coboundary_k, n, y0);
      std::printf("winding of H_%llu in x at y0=%g: %lld (expected n(p^2-q^2)d1 = %lld)\n", static_cast<unsigned long long>(n),
                  y0, static_cast<long long>(w), static_cast<long long>(static_cast<std::int64_t>(n) * js.twist * cfg.h.d1));
      std::printf("F_n(1,y0) - F_n(0,y0): computed %.12f, closed form %.12f\n", inc.computed, inc.closed_form);
      return 0;
    }

    if (correlate->parsed()) cfg.correlation_checkpoints = override_checkpoints(o, cfg.correlation_checkpoints);
    if (bilinear->parsed() || reduce->parsed()) cfg.bilinear_checkpoints = override_checkpoints(o, cfg.bilinear_checkpoints);
    if (weyl->parsed()) cfg.weyl_checkpoints = override_checkpoints(o, cfg.weyl_checkpoints);
    if (run->parsed() && !o.checkpoints.empty()) {
      const auto cps = override_checkpoints(o, {});
      cfg.correlation_checkpoints = cfg.bilinear_checkpoints = cfg.weyl_checkpoints = cfg.davenport_checkpoints = cps;
    }
    cfg.validate();
    ExperimentRunner runner(cfg, cfg.out, &std::cerr);

    if (correlate->parsed()) {
      print_report("(1/N) sum F(T^n x0) mu(n)", runner.correlate());
    } else if (bilinear->parsed()) {
      print_report("(1/N) sum F(T^{pn} x0) conj F(T^{qn} x0)", runner.bilinear().first);
    } else if (reduce->parsed()) {
      const auto [direct, reduced] = runner.bilinear();
      print_report("reduced route (1/N) sum f*(T*^n x0*)", reduced);
      double gap = 0.0;
      for (std::size_t k = 0; k < direct.checkpoints.size(); ++k) {
        gap = std::max(gap, std::abs(direct.checkpoints[k].value - reduced.checkpoints[k].value));
      }
      std::printf("max |direct - reduced| = %.3e\n", gap);
    } else if (weyl->parsed()) {
      const auto reports = runner.weyl();
      double worst = 0.0;
      for (const auto& r : reports) worst = std::max(worst, r.checkpoints.back().second);
      std::printf("%zu frequencies, max |Weyl sum| at N=%llu: %.6g\n", reports.size(),
                  static_cast<unsigned long long>(cfg.weyl_checkpoints.back()), worst);
    } else if (constants->parsed()) {
      const auto pc = runner.constants();
      std::printf("discriminant = %.15g\ndelta_1      = %.15g\nnu           = %.15g\n", pc.discriminant, pc.delta1, pc.nu);
    } else if (coboundary->parsed()) {
      const auto res = runner.coboundary();
      std::printf("residual %.6g (%zu modes solved, %zu skipped, grid %lld)\n", res.residual, res.modes_solved,
                  res.skipped_modes.size(), static_cast<long long>(res.grid));
    } else if (run->parsed()) {
      const auto m = runner.run_all();
      for (const auto& f : m.files) std::printf("wrote %s/%s\n", cfg.out.c_str(), f.c_str());
      for (const auto& t : m.thresholds) {
        std::printf("%-6s %s = %.6g (target %g)\n", t.met ? "ok" : "NOTE", t.name.c_str(), t.value, t.threshold);
      }
    }
    return 0;
  } catch (const malformed_input& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const contract_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
