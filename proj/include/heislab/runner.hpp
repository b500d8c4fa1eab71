#pragma once

// Runs the configured experiments and writes their reports into one
// directory. Used by the command-line tool; needs libcrypto via report.hpp.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "heislab/config.hpp"
#include "heislab/correlation.hpp"
#include "heislab/diagnostics.hpp"
#include "heislab/mobius.hpp"
#include "heislab/report.hpp"

namespace heislab {

class ExperimentRunner {
 public:
  ExperimentRunner(ExperimentConfig cfg, std::filesystem::path out, std::ostream* log = nullptr)
      : cfg_(std::move(cfg)), out_(std::move(out)), hash_(config_hash(cfg_)), log_(log) {
    cfg_.validate();
    std::filesystem::create_directories(out_);
  }

  const ExperimentConfig& config() const { return cfg_; }
  const std::vector<std::string>& files() const { return files_; }
  const std::vector<SoftThreshold>& thresholds() const { return thresholds_; }

  const MobiusTable& mobius() {
    if (!mu_) {
      say("sieving mu up to " + std::to_string(cfg_.sieve_bound));
      mu_ = sieve_mobius(cfg_.sieve_bound);
    }
    return *mu_;
  }

  CorrelationReport correlate() {
    say("correlation sum along the T orbit");
    auto r = correlation_sum(cfg_.system(), cfg_.observable(), NilPoint<FixedCoords>::identity(), &mobius(),
                             cfg_.correlation_checkpoints, cfg_.plan);
    r.metadata["seed"] = std::to_string(cfg_.seed);
    emit("correlation.csv", correlation_csv(r));
    emit("correlation.json", sidecar(r, hash_).dump(2) + "\n");
    const auto at = [&](std::uint64_t N) -> std::optional<double> {
      for (const auto& c : r.checkpoints)
        if (c.N == N) return c.modulus;
      return std::nullopt;
    };
    const double last = r.checkpoints.back().modulus;
    soft("correlation modulus at N=" + std::to_string(r.checkpoints.back().N), last, 0.05, last <= 0.05);
    if (const auto early = at(10'000); early && r.checkpoints.back().N > 10'000) {
      soft("correlation decay ratio |S(N_max)| / |S(1e4)|", last / *early, 0.5, last <= 0.5 * *early);
    }
    return r;
  }

  // Direct pair-orbit route plus the reduced joining route.
  std::pair<CorrelationReport, CorrelationReport> bilinear() {
    say("bilinear sums, direct and reduced routes");
    const auto start = NilPoint<FixedCoords>::identity();
    auto direct = bilinear_sum(cfg_.system(), cfg_.observable(), start, cfg_.p, cfg_.q, cfg_.bilinear_checkpoints, cfg_.plan);
    auto reduced =
        bilinear_sum_reduced(cfg_.system(), cfg_.observable(), start, cfg_.p, cfg_.q, cfg_.bilinear_checkpoints, cfg_.plan);
    double gap = 0.0;
    for (std::size_t k = 0; k < direct.checkpoints.size(); ++k) {
      gap = std::max(gap, std::abs(direct.checkpoints[k].value - reduced.checkpoints[k].value));
    }
    emit("bilinear.csv", correlation_csv(direct));
    emit("bilinear_reduced.csv", correlation_csv(reduced));
    auto meta = sidecar(direct, hash_);
    meta["max_route_difference"] = gap;
    emit("bilinear.json", meta.dump(2) + "\n");
    return {direct, reduced};
  }

  std::vector<WeylReport> weyl() {
    say("Weyl sums along the reduced orbit");
    const auto freqs = frequencies_up_to(cfg_.weyl_max_frequency);
    auto reports = weyl_sums(cfg_.joining(), TorusPoint<FixedCoords>{}, freqs, cfg_.weyl_checkpoints, cfg_.plan);
    emit("weyl.csv", weyl_csv(reports));
    double worst = 0.0;
    Frequency arg{};
    for (const auto& r : reports) {
      if (r.checkpoints.back().second > worst) {
        worst = r.checkpoints.back().second;
        arg = r.k;
      }
    }
    emit("weyl.json", Json{{"config_sha256", hash_},
                           {"frequencies", reports.size()},
                           {"N", cfg_.weyl_checkpoints.back()},
                           {"max_modulus", worst},
                           {"argmax", arg}}
                          .dump(2) + "\n");
    soft("max Weyl sum at N=" + std::to_string(cfg_.weyl_checkpoints.back()), worst, 0.05, worst <= 0.05);
    return reports;
  }

  ProofConstants constants() {
    say("proof constants");
    const auto& s = cfg_;
    const auto pc = proof_constants(s.coboundary_k, s.p, s.q, s.h.d1, s.alpha.to_double(), s.beta.to_double(), s.h.lipschitz());
    Json j = to_json(pc);
    Json inc = Json::array();
    const auto js = cfg_.joining();
    for (const std::uint64_t n : {1ULL, 10ULL, 100ULL}) {
      const auto b = boundary_increment_Fn(js, s.coboundary_k, n, 0.5);
      inc.push_back({{"n", n}, {"computed", b.computed}, {"closed_form", b.closed_form}});
    }
    j["boundary_increment"] = inc;
    j["config_sha256"] = hash_;
    emit("constants.json", j.dump(2) + "\n");
    return pc;
  }

  CorrelationReport davenport() {
    say("Davenport baseline");
    auto r = davenport_baseline(mobius(), cfg_.davenport_alpha, cfg_.davenport_checkpoints);
    emit("davenport.csv", correlation_csv(r));
    emit("davenport.json", sidecar(r, hash_).dump(2) + "\n");
    const auto& last = r.checkpoints.back();
    soft("Davenport modulus at N=" + std::to_string(last.N), last.modulus, 0.01, last.modulus <= 0.01);
    return r;
  }

  CoboundaryResult coboundary() {
    say("coboundary search");
    const auto res = coboundary_search(cfg_.joining(), cfg_.coboundary_k, cfg_.fourier_cutoff);
    Json j = to_json(res);
    j["k"] = cfg_.coboundary_k;
    j["fourier_cutoff"] = cfg_.fourier_cutoff;
    j["config_sha256"] = hash_;
    emit("coboundary.json", j.dump(2) + "\n");
    soft("coboundary residual", res.residual, 0.1, res.residual >= 0.1);
    return res;
  }

  // Monte Carlo mean of f* over X*, seeded from the config.
  Json zero_mean() {
    say("Monte Carlo mean of f* on X*");
    const JoiningObservable jobs(cfg_.observable(), cfg_.p, cfg_.q);
    std::mt19937_64 rng(cfg_.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    detail::CompensatedSum re, im, sq;
    for (std::uint64_t i = 0; i < cfg_.monte_carlo_samples; ++i) {
      const double x = u(rng), y = u(rng), z = u(rng);
      const auto v = eval_joining_observable(jobs, TorusPoint<FloatCoords>{x, y, z});
      re.add(v.real());
      im.add(v.imag());
      sq.add(std::norm(v));
    }
    const double n = static_cast<double>(cfg_.monte_carlo_samples);
    const std::complex<double> mean(re.value() / n, im.value() / n);
    const double se = std::sqrt(std::max(0.0, sq.value() / n - std::norm(mean)) / (n - 1));
    Json j{{"samples", cfg_.monte_carlo_samples}, {"seed", cfg_.seed},         {"mean_re", mean.real()},
           {"mean_im", mean.imag()},              {"modulus", std::abs(mean)}, {"standard_error", se},
           {"config_sha256", hash_}};
    emit("zero_mean.json", j.dump(2) + "\n");
    return j;
  }

  RunManifest run_all() {
    RunManifest m;
    m.config_hash = hash_;
    m.started = utc_timestamp();
    emit("config.conf", cfg_.serialize());
    correlate();
    bilinear();
    weyl();
    constants();
    davenport();
    coboundary();
    zero_mean();
    m.finished = utc_timestamp();
    m.files = files_;
    m.files.push_back("manifest.json");
    m.thresholds = thresholds_;
    write_file(out_ / "manifest.json", m.to_json().dump(2) + "\n");
    return m;
  }

 private:
  void say(const std::string& s) {
    if (log_) *log_ << "[heislab] " << s << std::endl;
  }

  void emit(const std::string& name, const std::string& text) {
    write_file(out_ / name, text);
    if (std::find(files_.begin(), files_.end(), name) == files_.end()) files_.push_back(name);
  }

  void soft(const std::string& name, double value, double threshold, bool met) {
    thresholds_.push_back({name, value, threshold, met});
  }

  ExperimentConfig cfg_;
  std::filesystem::path out_;
  std::string hash_;
  std::ostream* log_;
  std::optional<MobiusTable> mu_;
  std::vector<std::string> files_;
  std::vector<SoftThreshold> thresholds_;
};

}  // namespace heislab
