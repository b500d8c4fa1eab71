#pragma once

// Experiment configuration: a sectioned key = value text file.
//
//   [system]      alpha, beta, h_d1, h_d2, h_offset, h_trig, h_table
//   [joining]     p, q, monte_carlo_samples
//   [observable]  xi, bump_center, bump_radius, bump_amplitude
//   [correlation] checkpoints, sieve_bound
//   [bilinear]    checkpoints
//   [weyl]        checkpoints, max_frequency
//   [coboundary]  k, fourier_cutoff
//   [davenport]   alpha, checkpoints
//   [orbit]       segment_size, workers
//   [run]         out, seed
//
// h_trig is a comma-separated list of "k1 k2 amplitude phase" terms and
// h_table is "nx ny v0 v1 ...". Checkpoint lists accept integers and 1eK.
// Comments start with ';'.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "heislab/base_function.hpp"
#include "heislab/errors.hpp"
#include "heislab/fixed.hpp"
#include "heislab/joining.hpp"
#include "heislab/mobius.hpp"
#include "heislab/observables.hpp"
#include "heislab/orbit.hpp"
#include "heislab/skew.hpp"

namespace heislab {

struct ExperimentConfig {
  Fixed alpha = Fixed::parse("0.41421356237309504880168872420969807857");
  Fixed beta = Fixed::parse("0.73205080756887729352744634150587236694");
  BaseFunctionSpec h = standard_h();
  std::int64_t p = 3;
  std::int64_t q = 2;
  std::uint64_t monte_carlo_samples = 1'000'000;
  std::int64_t xi = 1;
  Bump bump;
  std::vector<std::uint64_t> correlation_checkpoints{1'000, 10'000, 100'000, 1'000'000, 10'000'000};
  std::uint64_t sieve_bound = 10'000'000;
  std::vector<std::uint64_t> bilinear_checkpoints{1'000, 10'000, 100'000};
  std::vector<std::uint64_t> weyl_checkpoints{1'000, 10'000, 100'000, 1'000'000};
  std::int64_t weyl_max_frequency = 2;
  std::int64_t coboundary_k = 1;
  std::int64_t fourier_cutoff = 16;
  Fixed davenport_alpha = Fixed::parse("0.61803398874989484820458683436563811772");
  std::vector<std::uint64_t> davenport_checkpoints{1'000, 10'000, 100'000, 1'000'000};
  OrbitSegmentPlan plan;
  std::string out = "out";
  std::uint64_t seed = 20240601;

  static BaseFunctionSpec standard_h() {
    BaseFunctionSpec h;
    h.d1 = 1;
    h.terms.push_back({1, 1, 0.1, 0.0});
    return h;
  }

  static ExperimentConfig standard() { return {}; }

  SkewSystem system() const { return {alpha, beta, h}; }
  JoiningSystem joining() const { return build_joining(system(), p, q); }
  Observable observable() const { return Observable::vertical(xi, bump); }

  void validate() const;
  std::string serialize() const;
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

namespace detail {

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string join_checkpoints(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s;
}

[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
  throw malformed_input("config [" + field + ": " + what);
}

inline std::vector<std::string> split(const std::string& s, const std::string& seps) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : s) {
    if (seps.find(ch) != std::string::npos) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline std::int64_t parse_int(const std::string& field, const std::string& s) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    field_error(field, "expected an integer, got '" + s + "'");
  }
  if (used != s.size()) field_error(field, "expected an integer, got '" + s + "'");
  return v;
}

inline double parse_real(const std::string& field, const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    field_error(field, "expected a number, got '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) field_error(field, "expected a finite number, got '" + s + "'");
  return v;
}

// "1000", "1e6"
inline std::uint64_t parse_count(const std::string& field, const std::string& s) {
  if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
    const auto mant = parse_int(field, s.substr(0, e)), exp = parse_int(field, s.substr(e + 1));
    if (mant < 0 || exp < 0 || exp > 18) field_error(field, "bad count '" + s + "'");
    std::uint64_t v = static_cast<std::uint64_t>(mant);
    for (std::int64_t i = 0; i < exp; ++i) {
      if (v > UINT64_MAX / 10) field_error(field, "count '" + s + "' overflows");
      v *= 10;
    }
    return v;
  }
  const auto v = parse_int(field, s);
  if (v < 0) field_error(field, "count must be nonnegative");
  return static_cast<std::uint64_t>(v);
}

inline std::vector<std::uint64_t> parse_checkpoints(const std::string& field, const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& tok : split(s, ", \t")) out.push_back(parse_count(field, tok));
  return out;
}

inline Fixed parse_fixed(const std::string& field, const std::string& s) {
  try {
    return Fixed::parse(s);
  } catch (const malformed_input& e) {
    field_error(field, e.what());
  } catch (const numerical_error& e) {
    field_error(field, e.what());
  }
}

inline std::vector<TrigTerm> parse_trig(const std::string& field, const std::string& s) {
  std::vector<TrigTerm> out;
  for (const auto& term : split(s, ",")) {
    const auto parts = split(term, " \t");
    if (parts.size() != 4) field_error(field, "each term needs 'k1 k2 amplitude phase', got '" + term + "'");
    out.push_back({parse_int(field, parts[0]), parse_int(field, parts[1]), parse_real(field, parts[2]),
                   parse_real(field, parts[3])});
  }
  return out;
}

inline PeriodicTable parse_table(const std::string& field, const std::string& s) {
  const auto parts = split(s, ", \t");
  if (parts.size() < 2) field_error(field, "expected 'nx ny values...'");
  PeriodicTable t;
  const auto nx = parse_int(field, parts[0]), ny = parse_int(field, parts[1]);
  if (nx < 1 || ny < 1) field_error(field, "table shape must be positive");
  t.nx = static_cast<std::size_t>(nx);
  t.ny = static_cast<std::size_t>(ny);
  for (std::size_t i = 2; i < parts.size(); ++i) t.values.push_back(parse_real(field, parts[i]));
  if (t.values.size() != t.nx * t.ny) {
    field_error(field, "expected " + std::to_string(t.nx * t.ny) + " values, got " + std::to_string(t.values.size()));
  }
  return t;
}

inline void check_checkpoints(const std::string& field, const std::vector<std::uint64_t>& v) {
  if (v.empty()) field_error(field, "checkpoint list is empty");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) field_error(field, "checkpoints must be positive");
    if (i > 0 && v[i] <= v[i - 1]) field_error(field, "checkpoints must be strictly increasing");
  }
}

}  // namespace detail

inline void ExperimentConfig::validate() const {
  using detail::field_error;
  try {
    h.validate();
  } catch (const malformed_input& e) {
    field_error("system] h_trig, h_table", e.what());
  }
  if (!is_prime(p) || !is_prime(q) || p <= q) field_error("joining] p, q", "need primes p > q");
  if (monte_carlo_samples < 2) field_error("joining] monte_carlo_samples", "need at least 2 samples");
  if (xi == 0) field_error("observable] xi", "vertical frequency must be nonzero");
  try {
    bump.validate();
  } catch (const malformed_input& e) {
    field_error("observable] bump_center, bump_radius", e.what());
  }
  detail::check_checkpoints("correlation] checkpoints", correlation_checkpoints);
  detail::check_checkpoints("bilinear] checkpoints", bilinear_checkpoints);
  detail::check_checkpoints("weyl] checkpoints", weyl_checkpoints);
  detail::check_checkpoints("davenport] checkpoints", davenport_checkpoints);
  if (sieve_bound < 1 || sieve_bound > MobiusTable::kMaxBound) field_error("correlation] sieve_bound", "must lie in [1, 1e9]");
  if (correlation_checkpoints.back() > sieve_bound) {
    field_error("correlation] checkpoints", "checkpoint " + std::to_string(correlation_checkpoints.back()) +
                                                " exceeds sieve_bound " + std::to_string(sieve_bound));
  }
  if (davenport_checkpoints.back() > sieve_bound) {
    field_error("davenport] checkpoints", "checkpoint " + std::to_string(davenport_checkpoints.back()) +
                                              " exceeds sieve_bound " + std::to_string(sieve_bound));
  }
  if (weyl_max_frequency < 1) field_error("weyl] max_frequency", "must be >= 1");
  if (coboundary_k < 1) field_error("coboundary] k", "must be >= 1");
  if (fourier_cutoff < 1) field_error("coboundary] fourier_cutoff", "must be >= 1");
  try {
    plan.validate();
  } catch (const contract_error& e) {
    field_error("orbit] segment_size, workers", e.what());
  }
  if (out.empty()) field_error("run] out", "output directory must be named");
}

inline std::string ExperimentConfig::serialize() const {
  using detail::format_real;
  std::ostringstream s;
  s << "[system]\n";
  s << "alpha = " << alpha.to_dyadic_string() << "\n";
  s << "beta = " << beta.to_dyadic_string() << "\n";
  s << "h_d1 = " << h.d1 << "\n";
  s << "h_d2 = " << h.d2 << "\n";
  s << "h_offset = " << h.offset << "\n";
  s << "h_trig = ";
  for (std::size_t i = 0; i < h.terms.size(); ++i) {
    const auto& t = h.terms[i];
    s << (i ? ", " : "") << t.k1 << " " << t.k2 << " " << format_real(t.amplitude) << " " << format_real(t.phase);
  }
  s << "\n";
  if (h.table) {
    s << "h_table = " << h.table->nx << " " << h.table->ny;
    for (const double v : h.table->values) s << " " << format_real(v);
    s << "\n";
  }
  s << "\n[joining]\n";
  s << "p = " << p << "\nq = " << q << "\nmonte_carlo_samples = " << monte_carlo_samples << "\n";
  s << "\n[observable]\n";
  s << "xi = " << xi << "\n";
  s << "bump_center = " << format_real(bump.center_x) << " " << format_real(bump.center_y) << "\n";
  s << "bump_radius = " << format_real(bump.radius) << "\n";
  s << "bump_amplitude = " << format_real(bump.amplitude) << "\n";
  s << "\n[correlation]\n";
  s << "checkpoints = " << detail::join_checkpoints(correlation_checkpoints) << "\n";
  s << "sieve_bound = " << sieve_bound << "\n";
  s << "\n[bilinear]\n";
  s << "checkpoints = " << detail::join_checkpoints(bilinear_checkpoints) << "\n";
  s << "\n[weyl]\n";
  s << "checkpoints = " << detail::join_checkpoints(weyl_checkpoints) << "\n";
  s << "max_frequency = " << weyl_max_frequency << "\n";
  s << "\n[coboundary]\n";
  s << "k = " << coboundary_k << "\nfourier_cutoff = " << fourier_cutoff << "\n";
  s << "\n[davenport]\n";
  s << "alpha = " << davenport_alpha.to_dyadic_string() << "\n";
  s << "checkpoints = " << detail::join_checkpoints(davenport_checkpoints) << "\n";
  s << "\n[orbit]\n";
  s << "segment_size = " << plan.segment_size << "\nworkers = " << plan.worker_count << "\n";
  s << "\n[run]\n";
  s << "out = " << out << "\nseed = " << seed << "\n";
  return s.str();
}

inline ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw malformed_input("config line " + std::to_string(e.line()) + ": " + e.message());
  }

  static const std::set<std::string> known{
      "system.alpha",        "system.beta",         "system.h_d1",          "system.h_d2",
      "system.h_offset",     "system.h_trig",       "system.h_table",       "joining.p",
      "joining.q",           "joining.monte_carlo_samples",                 "observable.xi",
      "observable.bump_center",                     "observable.bump_radius",
      "observable.bump_amplitude",                  "correlation.checkpoints",
      "correlation.sieve_bound",                    "bilinear.checkpoints", "weyl.checkpoints",
      "weyl.max_frequency",  "coboundary.k",        "coboundary.fourier_cutoff",
      "davenport.alpha",     "davenport.checkpoints",                       "orbit.segment_size",
      "orbit.workers",       "run.out",             "run.seed"};
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw malformed_input("config: key '" + section + "' outside any section");
    for (const auto& [key, value] : body) {
      if (!known.count(section + "." + key)) detail::field_error(section + "] " + key, "unknown key");
    }
  }

  ExperimentConfig c;
  const auto get = [&](const std::string& path) -> std::optional<std::string> {
    const auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'));
    if (!v) return std::nullopt;
    return *v;
  };
  const auto name = [](const std::string& path) {
    const auto dot = path.find('.');
    return path.substr(0, dot) + "] " + path.substr(dot + 1);
  };
  const auto int_field = [&](const std::string& path, auto& target) {
    if (const auto v = get(path)) target = static_cast<std::remove_reference_t<decltype(target)>>(detail::parse_int(name(path), *v));
  };
  const auto count_field = [&](const std::string& path, auto& target) {
    if (const auto v = get(path)) target = static_cast<std::remove_reference_t<decltype(target)>>(detail::parse_count(name(path), *v));
  };
  const auto real_field = [&](const std::string& path, double& target) {
    if (const auto v = get(path)) target = detail::parse_real(name(path), *v);
  };
  const auto list_field = [&](const std::string& path, std::vector<std::uint64_t>& target) {
    if (const auto v = get(path)) target = detail::parse_checkpoints(name(path), *v);
  };

  if (const auto v = get("system.alpha")) c.alpha = detail::parse_fixed("system] alpha", *v);
  if (const auto v = get("system.beta")) c.beta = detail::parse_fixed("system] beta", *v);
  int_field("system.h_d1", c.h.d1);
  int_field("system.h_d2", c.h.d2);
  int_field("system.h_offset", c.h.offset);
  if (const auto v = get("system.h_trig")) c.h.terms = detail::parse_trig("system] h_trig", *v);
  if (const auto v = get("system.h_table")) c.h.table = detail::parse_table("system] h_table", *v);
  int_field("joining.p", c.p);
  int_field("joining.q", c.q);
  count_field("joining.monte_carlo_samples", c.monte_carlo_samples);
  int_field("observable.xi", c.xi);
  if (const auto v = get("observable.bump_center")) {
    const auto parts = detail::split(*v, ", \t");
    if (parts.size() != 2) detail::field_error("observable] bump_center", "expected two numbers");
    c.bump.center_x = detail::parse_real("observable] bump_center", parts[0]);
    c.bump.center_y = detail::parse_real("observable] bump_center", parts[1]);
  }
  real_field("observable.bump_radius", c.bump.radius);
  real_field("observable.bump_amplitude", c.bump.amplitude);
  list_field("correlation.checkpoints", c.correlation_checkpoints);
  count_field("correlation.sieve_bound", c.sieve_bound);
  list_field("bilinear.checkpoints", c.bilinear_checkpoints);
  list_field("weyl.checkpoints", c.weyl_checkpoints);
  int_field("weyl.max_frequency", c.weyl_max_frequency);
  int_field("coboundary.k", c.coboundary_k);
  int_field("coboundary.fourier_cutoff", c.fourier_cutoff);
  if (const auto v = get("davenport.alpha")) c.davenport_alpha = detail::parse_fixed("davenport] alpha", *v);
  list_field("davenport.checkpoints", c.davenport_checkpoints);
  count_field("orbit.segment_size", c.plan.segment_size);
  if (const auto v = get("orbit.workers")) {
    const auto w = detail::parse_int("orbit] workers", *v);
    if (w < 1 || w > 1024) detail::field_error("orbit] workers", "must lie in [1, 1024]");
    c.plan.worker_count = static_cast<unsigned>(w);
  }
  if (const auto v = get("run.out")) c.out = *v;
  count_field("run.seed", c.seed);
  c.validate();
  return c;
}

inline ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw malformed_input("cannot open config file '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  try {
    return parse(s.str());
  } catch (const malformed_input& e) {
    throw malformed_input(path + ": " + e.what());
  }
}

}  // namespace heislab
