#pragma once

// Report serialisation: CSV tables with a fixed column order and 17
// significant digits, JSON sidecars and the run manifest.
// Needs OpenSSL's libcrypto for the configuration hash.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include "json.hpp"

#include "heislab/config.hpp"
#include "heislab/correlation.hpp"
#include "heislab/diagnostics.hpp"
#include "heislab/errors.hpp"

#ifndef HEISLAB_VERSION
#define HEISLAB_VERSION "0.1.0"
#endif

namespace heislab {

using Json = nlohmann::ordered_json;

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw numerical_error("sha256: digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

// Hash of the canonical serialisation, so formatting of the source file does
// not matter. Worker count and output directory do not change results and
// are left out.
inline std::string config_hash(ExperimentConfig c) {
  c.plan.worker_count = 1;
  c.out = "out";
  return sha256_hex(c.serialize());
}

inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string correlation_csv(const CorrelationReport& r) {
  std::string s = "N,re,im,modulus\n";
  for (const auto& c : r.checkpoints) {
    s += std::to_string(c.N) + "," + csv_number(c.value.real()) + "," + csv_number(c.value.imag()) + "," +
         csv_number(c.modulus) + "\n";
  }
  return s;
}

inline std::string weyl_csv(const std::vector<WeylReport>& reports) {
  std::string s = "k1,k2,k3,N,modulus\n";
  for (const auto& r : reports) {
    for (const auto& [N, v] : r.checkpoints) {
      s += std::to_string(r.k[0]) + "," + std::to_string(r.k[1]) + "," + std::to_string(r.k[2]) + "," + std::to_string(N) +
           "," + csv_number(v) + "\n";
    }
  }
  return s;
}

inline std::string mertens_csv(std::span<const std::uint64_t> checkpoints, const std::vector<std::int64_t>& values) {
  std::string s = "N,mertens\n";
  for (std::size_t i = 0; i < checkpoints.size(); ++i) s += std::to_string(checkpoints[i]) + "," + std::to_string(values[i]) + "\n";
  return s;
}

inline Json sidecar(const CorrelationReport& r, const std::string& hash) {
  Json j;
  j["config_sha256"] = hash;
  Json meta = Json::object();
  for (const auto& [k, v] : r.metadata) meta[k] = v;
  j["metadata"] = meta;
  j["columns"] = {"N", "re", "im", "modulus"};
  j["rows"] = r.checkpoints.size();
  return j;
}

inline Json to_json(const ProofConstants& pc) {
  return Json{{"k", pc.k},         {"p", pc.p},         {"q", pc.q},
              {"d1", pc.d1},       {"alpha", pc.alpha}, {"beta", pc.beta},
              {"L", pc.L},         {"discriminant", pc.discriminant},
              {"delta1", pc.delta1}, {"nu", pc.nu}};
}

inline Json to_json(const CoboundaryResult& r) {
  Json skipped = Json::array();
  for (const auto& [m, n] : r.skipped_modes) skipped.push_back({m, n});
  return Json{{"residual", r.residual},
              {"modes_solved", r.modes_solved},
              {"skipped_modes", skipped},
              {"grid", r.grid},
              {"note", "truncated Fourier least squares; a large residual is evidence, not proof, of non-existence"}};
}

inline void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw numerical_error("cannot write '" + path.string() + "'");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw numerical_error("write to '" + path.string() + "' failed");
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// A recorded diagnostic with a target it is expected (not required) to meet.
struct SoftThreshold {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool met = false;
};

struct RunManifest {
  std::string config_hash;
  std::string version = HEISLAB_VERSION;
  std::string started;
  std::string finished;
  std::vector<std::string> files;
  std::vector<SoftThreshold> thresholds;

  Json to_json() const {
    Json t = Json::array();
    for (const auto& s : thresholds) {
      t.push_back({{"name", s.name}, {"value", s.value}, {"threshold", s.threshold}, {"met", s.met}});
    }
    return Json{{"config_sha256", config_hash}, {"version", version}, {"started", started},
                {"finished", finished},         {"files", files},     {"soft_thresholds", t}};
  }
};

}  // namespace heislab
