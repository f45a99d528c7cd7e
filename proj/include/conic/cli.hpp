#pragma once

// Run configuration, cached builds, named checks and report writers behind
// the conic-schemes command line tool.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conic/coherent.hpp"
#include "conic/fusion.hpp"
#include "conic/projconic.hpp"

namespace conic::cli {

inline constexpr std::uint32_t kCodeVersion = 1;
inline constexpr std::uint32_t kReportSchema = 1;

/// Bad flags or an unsupported combination; the tool exits with status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unreadable, truncated or checksum-mismatched cache file.
struct CacheError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Variant { full, hyperbolic, elliptic, cyclotomic };
enum class FusionKind { none, frobenius, five, three, srg };
enum class Format { json, csv, edgelist };

struct RunConfig {
  std::uint32_t q = 0;
  std::optional<std::uint64_t> poly;  // coefficient mask, characteristic 2 only
  Variant variant = Variant::full;
  std::uint32_t cyclotomic_e = 0;
  FusionKind fusion = FusionKind::none;
  unsigned frobenius_k = 1;
  std::vector<std::string> checks;
  Format format = Format::json;
  std::optional<std::filesystem::path> cache_dir;  // nullopt: no caching
  std::filesystem::path out_dir = ".";
  std::optional<cc::VerifyMode> mode;  // default: full up to 300 points
  std::uint64_t seed = 0;
  bool cross_check = false;
};

/// "full", "hyperbolic", "elliptic", "cyclotomic:<e>" (also "cyclotomic(<e>)").
void parse_variant(const std::string& s, RunConfig& cfg);
/// "none", "frobenius:<k>" (also "frobenius(<k>)"), "five", "three", "srg".
void parse_fusion(const std::string& s, RunConfig& cfg);
Format parse_format(const std::string& s);
std::uint64_t parse_poly(const std::string& hex);
std::vector<std::string> parse_checks(const std::string& csv);

std::string variant_name(const RunConfig& cfg);
std::string fusion_name(const RunConfig& cfg);

/// Throws ConfigError for a non prime power q or an unsupported combination.
void validate(const RunConfig& cfg);

/// Environment override CONIC_SCHEMES_CACHE, else $XDG_CACHE_HOME or ~/.cache.
std::filesystem::path default_cache_dir();

/// Everything a run produces before checks.  `base` is the labeled conic
/// configuration (or the cyclotomic scheme); `fused` the configuration after
/// the fusion; `result` the requested variant of `fused`.
struct Build {
  RunConfig cfg;
  gf::FieldPtr base_field;  // F_q
  gf::FieldPtr field;       // field of the conic: F_q, or F_{q^2} for five/three/srg
  std::optional<geom::Conic> conic;
  std::optional<geom::LineSet> lines;
  cc::CoherentConfiguration base;
  cc::CoherentConfiguration fused;
  cc::CoherentConfiguration result;
  bool from_cache = false;
  std::optional<nlohmann::json> cross_check;
};

/// Cache key: field, polynomial, method, variant, fusion and code version.
std::string cache_key(const RunConfig& cfg, const gf::Field& F);

void save_configuration(const std::filesystem::path& file, const cc::CoherentConfiguration& c, std::uint32_t q,
                        std::uint64_t poly_mask, const std::string& method);
/// Throws CacheError on a bad magic, version, truncation or checksum.
cc::CoherentConfiguration load_configuration(const std::filesystem::path& file);

/// FNV-1a over raw bytes.
std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ull);

Build cmd_build(const RunConfig& cfg);

struct CheckResult {
  std::string name;
  bool pass = false;
  nlohmann::json detail;
};

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names{"axioms", "closed-forms", "pseudocyclic", "design",
                                              "tables", "srg",          "eigen",        "invariance"};
  return names;
}

/// Runs the named checks in the given order; unknown or inapplicable names
/// give a failed result with a reason.
std::vector<CheckResult> cmd_check(const Build& b, const std::vector<std::string>& checks);

nlohmann::json descriptor(const Build& b);
nlohmann::json report_json(const Build& b, const std::vector<CheckResult>& results);

/// Relations with sizes and valencies, or the table entries with formulas and
/// counts when a five/three/srg fusion is active.
std::string report_csv(const Build& b);

/// Writes the report in cfg.format into cfg.out_dir; returns the files written.
std::vector<std::filesystem::path> cmd_report(const Build& b, const std::vector<CheckResult>& results);

/// Removes cache and lock files; returns how many were removed.
std::size_t cmd_clean_cache(const std::filesystem::path& dir);

bool all_pass(const std::vector<CheckResult>& results);

}  // namespace conic::cli
