// conic-schemes: build, check and report coherent configurations on the
// non-tangent lines of a conic and their fusions.

#include <iostream>

#include "CLI11.hpp"
#include "conic/cli.hpp"

namespace {

using namespace conic::cli;

struct Flags {
  std::uint32_t q = 0;
  std::string poly, variant = "full", fusion = "none", checks, mode, format = "json", out = ".", cache_dir;
  std::uint64_t seed = 0;
  bool cross_check = false, no_cache = false;
};

void add_flags(CLI::App* cmd, Flags& f, bool needs_q) {
  auto* q = cmd->add_option("--q", f.q, "field order (prime power)");
  if (needs_q) q->required();
  cmd->add_option("--poly", f.poly, "defining polynomial of F_q as a hex coefficient mask, e.g. 0x13");
  cmd->add_option("--variant", f.variant, "full | hyperbolic | elliptic | cyclotomic:<e>");
  cmd->add_option("--fusion", f.fusion, "none | frobenius:<k> | five | three | srg");
  cmd->add_option("--checks", f.checks, "comma-separated: axioms,closed-forms,pseudocyclic,design,tables,srg,eigen,invariance");
  cmd->add_option("--mode", f.mode, "axiom verification: full | sampled")->check(CLI::IsMember({"full", "sampled"}));
  cmd->add_option("--seed", f.seed, "seed for sampled verification and spectral analysis");
  cmd->add_option("--out", f.out, "output directory for report");
  cmd->add_option("--format", f.format, "json | csv | edgelist");
  cmd->add_option("--cache-dir", f.cache_dir, "cache directory (default: $CONIC_SCHEMES_CACHE or ~/.cache)");
  cmd->add_flag("--no-cache", f.no_cache, "do not read or write the cache");
  cmd->add_flag("--cross-check", f.cross_check, "also build by group orbits and compare (field order <= 16)");
}

RunConfig to_config(const Flags& f, const std::string& default_checks) {
  RunConfig cfg;
  cfg.q = f.q;
  if (!f.poly.empty()) cfg.poly = parse_poly(f.poly);
  parse_variant(f.variant, cfg);
  parse_fusion(f.fusion, cfg);
  cfg.checks = parse_checks(f.checks.empty() ? default_checks : f.checks);
  cfg.format = parse_format(f.format);
  cfg.out_dir = f.out;
  if (!f.no_cache) cfg.cache_dir = f.cache_dir.empty() ? default_cache_dir() : std::filesystem::path(f.cache_dir);
  if (f.mode == "full") cfg.mode = conic::cc::VerifyMode::full;
  if (f.mode == "sampled") cfg.mode = conic::cc::VerifyMode::sampled;
  cfg.seed = f.seed;
  cfg.cross_check = f.cross_check;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent configurations on the non-tangent lines of a conic in PG(2,q)"};
  app.require_subcommand(1);
  Flags fb, fc, fr, fx;
  auto* build = app.add_subcommand("build", "build (or load from cache) a configuration and print its descriptor");
  add_flags(build, fb, true);
  auto* check = app.add_subcommand("check", "run named checks; exit status 1 if any fails");
  add_flags(check, fc, true);
  auto* report = app.add_subcommand("report", "run checks and write a json, csv or edgelist report");
  add_flags(report, fr, true);
  auto* clean = app.add_subcommand("clean-cache", "remove cached configurations");
  clean->add_option("--cache-dir", fx.cache_dir, "cache directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*clean) {
      const auto dir = fx.cache_dir.empty() ? default_cache_dir() : std::filesystem::path(fx.cache_dir);
      std::cout << "removed " << cmd_clean_cache(dir) << " file(s) from " << dir.string() << "\n";
      return 0;
    }
    if (*build) {
      auto cfg = to_config(fb, "");
      const auto b = cmd_build(cfg);
      auto j = descriptor(b);
      if (b.cross_check) j["cross_check"] = *b.cross_check;
      std::cout << j.dump(2) << "\n";
      return b.cross_check && !(*b.cross_check)["agree"].get<bool>() ? 1 : 0;
    }
    const bool is_check = static_cast<bool>(*check);
    auto cfg = to_config(is_check ? fc : fr, "axioms");
    const auto b = cmd_build(cfg);
    const auto results = cmd_check(b, cfg.checks);
    const auto j = report_json(b, results);
    if (is_check) {
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& p : cmd_report(b, results)) std::cout << p.string() << "\n";
    }
    return j["pass"].get<bool>() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CacheError& e) {
    std::cerr << "cache error: " << e.what() << " (run clean-cache)\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
