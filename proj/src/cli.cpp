#include "conic/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "conic/group_action.hpp"

namespace conic::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'C', 'O', 'N', 'I', 'C', 'C', 'C', '1'};
constexpr std::uint32_t kMaxConicField = 64;
constexpr std::uint32_t kMaxFusionBase = 8;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Splits "name:arg" or "name(arg)".
std::pair<std::string, std::optional<std::string>> split_arg(const std::string& s) {
  if (const auto c = s.find(':'); c != std::string::npos) return {s.substr(0, c), s.substr(c + 1)};
  if (const auto p = s.find('('); p != std::string::npos && s.back() == ')')
    return {s.substr(0, p), s.substr(p + 1, s.size() - p - 2)};
  return {s, std::nullopt};
}

std::uint32_t parse_u32(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != s.size() || v > 0xffffffffull) throw std::out_of_range(s);
    return static_cast<std::uint32_t>(v);
  } catch (const std::exception&) {
    throw ConfigError("bad " + what + ": '" + s + "'");
  }
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

bool tower_fusion(FusionKind f) { return f == FusionKind::five || f == FusionKind::three || f == FusionKind::srg; }

fusion::Merge merge_of(FusionKind f) {
  switch (f) {
    case FusionKind::three:
      return fusion::Merge::three;
    case FusionKind::srg:
      return fusion::Merge::srg;
    default:
      return fusion::Merge::five;
  }
}

bool is_scheme_variant(Variant v) { return v != Variant::full; }

std::string sign_word(int s) { return s > 0 ? "hyperbolic" : s < 0 ? "elliptic" : "single"; }

std::string class_name(int c) {
  if (c == fusion::kClass12) return "{1,2}";
  if (c == fusion::kClass124) return "{1,2,4}";
  return std::to_string(c);
}

std::uint64_t poly_mask_of(const RunConfig& cfg, std::uint32_t p, unsigned n) {
  if (cfg.poly) return *cfg.poly;
  if (p != 2) return 0;
  return gf::mask_from_poly(gf::default_polynomial(p, n));
}

cc::VerifyMode mode_for(const Build& b) {
  if (b.cfg.mode) return *b.cfg.mode;
  return b.result.n <= 300 ? cc::VerifyMode::full : cc::VerifyMode::sampled;
}

std::string applicability(const RunConfig& cfg, const std::string& check) {
  if (check == "axioms") return {};
  if (check == "closed-forms")
    return cfg.variant == Variant::cyclotomic || cfg.fusion != FusionKind::none
               ? "closed-forms applies to the unfused conic configuration"
               : "";
  if (check == "pseudocyclic" || check == "design" || check == "eigen")
    return is_scheme_variant(cfg.variant) ? "" : check + " needs --variant hyperbolic, elliptic or cyclotomic:<e>";
  if (check == "tables") return tower_fusion(cfg.fusion) ? "" : "tables needs --fusion five, three or srg";
  if (check == "srg") return cfg.fusion == FusionKind::srg ? "" : "srg needs --fusion srg";
  if (check == "invariance")
    return cfg.fusion == FusionKind::frobenius ? "" : "invariance needs --fusion frobenius:<k>";
  return "unknown check '" + check + "'";
}

// Binary writer and reader for the cache format.
class Writer {
 public:
  template <class T>
  void put(const T& v) {
    const auto* p = reinterpret_cast<const char*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void put_string(const std::string& s) {
    put(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  void put_raw(const void* data, std::size_t len) {
    const auto* p = static_cast<const char*>(data);
    buf_.insert(buf_.end(), p, p + len);
  }
  const std::vector<char>& bytes() const { return buf_; }

 private:
  std::vector<char> buf_;
};

class Reader {
 public:
  Reader(const std::vector<char>& buf, std::size_t end) : buf_(buf), end_(end) {}
  template <class T>
  T get() {
    T v;
    get_raw(&v, sizeof(T));
    return v;
  }
  std::string get_string() {
    const auto len = get<std::uint32_t>();
    need(len);
    std::string s(buf_.data() + pos_, len);
    pos_ += len;
    return s;
  }
  void get_raw(void* out, std::size_t len) {
    need(len);
    std::memcpy(out, buf_.data() + pos_, len);
    pos_ += len;
  }
  bool done() const { return pos_ == end_; }

 private:
  void need(std::size_t len) const {
    if (end_ - pos_ < len) throw CacheError("cache file is truncated");
  }
  const std::vector<char>& buf_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

class LockFile {
 public:
  explicit LockFile(fs::path path) : path_(std::move(path)) {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f) throw CacheError("cache entry is locked (remove " + path_.string() + " if no writer is running)");
    std::fclose(f);
  }
  ~LockFile() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  LockFile(const LockFile&) = delete;
  LockFile& operator=(const LockFile&) = delete;

 private:
  fs::path path_;
};

json relation_json(const Build& b, const cc::CoherentConfiguration& c, std::size_t r) {
  const auto& R = c.relations[r];
  json j;
  j["name"] = R.name;
  j["diagonal"] = R.diagonal;
  if (R.label && b.field) j["label"] = b.field->to_string(*R.label);
  if (R.tag >= 0) j["tag"] = R.tag;
  j["row"] = sign_word(c.fibre_sign[R.row_fibre]);
  j["col"] = sign_word(c.fibre_sign[R.col_fibre]);
  j["size"] = R.size;
  j["valency"] = c.valency(static_cast<std::uint16_t>(r));
  return j;
}

json matrix_json(const std::vector<std::vector<double>>& m) {
  if (const auto r = cc::rounded(m)) return *r;
  json out = json::array();
  for (const auto& row : m) {
    json jr = json::array();
    for (const double x : row) jr.push_back(std::round(x * 1e6) / 1e6);
    out.push_back(jr);
  }
  return out;
}

std::string file_stem(const RunConfig& cfg) {
  std::string s = "conic_q" + std::to_string(cfg.q) + "_" + variant_name(cfg) + "_" + fusion_name(cfg);
  for (auto& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') c = '-';
  return s;
}

CheckResult run_one(const Build& b, const std::string& name) {
  CheckResult res;
  res.name = name;
  if (const auto why = applicability(b.cfg, name); !why.empty()) {
    res.detail["error"] = why;
    return res;
  }
  if (name == "axioms") {
    const auto mode = mode_for(b);
    const auto rep = cc::verify_axioms(b.result, mode, b.cfg.seed);
    res.pass = rep.pass();
    res.detail = {{"mode", mode == cc::VerifyMode::full ? "full" : "sampled"},
                  {"seed", rep.seed},
                  {"pairs_checked", rep.pairs_checked},
                  {"partition", rep.partition},
                  {"diagonal", rep.diagonal},
                  {"transpose", rep.transpose},
                  {"constant_parameters", rep.constant}};
    if (!rep.pass()) res.detail["counterexample"] = rep.counterexample;
  } else if (name == "closed-forms") {
    const auto rep = cc::check_closed_forms(b.base, b.conic->classes());
    res.pass = rep.pass();
    res.detail = {{"valencies_checked", rep.valencies}, {"parameters_checked", rep.parameters}};
    if (rep.mismatch) res.detail["mismatch"] = *rep.mismatch;
  } else if (name == "pseudocyclic" || name == "design") {
    const auto t = cc::intersection_tensor(b.result);
    const auto pc = cc::pseudocyclic_check(b.result, t);
    if (name == "design") {
      res.pass = pc.pass && cc::design_check(b.result, pc.t);
      res.detail = {{"v", b.result.n}, {"block_size", pc.t}, {"lambda", pc.t == 0 ? 0 : pc.t - 1}};
      if (!pc.pass) res.detail["error"] = "scheme is not pseudocyclic: " + pc.detail;
    } else {
      const auto sd = cc::spectral(b.result, 1e-8, b.cfg.seed);
      bool mult_ok = sd.ok && !sd.multiplicity.empty() && sd.multiplicity[0] == 1;
      for (std::size_t i = 1; mult_ok && i < sd.multiplicity.size(); ++i) mult_ok = sd.multiplicity[i] == pc.t;
      res.pass = pc.pass && sd.ok && mult_ok && sd.residual < 1e-6;
      res.detail = {{"t", pc.t}, {"condition", pc.pass}, {"multiplicities", sd.multiplicity},
                    {"eigen_residual_below_1e-6", sd.ok && sd.residual < 1e-6}};
      if (!pc.detail.empty()) res.detail["detail"] = pc.detail;
      if (!sd.ok) res.detail["spectral_error"] = sd.error;
    }
  } else if (name == "eigen") {
    const auto sd = cc::spectral(b.result, 1e-8, b.cfg.seed);
    const double n = b.result.n;
    res.pass = sd.ok && sd.residual < 1e-6 && sd.pq_residual < 1e-6 * n;
    res.detail = {{"multiplicities", sd.multiplicity}, {"P", matrix_json(sd.P)}, {"Q", matrix_json(sd.Q)},
                  {"eigen_residual_below_1e-6", sd.ok && sd.residual < 1e-6},
                  {"PQ_equals_nI", sd.ok && sd.pq_residual < 1e-6 * n}};
    if (!sd.ok) res.detail["error"] = sd.error;
    if (sd.ok && b.cfg.fusion == FusionKind::five && b.cfg.variant == Variant::elliptic) {
      const auto [P, Q] = fusion::elliptic_fusion_eigenmatrices(b.cfg.q);
      const bool match = fusion::match_rows(sd.P, P).has_value();
      res.detail["closed_form_P"] = P;
      res.detail["closed_form_Q"] = Q;
      res.detail["closed_form_match"] = match;
      res.pass = res.pass && match;
    }
  } else if (name == "tables") {
    const auto t = cc::intersection_tensor(b.fused);
    std::uint64_t entries = 0;
    json bad = json::array();
    for (const auto& table : fusion::tables_for(merge_of(b.cfg.fusion), b.cfg.q))
      for (const auto& e : table.entries) {
        ++entries;
        const auto got = fusion::counted_entry(b.fused, t, e.k, e.i, e.j, table.eps);
        if (!got || *got != e.value) {
          if (bad.size() < 20)
            bad.push_back({{"table", table.name}, {"eps", table.eps}, {"i", class_name(e.i)}, {"j", class_name(e.j)},
                           {"formula", e.formula}, {"closed_form", e.value},
                           {"counted", got ? json(*got) : json(nullptr)}});
          else
            bad.back()["more"] = true;
        }
      }
    res.pass = bad.empty();
    res.detail = {{"field_order", b.field->order()}, {"entries_checked", entries}, {"mismatches", bad}};
  } else if (name == "srg") {
    res.pass = true;
    for (const int eps : {-1, 1}) {
      if (!b.fused.fibre_of_sign(eps)) continue;
      if (b.cfg.variant == Variant::hyperbolic && eps < 0) continue;
      if (b.cfg.variant == Variant::elliptic && eps > 0) continue;
      const auto g = fusion::srg_graph(b.fused, eps);
      std::string why;
      const auto got = fusion::verify_srg(g, &why);
      const auto expect = fusion::srg_params(b.cfg.q, eps);
      json d = {{"expected", {expect.v, expect.k, expect.lambda, expect.mu}},
                {"edges", g.edges()},
                {"feasible", fusion::srg_feasible(expect)}};
      if (got) d["counted"] = {got->v, got->k, got->lambda, got->mu};
      else d["error"] = why;
      const bool ok = got && *got == expect && fusion::srg_feasible(expect);
      d["pass"] = ok;
      res.pass = res.pass && ok;
      res.detail[sign_word(eps)] = d;
    }
  } else if (name == "invariance") {
    const auto t = cc::intersection_tensor(b.base);
    const auto bad = fusion::frobenius_invariance(b.base, t, *b.field, b.cfg.frobenius_k);
    const auto rep = cc::verify_axioms(b.fused, mode_for(b), b.cfg.seed);
    res.pass = !bad && rep.pass();
    res.detail = {{"k", b.cfg.frobenius_k}, {"parameters_invariant", !bad}, {"fused_axioms", rep.pass()},
                  {"fused_relations", b.fused.num_relations()}};
    if (bad) res.detail["counterexample"] = *bad;
    if (!rep.pass()) res.detail["axiom_counterexample"] = rep.counterexample;
    // Reported, not asserted: whether the fused elliptic classes share one valency.
    if (const auto f = b.fused.fibre_of_sign(-1)) {
      std::vector<std::uint64_t> vals;
      for (std::size_t r = 0; r < b.fused.relations.size(); ++r) {
        const auto& R = b.fused.relations[r];
        if (!R.diagonal && R.row_fibre == *f && R.col_fibre == *f) vals.push_back(b.fused.valency(static_cast<std::uint16_t>(r)));
      }
      res.detail["elliptic_valencies"] = vals;
      res.detail["elliptic_valencies_equal"] =
          !vals.empty() && std::all_of(vals.begin(), vals.end(), [&](std::uint64_t v) { return v == vals[0]; });
    }
  }
  return res;
}

}  // namespace

void parse_variant(const std::string& s, RunConfig& cfg) {
  const auto [name, arg] = split_arg(lower(s));
  if (name == "full" && !arg) cfg.variant = Variant::full;
  else if (name == "hyperbolic" && !arg) cfg.variant = Variant::hyperbolic;
  else if (name == "elliptic" && !arg) cfg.variant = Variant::elliptic;
  else if (name == "cyclotomic" && arg) {
    cfg.variant = Variant::cyclotomic;
    cfg.cyclotomic_e = parse_u32(*arg, "cyclotomic class count");
  } else {
    throw ConfigError("unknown variant '" + s + "' (full, hyperbolic, elliptic, cyclotomic:<e>)");
  }
}

void parse_fusion(const std::string& s, RunConfig& cfg) {
  const auto [name, arg] = split_arg(lower(s));
  if (name == "none" && !arg) cfg.fusion = FusionKind::none;
  else if (name == "five" && !arg) cfg.fusion = FusionKind::five;
  else if (name == "three" && !arg) cfg.fusion = FusionKind::three;
  else if (name == "srg" && !arg) cfg.fusion = FusionKind::srg;
  else if (name == "frobenius") {
    cfg.fusion = FusionKind::frobenius;
    cfg.frobenius_k = arg ? parse_u32(*arg, "Frobenius exponent") : 1;
  } else {
    throw ConfigError("unknown fusion '" + s + "' (none, frobenius:<k>, five, three, srg)");
  }
}

Format parse_format(const std::string& s) {
  const auto l = lower(s);
  if (l == "json") return Format::json;
  if (l == "csv") return Format::csv;
  if (l == "edgelist") return Format::edgelist;
  throw ConfigError("unknown format '" + s + "' (json, csv, edgelist)");
}

std::uint64_t parse_poly(const std::string& hex_mask) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(hex_mask, &pos, 16);
    if (pos != hex_mask.size() || v == 0) throw std::invalid_argument(hex_mask);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad polynomial mask '" + hex_mask + "' (hex, e.g. 0x13 for x^4+x+1)");
  }
}

std::vector<std::string> parse_checks(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    item = lower(item);
    if (std::find(known_checks().begin(), known_checks().end(), item) == known_checks().end())
      throw ConfigError("unknown check '" + item + "'");
    out.push_back(item);
  }
  return out;
}

std::string variant_name(const RunConfig& cfg) {
  switch (cfg.variant) {
    case Variant::full:
      return "full";
    case Variant::hyperbolic:
      return "hyperbolic";
    case Variant::elliptic:
      return "elliptic";
    case Variant::cyclotomic:
      return "cyclotomic:" + std::to_string(cfg.cyclotomic_e);
  }
  return "?";
}

std::string fusion_name(const RunConfig& cfg) {
  switch (cfg.fusion) {
    case FusionKind::none:
      return "none";
    case FusionKind::frobenius:
      return "frobenius:" + std::to_string(cfg.frobenius_k);
    case FusionKind::five:
      return "five";
    case FusionKind::three:
      return "three";
    case FusionKind::srg:
      return "srg";
  }
  return "?";
}

void validate(const RunConfig& cfg) {
  const auto pp = gf::prime_power(cfg.q);
  if (!pp) throw ConfigError(std::to_string(cfg.q) + " is not a prime power");
  const auto [p, n] = *pp;
  if (cfg.poly) {
    if (p != 2) throw ConfigError("--poly is supported for characteristic 2 only");
    if (!gf::is_irreducible(2, gf::poly_from_mask(*cfg.poly)) || gf::poly_from_mask(*cfg.poly).size() != n + 1)
      throw ConfigError("polynomial " + hex(*cfg.poly) + " is not irreducible of degree " + std::to_string(n));
  }
  if (cfg.variant == Variant::cyclotomic) {
    if (cfg.fusion != FusionKind::none) throw ConfigError("fusions apply to the conic configuration only");
    const auto e = cfg.cyclotomic_e;
    if (e < 2 || (cfg.q - 1) % e != 0) throw ConfigError("cyclotomic:<e> needs 1 < e and e | q - 1");
  } else if (cfg.q > kMaxConicField) {
    throw ConfigError("conic configurations are limited to q <= " + std::to_string(kMaxConicField));
  }
  if (cfg.fusion == FusionKind::frobenius) {
    if (p != 2) throw ConfigError("Frobenius fusion needs q even");
    if (std::gcd(cfg.frobenius_k, n) != 1) throw ConfigError("Frobenius fusion needs gcd(k, r) = 1 for q = 2^r");
  }
  if (tower_fusion(cfg.fusion)) {
    if (p != 2) throw ConfigError("five/three/srg fusions need q even (the field is F_{q^2})");
    if (cfg.q > kMaxFusionBase)
      throw ConfigError("five/three/srg fusions are limited to q <= " + std::to_string(kMaxFusionBase));
  }
  if (cfg.cross_check) {
    if (cfg.variant == Variant::cyclotomic) throw ConfigError("--cross-check applies to the conic configuration");
    const std::uint64_t order = tower_fusion(cfg.fusion) ? std::uint64_t{cfg.q} * cfg.q : cfg.q;
    if (order > 16) throw ConfigError("--cross-check needs a conic field of order at most 16");
  }
  for (const auto& c : cfg.checks)
    if (const auto why = applicability(cfg, c); !why.empty()) throw ConfigError(why);
  if (cfg.format == Format::edgelist && cfg.fusion != FusionKind::srg)
    throw ConfigError("--format edgelist needs --fusion srg");
}

fs::path default_cache_dir() {
  if (const char* env = std::getenv("CONIC_SCHEMES_CACHE"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return fs::path(xdg) / "conic-schemes";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "conic-schemes";
  return fs::temp_directory_path() / "conic-schemes";
}

std::string cache_key(const RunConfig& cfg, const gf::Field& F) {
  const auto [p, n] = *gf::prime_power(cfg.q);
  std::string key = "conic-q" + std::to_string(F.order());
  if (F.is_tower()) key += "-over" + std::to_string(cfg.q);
  key += "-poly" + hex(poly_mask_of(cfg, p, n));
  key += "-formula-v" + std::to_string(kCodeVersion);
  return key;
}

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

void save_configuration(const fs::path& file, const cc::CoherentConfiguration& c, std::uint32_t q,
                        std::uint64_t poly_mask, const std::string& method) {
  Writer w;
  w.put_raw(kMagic, sizeof kMagic);
  w.put(kCodeVersion);
  w.put(q);
  w.put(poly_mask);
  w.put_string(method);
  w.put_string(c.variant);
  w.put(c.n);
  w.put(static_cast<std::uint32_t>(c.fibre_sign.size()));
  for (const int s : c.fibre_sign) w.put(static_cast<std::int32_t>(s));
  w.put_raw(c.fibre.data(), c.fibre.size());
  w.put(static_cast<std::uint32_t>(c.relations.size()));
  for (const auto& R : c.relations) {
    w.put_string(R.name);
    w.put(static_cast<std::uint8_t>(R.diagonal));
    w.put(static_cast<std::uint8_t>(R.label.has_value()));
    w.put(R.label ? R.label->index : 0u);
    w.put(static_cast<std::int32_t>(R.tag));
    w.put(R.row_fibre);
    w.put(R.col_fibre);
    w.put(static_cast<std::uint32_t>(R.parts.size()));
    w.put_raw(R.parts.data(), R.parts.size() * sizeof(std::uint16_t));
  }
  w.put_raw(c.rel.data(), c.rel.size() * sizeof(std::uint16_t));
  const auto& bytes = w.bytes();
  const std::uint64_t sum = fnv1a(bytes.data(), bytes.size());

  fs::create_directories(file.parent_path());
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.write(reinterpret_cast<const char*>(&sum), sizeof sum);
    if (!out) throw CacheError("cannot write " + tmp.string());
  }
  fs::rename(tmp, file);
}

cc::CoherentConfiguration load_configuration(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw CacheError("cannot read " + file.string());
  const std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < sizeof kMagic + sizeof(std::uint64_t)) throw CacheError("cache file is truncated");
  const std::size_t body = buf.size() - sizeof(std::uint64_t);
  std::uint64_t stored;
  std::memcpy(&stored, buf.data() + body, sizeof stored);
  if (std::memcmp(buf.data(), kMagic, sizeof kMagic) != 0) throw CacheError("not a configuration cache file");
  if (fnv1a(buf.data(), body) != stored) throw CacheError("cache checksum mismatch in " + file.string());

  Reader r(buf, body);
  char magic[sizeof kMagic];
  r.get_raw(magic, sizeof magic);
  if (r.get<std::uint32_t>() != kCodeVersion) throw CacheError("cache written by another code version");
  r.get<std::uint32_t>();  // q
  r.get<std::uint64_t>();  // polynomial mask
  r.get_string();          // method
  cc::CoherentConfiguration c;
  c.variant = r.get_string();
  c.n = r.get<std::uint32_t>();
  const auto fibres = r.get<std::uint32_t>();
  if (fibres > 255) throw CacheError("bad fibre count");
  for (std::uint32_t f = 0; f < fibres; ++f) c.fibre_sign.push_back(r.get<std::int32_t>());
  c.fibre.resize(c.n);
  r.get_raw(c.fibre.data(), c.n);
  const auto nrel = r.get<std::uint32_t>();
  if (nrel > 65536) throw CacheError("bad relation count");
  for (std::uint32_t i = 0; i < nrel; ++i) {
    cc::Relation R;
    R.name = r.get_string();
    R.diagonal = r.get<std::uint8_t>() != 0;
    const bool has_label = r.get<std::uint8_t>() != 0;
    const auto label = r.get<std::uint32_t>();
    if (has_label) R.label = gf::Elem{label};
    R.tag = r.get<std::int32_t>();
    R.row_fibre = r.get<std::uint8_t>();
    R.col_fibre = r.get<std::uint8_t>();
    R.parts.resize(r.get<std::uint32_t>());
    r.get_raw(R.parts.data(), R.parts.size() * sizeof(std::uint16_t));
    c.relations.push_back(std::move(R));
  }
  c.rel.resize(static_cast<std::size_t>(c.n) * c.n);
  r.get_raw(c.rel.data(), c.rel.size() * sizeof(std::uint16_t));
  if (!r.done()) throw CacheError("trailing bytes in cache file");
  for (const auto id : c.rel)
    if (id >= nrel) throw CacheError("relation id out of range");
  c.recount();
  return c;
}

Build cmd_build(const RunConfig& cfg) {
  validate(cfg);
  Build b;
  b.cfg = cfg;
  const auto [p, n] = *gf::prime_power(cfg.q);
  std::optional<gf::Poly> poly;
  if (cfg.poly) poly = gf::poly_from_mask(*cfg.poly);
  b.base_field = gf::Field::make(p, n, poly);

  if (cfg.variant == Variant::cyclotomic) {
    b.field = b.base_field;
    try {
      b.base = cc::build_cyclotomic(b.base_field, cfg.cyclotomic_e);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    b.fused = b.base;
    b.result = b.base;
    return b;
  }

  b.field = tower_fusion(cfg.fusion) ? gf::Field::extend(b.base_field) : b.base_field;
  b.conic.emplace(b.field);
  b.lines.emplace(b.conic->enumerate_lines());

  bool loaded = false;
  if (cfg.cache_dir) {
    const fs::path file = *cfg.cache_dir / (cache_key(cfg, *b.field) + ".ccbin");
    if (fs::exists(file)) {
      b.base = load_configuration(file);
      if (b.base.n != b.lines->lines.size()) throw CacheError("cache entry does not match the field: " + file.string());
      loaded = true;
    }
  }
  if (!loaded) {
    b.base = group::build_cc_formula(*b.conic, *b.lines);
    if (cfg.cache_dir) {
      const auto key = cache_key(cfg, *b.field);
      const fs::path file = *cfg.cache_dir / (key + ".ccbin");
      fs::create_directories(*cfg.cache_dir);
      LockFile lock(*cfg.cache_dir / (key + ".lock"));
      const auto mask = poly_mask_of(cfg, p, n);
      save_configuration(file, b.base, b.field->order(), mask, "formula");
      json desc = {{"key", key},
                   {"q", b.field->order()},
                   {"base_q", cfg.q},
                   {"poly", hex(mask)},
                   {"method", "formula"},
                   {"variant", b.base.variant},
                   {"n", b.base.n},
                   {"relations", b.base.num_relations()},
                   {"code_version", kCodeVersion}};
      std::ofstream(*cfg.cache_dir / (key + ".json")) << desc.dump(2) << '\n';
    }
  }
  b.from_cache = loaded;

  if (cfg.cross_check) {
    const auto orbit = group::build_cc_orbit(*b.conic, *b.lines);
    const auto mismatch = cc::partition_mismatch(b.base, orbit);
    json cx = {{"method", "orbit"},
               {"agree", !mismatch},
               {"formula_relations", b.base.num_relations()},
               {"orbit_relations", orbit.num_relations()},
               {"pairs", static_cast<std::uint64_t>(b.base.n) * b.base.n}};
    if (mismatch) cx["mismatch"] = *mismatch;
    b.cross_check = cx;
  }

  switch (cfg.fusion) {
    case FusionKind::none:
      b.fused = b.base;
      break;
    case FusionKind::frobenius:
      b.fused = fusion::frobenius_fusion(b.base, *b.field, cfg.frobenius_k);
      break;
    default:
      b.fused = fusion::five_class_fusion(b.base, *b.field, merge_of(cfg.fusion));
  }
  if (cfg.variant == Variant::full) {
    b.result = b.fused;
  } else {
    const int sign = cfg.variant == Variant::hyperbolic ? 1 : -1;
    const auto f = b.fused.fibre_of_sign(sign);
    if (!f) throw ConfigError("q = " + std::to_string(cfg.q) + " has no " + sign_word(sign) + " lines");
    b.result = cc::restrict_fibre(b.fused, *f);
  }
  return b;
}

std::vector<CheckResult> cmd_check(const Build& b, const std::vector<std::string>& checks) {
  std::vector<CheckResult> out;
  for (const auto& c : checks) out.push_back(run_one(b, c));
  return out;
}

bool all_pass(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

json descriptor(const Build& b) {
  const auto& c = b.result;
  json d;
  d["q"] = b.cfg.q;
  d["field_order"] = b.field->order();
  const auto [p, n] = *gf::prime_power(b.cfg.q);
  d["poly"] = hex(poly_mask_of(b.cfg, p, n));
  d["method"] = b.cfg.variant == Variant::cyclotomic ? "cyclotomic" : "formula";
  d["variant"] = variant_name(b.cfg);
  d["fusion"] = fusion_name(b.cfg);
  d["n"] = c.n;
  json fibres = json::array();
  for (std::uint8_t f = 0; f < c.num_fibres(); ++f)
    fibres.push_back({{"type", sign_word(c.fibre_sign[f])}, {"size", c.fibre_size(f)}});
  d["fibres"] = fibres;
  std::size_t classes = 0;
  json rels = json::array();
  for (std::size_t r = 0; r < c.relations.size(); ++r) {
    classes += !c.relations[r].diagonal;
    rels.push_back(relation_json(b, c, r));
  }
  d["classes"] = classes;
  d["relations"] = rels;
  return d;
}

json report_json(const Build& b, const std::vector<CheckResult>& results) {
  json j;
  j["schema"] = kReportSchema;
  j["code_version"] = kCodeVersion;
  j["configuration"] = descriptor(b);
  j["seed"] = b.cfg.seed;
  json checks = json::object();
  for (const auto& r : results) {
    json d = r.detail.is_null() ? json::object() : r.detail;
    d["pass"] = r.pass;
    checks[r.name] = d;
  }
  j["checks"] = checks;
  if (b.cross_check) j["cross_check"] = *b.cross_check;
  bool pass = all_pass(results);
  if (b.cross_check) pass = pass && (*b.cross_check)["agree"].get<bool>();
  j["pass"] = pass;
  return j;
}

std::string report_csv(const Build& b) {
  std::ostringstream os;
  if (tower_fusion(b.cfg.fusion)) {
    const auto t = cc::intersection_tensor(b.fused);
    os << "table,eps,k,i,j,formula,closed_form,counted,match\n";
    for (const auto& table : fusion::tables_for(merge_of(b.cfg.fusion), b.cfg.q))
      for (const auto& e : table.entries) {
        const auto got = fusion::counted_entry(b.fused, t, e.k, e.i, e.j, table.eps);
        os << '"' << table.name << "\"," << table.eps << ",\"" << class_name(e.k) << "\",\"" << class_name(e.i)
           << "\",\"" << class_name(e.j) << "\",\"" << e.formula << "\"," << e.value << ',';
        if (got) os << *got;
        os << ',' << (got && *got == e.value ? "yes" : "no") << '\n';
      }
    return os.str();
  }
  const auto& c = b.result;
  os << "relation,label,row,col,size,valency\n";
  for (std::size_t r = 0; r < c.relations.size(); ++r) {
    const auto& R = c.relations[r];
    os << '"' << R.name << "\",";
    if (R.label) os << b.field->to_string(*R.label);
    os << ',' << sign_word(c.fibre_sign[R.row_fibre]) << ',' << sign_word(c.fibre_sign[R.col_fibre]) << ','
       << R.size << ',' << c.valency(static_cast<std::uint16_t>(r)) << '\n';
  }
  return os.str();
}

std::vector<fs::path> cmd_report(const Build& b, const std::vector<CheckResult>& results) {
  fs::create_directories(b.cfg.out_dir);
  const auto stem = file_stem(b.cfg);
  std::vector<fs::path> written;
  auto write = [&](const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw std::runtime_error("cannot write " + p.string());
    written.push_back(p);
  };
  switch (b.cfg.format) {
    case Format::json:
      write(b.cfg.out_dir / (stem + ".json"), report_json(b, results).dump(2) + "\n");
      break;
    case Format::csv:
      write(b.cfg.out_dir / (stem + ".csv"), report_csv(b));
      break;
    case Format::edgelist:
      for (const int eps : {-1, 1}) {
        if (!b.fused.fibre_of_sign(eps)) continue;
        if (b.cfg.variant == Variant::hyperbolic && eps < 0) continue;
        if (b.cfg.variant == Variant::elliptic && eps > 0) continue;
        write(b.cfg.out_dir / (stem + "_" + sign_word(eps) + ".edgelist"),
              fusion::edgelist(fusion::srg_graph(b.fused, eps)));
      }
      break;
  }
  return written;
}

std::size_t cmd_clean_cache(const fs::path& dir) {
  std::size_t removed = 0;
  if (!fs::exists(dir)) return 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name.rfind("conic-", 0) != 0) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".ccbin" || ext == ".json" || ext == ".lock" || ext == ".tmp") removed += fs::remove(entry.path());
  }
  return removed;
}

}  // namespace conic::cli
