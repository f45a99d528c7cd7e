#include "conic/coherent.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace conic::cc {

std::vector<std::uint32_t> CoherentConfiguration::members(std::uint8_t f) const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < n; ++i)
    if (fibre[i] == f) out.push_back(i);
  return out;
}

std::uint32_t CoherentConfiguration::fibre_size(std::uint8_t f) const {
  return static_cast<std::uint32_t>(std::count(fibre.begin(), fibre.end(), f));
}

std::uint64_t CoherentConfiguration::valency(std::uint16_t r) const {
  const std::uint32_t s = fibre_size(relations.at(r).row_fibre);
  return s == 0 ? 0 : relations[r].size / s;
}

std::optional<std::uint16_t> CoherentConfiguration::find(Elem label, std::uint8_t row, std::uint8_t col) const {
  for (std::size_t r = 0; r < relations.size(); ++r) {
    const auto& R = relations[r];
    if (R.label && *R.label == label && R.row_fibre == row && R.col_fibre == col)
      return static_cast<std::uint16_t>(r);
  }
  return std::nullopt;
}

std::optional<std::uint8_t> CoherentConfiguration::fibre_of_sign(int sign) const {
  for (std::size_t f = 0; f < fibre_sign.size(); ++f)
    if (fibre_sign[f] == sign) return static_cast<std::uint8_t>(f);
  return std::nullopt;
}

void CoherentConfiguration::recount() {
  for (auto& R : relations) R.size = 0;
  for (const auto r : rel) ++relations.at(r).size;
}

std::optional<std::string> partition_mismatch(const CoherentConfiguration& a, const CoherentConfiguration& b) {
  if (a.n != b.n) return "ground sets differ in size";
  std::vector<int> ab(a.relations.size(), -1), ba(b.relations.size(), -1);
  for (std::uint32_t i = 0; i < a.n; ++i)
    for (std::uint32_t j = 0; j < a.n; ++j) {
      const auto x = a.at(i, j), y = b.at(i, j);
      if (ab[x] < 0) ab[x] = y;
      if (ba[y] < 0) ba[y] = x;
      if (ab[x] != y || ba[y] != x) {
        std::ostringstream os;
        os << "pair (" << i << "," << j << ") splits relation " << x << " vs " << y;
        return os.str();
      }
    }
  return std::nullopt;
}

std::vector<std::uint16_t> transpose_map(const CoherentConfiguration& cc) {
  std::vector<int> t(cc.relations.size(), -1);
  for (std::uint32_t i = 0; i < cc.n; ++i)
    for (std::uint32_t j = 0; j < cc.n; ++j) {
      const auto r = cc.at(i, j), s = cc.at(j, i);
      if (t[r] < 0) t[r] = s;
      if (t[r] != s) {
        std::ostringstream os;
        os << "transpose of relation " << r << " meets relations " << t[r] << " and " << s;
        throw std::invalid_argument(os.str());
      }
    }
  std::vector<std::uint16_t> out(t.size());
  for (std::size_t r = 0; r < t.size(); ++r) out[r] = static_cast<std::uint16_t>(t[r] < 0 ? r : t[r]);
  return out;
}

bool is_symmetric(const CoherentConfiguration& cc) {
  for (std::uint32_t i = 0; i < cc.n; ++i)
    for (std::uint32_t j = i + 1; j < cc.n; ++j)
      if (cc.at(i, j) != cc.at(j, i)) return false;
  return true;
}

namespace {

struct Representative {
  std::uint32_t x = 0, y = 0;
  bool found = false;
};

std::vector<Representative> representatives(const CoherentConfiguration& cc) {
  std::vector<Representative> reps(cc.relations.size());
  std::size_t missing = reps.size();
  for (std::uint32_t i = 0; i < cc.n && missing; ++i)
    for (std::uint32_t j = 0; j < cc.n && missing; ++j) {
      auto& rep = reps[cc.at(i, j)];
      if (!rep.found) {
        rep = {i, j, true};
        --missing;
      }
    }
  return reps;
}

ParamTensor tensor_from(const CoherentConfiguration& cc, const std::vector<Representative>& reps) {
  ParamTensor t;
  t.r = cc.relations.size();
  const std::size_t R = t.r;
  t.p.assign(R * R * R, 0);
  for (std::size_t k = 0; k < R; ++k) {
    if (!reps[k].found) continue;
    const std::uint32_t x = reps[k].x, y = reps[k].y;
    for (std::uint32_t z = 0; z < cc.n; ++z) ++t.p[(cc.at(x, z) * R + cc.at(z, y)) * R + k];
  }
  for (std::size_t f = 0; f < cc.num_fibres(); ++f) t.fibre_size.push_back(cc.fibre_size(static_cast<std::uint8_t>(f)));
  for (std::size_t r = 0; r < R; ++r) t.valency.push_back(cc.valency(static_cast<std::uint16_t>(r)));
  return t;
}

// Compares the pair (x, y) against the tensor; scratch is an all-zero R*R
// buffer on entry and on exit.
bool pair_constant(const CoherentConfiguration& cc, const ParamTensor& t, std::uint32_t x, std::uint32_t y,
                   std::vector<std::uint32_t>& scratch, std::string& why) {
  const std::size_t R = t.r;
  const std::size_t k = cc.at(x, y);
  for (std::uint32_t z = 0; z < cc.n; ++z) ++scratch[cc.at(x, z) * R + cc.at(z, y)];
  bool ok = true;
  for (std::uint32_t z = 0; z < cc.n; ++z) {
    const std::size_t cell = cc.at(x, z) * R + cc.at(z, y);
    if (ok && scratch[cell] != t.p[cell * R + k]) {
      std::ostringstream os;
      os << "pair (" << x << "," << y << ") in relation " << k << " has " << scratch[cell] << " paths through ("
         << cell / R << "," << cell % R << "), representative has " << t.p[cell * R + k];
      why = os.str();
      ok = false;
    }
  }
  for (std::uint32_t z = 0; z < cc.n; ++z) scratch[cc.at(x, z) * R + cc.at(z, y)] = 0;
  return ok;
}

}  // namespace

AxiomReport verify_axioms(const CoherentConfiguration& cc, VerifyMode mode, std::uint64_t seed,
                          std::uint32_t samples) {
  AxiomReport rep;
  rep.mode = mode;
  rep.seed = seed;
  const std::size_t R = cc.relations.size();

  rep.partition = cc.rel.size() == static_cast<std::size_t>(cc.n) * cc.n && cc.fibre.size() == cc.n;
  std::vector<std::uint64_t> counts(R, 0);
  if (rep.partition) {
    for (const auto r : cc.rel) {
      if (r >= R) {
        rep.partition = false;
        rep.counterexample = "relation id out of range";
        return rep;
      }
      ++counts[r];
    }
    for (std::size_t r = 0; r < R && rep.partition; ++r)
      if (counts[r] == 0 || counts[r] != cc.relations[r].size) {
        rep.partition = false;
        rep.counterexample = "relation " + std::to_string(r) + " is empty or has a stale size";
      }
  } else {
    rep.counterexample = "matrix or fibre vector has the wrong size";
  }
  if (!rep.partition) return rep;

  rep.diagonal = true;
  for (std::uint32_t i = 0; i < cc.n && rep.diagonal; ++i)
    for (std::uint32_t j = 0; j < cc.n; ++j) {
      const auto& Rl = cc.relations[cc.at(i, j)];
      if (Rl.diagonal != (i == j) || Rl.row_fibre != cc.fibre[i] || Rl.col_fibre != cc.fibre[j]) {
        std::ostringstream os;
        os << "pair (" << i << "," << j << ") breaks the diagonal or fibre structure";
        rep.counterexample = os.str();
        rep.diagonal = false;
        break;
      }
    }
  if (!rep.diagonal) return rep;

  try {
    transpose_map(cc);
    rep.transpose = true;
  } catch (const std::invalid_argument& e) {
    rep.counterexample = e.what();
    return rep;
  }

  const auto reps = representatives(cc);
  const ParamTensor t = tensor_from(cc, reps);
  std::vector<std::uint32_t> scratch(R * R, 0);
  rep.constant = true;
  if (mode == VerifyMode::full) {
    for (std::uint32_t x = 0; x < cc.n && rep.constant; ++x)
      for (std::uint32_t y = 0; y < cc.n; ++y) {
        ++rep.pairs_checked;
        if (!pair_constant(cc, t, x, y, scratch, rep.counterexample)) {
          rep.constant = false;
          break;
        }
      }
    return rep;
  }

  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::uint32_t>> fibres(cc.num_fibres());
  for (std::size_t f = 0; f < fibres.size(); ++f) fibres[f] = cc.members(static_cast<std::uint8_t>(f));
  std::vector<std::uint32_t> row;
  for (std::size_t k = 0; k < R && rep.constant; ++k) {
    const auto& Rl = cc.relations[k];
    const auto& rows = fibres[Rl.row_fibre];
    if (cc.relations[k].size <= samples) {
      for (std::uint32_t x : rows)
        for (std::uint32_t y = 0; y < cc.n && rep.constant; ++y) {
          if (cc.at(x, y) != k) continue;
          ++rep.pairs_checked;
          rep.constant = pair_constant(cc, t, x, y, scratch, rep.counterexample);
        }
      continue;
    }
    std::uniform_int_distribution<std::size_t> pick_row(0, rows.size() - 1);
    for (std::uint32_t s = 0; s < samples && rep.constant; ++s) {
      const std::uint32_t x = rows[pick_row(rng)];
      row.clear();
      for (std::uint32_t y = 0; y < cc.n; ++y)
        if (cc.at(x, y) == k) row.push_back(y);
      std::uniform_int_distribution<std::size_t> pick(0, row.size() - 1);
      const std::uint32_t y = row[pick(rng)];
      ++rep.pairs_checked;
      rep.constant = pair_constant(cc, t, x, y, scratch, rep.counterexample);
    }
  }
  return rep;
}

CoherentConfiguration restrict_fibre(const CoherentConfiguration& cc, std::uint8_t fibre) {
  const auto pts = cc.members(fibre);
  std::vector<int> remap(cc.relations.size(), -1);
  std::vector<std::uint16_t> used;
  for (std::uint32_t x : pts)
    for (std::uint32_t y : pts) {
      const auto r = cc.at(x, y);
      if (remap[r] < 0) {
        remap[r] = 0;
        used.push_back(r);
      }
    }
  std::sort(used.begin(), used.end(), [&](std::uint16_t a, std::uint16_t b) {
    if (cc.relations[a].diagonal != cc.relations[b].diagonal) return cc.relations[a].diagonal;
    return a < b;
  });
  CoherentConfiguration out;
  out.n = static_cast<std::uint32_t>(pts.size());
  out.fibre.assign(out.n, 0);
  out.fibre_sign = {cc.fibre_sign.at(fibre)};
  out.variant = cc.variant;
  for (std::size_t i = 0; i < used.size(); ++i) {
    remap[used[i]] = static_cast<int>(i);
    Relation R = cc.relations[used[i]];
    R.row_fibre = R.col_fibre = 0;
    R.parts = {used[i]};
    out.relations.push_back(R);
  }
  out.rel.resize(static_cast<std::size_t>(out.n) * out.n);
  for (std::uint32_t i = 0; i < out.n; ++i)
    for (std::uint32_t j = 0; j < out.n; ++j)
      out.rel[static_cast<std::size_t>(i) * out.n + j] = static_cast<std::uint16_t>(remap[cc.at(pts[i], pts[j])]);
  out.recount();
  if (!is_symmetric(out)) throw std::invalid_argument("restriction to the fibre is not symmetric");
  return out;
}

ParamTensor intersection_tensor(const CoherentConfiguration& cc) { return tensor_from(cc, representatives(cc)); }

std::int64_t closed_form_valency(const gf::TraceClasses& k, Elem a, int eps) {
  const gf::Field& F = *k.field;
  const auto q = static_cast<std::int64_t>(F.order());
  const Elem meet = F.even() ? F.zero() : F.inv(F.from_int(4));
  if (a == meet) {
    if (eps != 1) throw std::invalid_argument("lines meeting on the conic are both hyperbolic");
    return 2 * (q - 1);
  }
  if (!F.even() && a.index == 0) return (q - eps) / 2;
  return q - eps;
}

std::int64_t closed_form_pi(const gf::TraceClasses& k, Elem a, Elem b, Elem c, int eps) {
  const gf::Field& F = *k.field;
  if (!F.even()) throw std::invalid_argument("closed-form intersection numbers need q even");
  const auto q = static_cast<std::int64_t>(F.order());
  const Elem s = F.add(F.add(a, b), c);
  if (F.trace_bit(s) == 1) return 0;
  if (c.index == 0) {
    if (eps == -1) return 0;
    if (a.index == 0 && b.index == 0) return q + 1;
    if (a == b) return 1;
    return 2;
  }
  const unsigned e = eps == 1 ? 0 : 1;
  const auto& te = e == 0 ? k.t0 : k.t1;
  const Elem v = te.front();
  std::int64_t total = 0;
  for (const Elem tau : F.solve_quadratic(F.one(), F.one(), s)) {
    if (tau.index == 0) {
      total += 1;
      continue;
    }
    const Elem w = F.add(v, F.div(F.mul(a, c), F.square(tau)));
    total += F.trace_bit(w) == 0 ? 2 : 0;
  }
  return total;
}

std::int64_t closed_form_p(const gf::TraceClasses& k, Elem a, Elem b, Elem c, int eps) {
  std::int64_t p = closed_form_pi(k, a, b, c, eps);
  if (a.index == 0 && b == c) --p;
  if (b.index == 0 && a == c) --p;
  return p;
}

std::int64_t counted_p(const CoherentConfiguration& cc, const ParamTensor& t, Elem a, Elem b, std::uint16_t k) {
  const auto& K = cc.relations.at(k);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < cc.relations.size(); ++i) {
    const auto& I = cc.relations[i];
    if (!I.label || *I.label != a || I.row_fibre != K.row_fibre) continue;
    for (std::size_t j = 0; j < cc.relations.size(); ++j) {
      const auto& J = cc.relations[j];
      if (!J.label || *J.label != b || J.row_fibre != I.col_fibre || J.col_fibre != K.col_fibre) continue;
      total += t.at(i, j, k);
    }
  }
  return total;
}

std::vector<std::int64_t> counted_p_table(const CoherentConfiguration& cc, const ParamTensor& t, std::uint16_t k,
                                          std::uint32_t q) {
  const auto& K = cc.relations.at(k);
  std::vector<std::int64_t> out(static_cast<std::size_t>(q) * q, 0);
  for (std::size_t i = 0; i < cc.relations.size(); ++i) {
    const auto& I = cc.relations[i];
    if (!I.label || I.row_fibre != K.row_fibre) continue;
    for (std::size_t j = 0; j < cc.relations.size(); ++j) {
      const auto& J = cc.relations[j];
      if (!J.label || J.row_fibre != I.col_fibre || J.col_fibre != K.col_fibre) continue;
      out[static_cast<std::size_t>(I.label->index) * q + J.label->index] += t.at(i, j, k);
    }
  }
  return out;
}

ClosedFormReport check_closed_forms(const CoherentConfiguration& cc, const gf::TraceClasses& k) {
  ClosedFormReport rep;
  const gf::Field& F = *k.field;
  for (std::size_t r = 0; r < cc.relations.size(); ++r) {
    const auto& R = cc.relations[r];
    if (!R.label) continue;
    const int eps = cc.fibre_sign[R.row_fibre];
    const auto counted = static_cast<std::int64_t>(cc.valency(static_cast<std::uint16_t>(r)));
    const auto expect = closed_form_valency(k, *R.label, eps);
    ++rep.valencies;
    if (counted != expect) {
      rep.mismatch = "valency of " + R.name + ": counted " + std::to_string(counted) + ", closed form " +
                     std::to_string(expect);
      return rep;
    }
  }
  if (!F.even()) return rep;
  const auto t = intersection_tensor(cc);
  const std::uint32_t q = F.order();
  for (std::size_t r = 0; r < cc.relations.size(); ++r) {
    const auto& K = cc.relations[r];
    if (!K.label) continue;
    const int eps = cc.fibre_sign[K.row_fibre];
    const auto table = counted_p_table(cc, t, static_cast<std::uint16_t>(r), q);
    for (const Elem a : F.elements())
      for (const Elem b : F.elements()) {
        const auto counted = table[static_cast<std::size_t>(a.index) * q + b.index];
        const auto expect = closed_form_p(k, a, b, *K.label, eps);
        ++rep.parameters;
        if (counted != expect) {
          rep.mismatch = "p^c_{a,b} for c = " + F.to_string(*K.label) + ", a = " + F.to_string(a) + ", b = " +
                         F.to_string(b) + ", eps = " + std::to_string(eps) + ": counted " + std::to_string(counted) +
                         ", closed form " + std::to_string(expect);
          return rep;
        }
      }
  }
  return rep;
}

SpectralData spectral(const CoherentConfiguration& scheme, double tol, std::uint64_t seed) {
  SpectralData out;
  if (scheme.num_fibres() != 1 || !is_symmetric(scheme)) {
    out.error = "spectral analysis needs a symmetric association scheme";
    return out;
  }
  const Eigen::Index n = scheme.n;
  const std::size_t d = scheme.relations.size();
  std::vector<Eigen::MatrixXd> A(d, Eigen::MatrixXd::Zero(n, n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      A[scheme.at(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j))](i, j) = 1.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(1.0, 2.0);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < d; ++j) M += coef(rng) * A[j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) {
    out.error = "eigensolver failed";
    return out;
  }
  const auto& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());

  std::vector<std::pair<Eigen::Index, Eigen::Index>> clusters;  // [begin, end)
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i + 1;
    while (j < n && ev(j) - ev(j - 1) <= tol * scale) ++j;
    clusters.push_back({i, j});
    i = j;
  }
  if (clusters.size() != d) {
    std::ostringstream os;
    os << "found " << clusters.size() << " eigenvalue clusters for " << d << " relations";
    out.error = os.str();
    return out;
  }
  for (std::size_t c = 0; c + 1 < clusters.size(); ++c) {
    const double gap = ev(clusters[c + 1].first) - ev(clusters[c].second - 1);
    if (gap < 1e3 * tol * scale) {
      out.error = "eigenvalue clusters are not separated at the given tolerance";
      return out;
    }
  }

  struct Space {
    std::vector<double> row;
    std::uint32_t dim;
    bool trivial;
  };
  std::vector<Space> spaces;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  for (const auto& [b, e] : clusters) {
    const Eigen::MatrixXd U = es.eigenvectors().middleCols(b, e - b);
    Space s;
    s.dim = static_cast<std::uint32_t>(e - b);
    s.trivial = (U.transpose() * ones).norm() > 0.5;
    for (std::size_t j = 0; j < d; ++j) {
      const Eigen::MatrixXd AU = A[j] * U;
      const double theta = (U.transpose() * AU).trace() / s.dim;
      out.residual = std::max(out.residual, (AU - theta * U).norm());
      s.row.push_back(theta);
    }
    spaces.push_back(std::move(s));
  }
  std::stable_sort(spaces.begin(), spaces.end(), [](const Space& a, const Space& b) {
    if (a.trivial != b.trivial) return a.trivial;
    for (std::size_t j = 1; j < a.row.size(); ++j)
      if (std::abs(a.row[j] - b.row[j]) > 1e-6) return a.row[j] > b.row[j];
    return false;
  });
  if (!spaces.front().trivial) {
    out.error = "no eigenspace contains the all-ones vector";
    return out;
  }

  Eigen::MatrixXd P(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    out.P.push_back(spaces[i].row);
    out.multiplicity.push_back(spaces[i].dim);
    for (std::size_t j = 0; j < d; ++j) P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = spaces[i].row[j];
  }
  const Eigen::MatrixXd Q = static_cast<double>(n) * P.inverse();
  out.Q.assign(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) out.Q[i][j] = Q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  out.pq_residual =
      (P * Q - static_cast<double>(n) * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)))
          .cwiseAbs()
          .maxCoeff();
  out.ok = true;
  return out;
}

std::optional<std::vector<std::vector<std::int64_t>>> rounded(const std::vector<std::vector<double>>& m, double tol) {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& row : m) {
    out.emplace_back();
    for (const double x : row) {
      const double r = std::round(x);
      if (std::abs(x - r) > tol) return std::nullopt;
      out.back().push_back(static_cast<std::int64_t>(r));
    }
  }
  return out;
}

PseudocyclicReport pseudocyclic_check(const CoherentConfiguration& scheme, const ParamTensor& t) {
  PseudocyclicReport rep;
  std::vector<std::size_t> nondiag;
  for (std::size_t r = 0; r < scheme.relations.size(); ++r)
    if (!scheme.relations[r].diagonal) nondiag.push_back(r);
  if (scheme.num_fibres() != 1 || nondiag.empty()) {
    rep.detail = "needs an association scheme with at least one class";
    return rep;
  }
  rep.t = t.valency[nondiag.front()];
  for (const auto j : nondiag)
    if (t.valency[j] != rep.t) {
      std::ostringstream os;
      os << "valencies differ: " << rep.t << " and " << t.valency[j];
      rep.detail = os.str();
      return rep;
    }
  for (const auto j : nondiag) {
    std::uint64_t s = 0;
    for (const auto k : nondiag) s += t.at(k, j, k);
    if (s + 1 != rep.t) {
      std::ostringstream os;
      os << "sum_k p^k_{k," << j << "} = " << s << ", expected " << rep.t - 1;
      rep.detail = os.str();
      return rep;
    }
  }
  rep.pass = true;
  rep.detail = "t = " + std::to_string(rep.t);
  return rep;
}

bool design_check(const CoherentConfiguration& scheme, std::uint64_t t) {
  if (t == 0) return false;
  for (std::uint32_t x = 0; x < scheme.n; ++x)
    for (std::uint32_t y = 0; y < scheme.n; ++y) {
      const auto r = scheme.at(x, y);
      if (!scheme.relations[r].diagonal && scheme.valency(r) != t) return false;
    }
  // Blocks R_i(x) contain y and z iff x is related to both by the same
  // non-diagonal relation.
  for (std::uint32_t y = 0; y < scheme.n; ++y)
    for (std::uint32_t z = y + 1; z < scheme.n; ++z) {
      std::uint64_t blocks = 0;
      for (std::uint32_t x = 0; x < scheme.n; ++x) {
        const auto r = scheme.at(x, y);
        blocks += !scheme.relations[r].diagonal && r == scheme.at(x, z);
      }
      if (blocks != t - 1) return false;
    }
  return true;
}

CoherentConfiguration build_cyclotomic(const gf::FieldPtr& field, std::uint32_t e) {
  const gf::Field& F = *field;
  const std::uint32_t q = F.order();
  if (e <= 1 || (q - 1) % e != 0) throw std::invalid_argument("e must satisfy 1 < e and e | q - 1");
  if (F.log(F.neg(F.one())) % e != 0) throw std::invalid_argument("-1 is not an e-th power; relations not symmetric");
  CoherentConfiguration cc;
  cc.n = q;
  cc.fibre.assign(q, 0);
  cc.fibre_sign = {0};
  cc.variant = "cyclotomic:" + std::to_string(e);
  Relation diag;
  diag.name = "diag";
  diag.diagonal = true;
  cc.relations.push_back(diag);
  for (std::uint32_t i = 0; i < e; ++i) {
    Relation R;
    R.name = "C" + std::to_string(i);
    R.tag = static_cast<int>(i);
    cc.relations.push_back(R);
  }
  cc.rel.resize(static_cast<std::size_t>(q) * q);
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t y = 0; y < q; ++y) {
      const Elem d = F.sub(F.element(x), F.element(y));
      cc.rel[static_cast<std::size_t>(x) * q + y] =
          d.index == 0 ? 0 : static_cast<std::uint16_t>(1 + F.log(d) % e);
    }
  cc.recount();
  return cc;
}

}  // namespace conic::cc
