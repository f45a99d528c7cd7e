#include "conic/gf.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace conic::gf {

namespace {

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  // p is prime and small; Fermat.
  std::uint64_t r = 1, b = a % p;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<std::uint32_t>(r);
}

// Remainder of a modulo b over GF(p); b nonzero.
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint32_t lead_inv = inv_mod(b.back(), p);
  while (a.size() > db) {
    const std::uint32_t coef = static_cast<std::uint32_t>(
        static_cast<std::uint64_t>(a.back()) * lead_inv % p);
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      const std::uint64_t sub = static_cast<std::uint64_t>(coef) * b[i] % p;
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

std::vector<std::uint32_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(static_cast<std::uint32_t>(d));
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(static_cast<std::uint32_t>(n));
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::optional<std::pair<std::uint32_t, unsigned>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  const auto f = prime_factors(q);
  if (f.size() != 1) return std::nullopt;
  unsigned n = 0;
  for (std::uint64_t r = q; r > 1; r /= f[0]) ++n;
  return std::make_pair(f[0], n);
}

bool is_irreducible(std::uint32_t p, const Poly& f_in) {
  Poly f = f_in;
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t n = f.size() - 1;
  if (n == 1) return true;
  // Trial division by every monic polynomial of degree 1..n/2.
  for (std::size_t d = 1; d <= n / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t c = 0; c < count; ++c) {
      Poly g(d + 1, 0);
      g[d] = 1;
      std::uint64_t t = c;
      for (std::size_t i = 0; i < d; ++i, t /= p) g[i] = static_cast<std::uint32_t>(t % p);
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

Poly poly_from_mask(std::uint64_t mask) {
  Poly f;
  for (; mask; mask >>= 1) f.push_back(static_cast<std::uint32_t>(mask & 1));
  return f;
}

std::uint64_t mask_from_poly(const Poly& f) {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] & 1) m |= std::uint64_t{1} << i;
  return m;
}

Poly default_polynomial(std::uint32_t p, unsigned n) {
  if (n == 1) return {0, 1};  // x
  if (p == 2) {
    static constexpr std::uint64_t kMasks[] = {
        0,      0,     0x7,   0xB,   0x13,  0x25,  0x43,
        0x83,   0x11D, 0x211, 0x409, 0x805, 0x1053};
    if (n < std::size(kMasks)) return poly_from_mask(kMasks[n]);
  }
  // First monic irreducible polynomial in enumeration order.
  std::uint64_t count = 1;
  for (unsigned i = 0; i < n; ++i) count *= p;
  for (std::uint64_t c = 0; c < count; ++c) {
    Poly g(n + 1, 0);
    g[n] = 1;
    std::uint64_t t = c;
    for (unsigned i = 0; i < n; ++i, t /= p) g[i] = static_cast<std::uint32_t>(t % p);
    if (is_irreducible(p, g)) return g;
  }
  throw std::logic_error("no irreducible polynomial found");
}

FieldPtr Field::make(std::uint32_t p, unsigned n, std::optional<Poly> poly) {
  if (!is_prime(p)) throw std::invalid_argument("characteristic " + std::to_string(p) + " is not prime");
  if (n == 0) throw std::invalid_argument("extension degree must be at least 1");
  Poly f = poly ? *poly : default_polynomial(p, n);
  for (auto& c : f) c %= p;
  trim(f);
  if (f.size() != n + 1)
    throw std::invalid_argument("defining polynomial must have degree " + std::to_string(n));
  if (!is_irreducible(p, f)) throw std::invalid_argument("defining polynomial is reducible");
  // Normalize to monic.
  const std::uint32_t li = inv_mod(f.back(), p);
  for (auto& c : f) c = static_cast<std::uint32_t>(static_cast<std::uint64_t>(c) * li % p);

  std::shared_ptr<Field> F(new Field());
  F->p_ = p;
  F->degree_ = n;
  F->order_ = 1;
  for (unsigned i = 0; i < n; ++i) F->order_ *= p;
  F->poly_ = std::move(f);
  F->build_tables();
  return F;
}

FieldPtr Field::extend(const FieldPtr& base) {
  std::shared_ptr<Field> F(new Field());
  F->p_ = base->p_;
  F->degree_ = base->degree_ * 2;
  F->order_ = base->order_ * base->order_;
  F->parent_ = base;
  if (base->even()) {
    std::optional<Elem> nu;
    for (const Elem x : base->elements())
      if (base->trace_bit(x) == 1) {
        nu = x;
        break;
      }
    F->s1_ = base->one();
    F->s0_ = *nu;
  } else {
    std::optional<Elem> nu;
    for (const Elem x : base->elements())
      if (x.index != 0 && !base->is_square(x)) {
        nu = x;
        break;
      }
    F->s1_ = base->zero();
    F->s0_ = base->neg(*nu);
  }
  // The step polynomial must have no root in the base.
  for (const Elem x : base->elements()) {
    const Elem v = base->add(base->add(base->mul(x, x), base->mul(F->s1_, x)), F->s0_);
    if (v.index == 0) throw std::logic_error("tower step polynomial is reducible");
  }
  F->build_tables();
  return F;
}

Elem Field::slow_mul(Elem a, Elem b) const {
  if (parent_) {
    const Field& B = *parent_;
    const std::uint32_t q = B.order_;
    const Elem a0{a.index % q}, a1{a.index / q};
    const Elem b0{b.index % q}, b1{b.index / q};
    // (a0 + a1 y)(b0 + b1 y) with y^2 = -s1 y - s0.
    const Elem hh = B.mul(a1, b1);
    const Elem c0 = B.sub(B.mul(a0, b0), B.mul(hh, s0_));
    const Elem c1 = B.sub(B.add(B.mul(a0, b1), B.mul(a1, b0)), B.mul(hh, s1_));
    return {c0.index + q * c1.index};
  }
  const auto ca = coordinates(a), cb = coordinates(b);
  Poly prod(2 * degree_, 0);
  for (unsigned i = 0; i < degree_; ++i)
    for (unsigned j = 0; j < degree_; ++j)
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(ca[i]) * cb[j]) % p_);
  const Poly r = poly_mod(prod, poly_, p_);
  std::uint32_t idx = 0;
  for (std::size_t i = r.size(); i-- > 0;) idx = idx * p_ + r[i];
  return {idx};
}

Elem Field::slow_pow(Elem a, std::uint64_t e) const {
  Elem r = one();
  for (; e; e >>= 1) {
    if (e & 1) r = slow_mul(r, a);
    a = slow_mul(a, a);
  }
  return r;
}

void Field::build_tables() {
  const std::uint32_t q = order_;
  neg_.resize(q);
  if (p_ != 2) {
    add_.resize(static_cast<std::size_t>(q) * q);
    for (std::uint32_t a = 0; a < q; ++a) {
      std::uint32_t na = 0, mul = 1;
      for (std::uint32_t t = a; t; t /= p_, mul *= p_) na += ((p_ - t % p_) % p_) * mul;
      neg_[a] = na;
      for (std::uint32_t b = 0; b < q; ++b) {
        std::uint32_t s = 0, m = 1;
        for (std::uint32_t x = a, y = b, i = 0; i < degree_; ++i, x /= p_, y /= p_, m *= p_)
          s += ((x % p_ + y % p_) % p_) * m;
        add_[static_cast<std::size_t>(a) * q + b] = s;
      }
    }
  } else {
    for (std::uint32_t a = 0; a < q; ++a) neg_[a] = a;
  }

  const auto factors = prime_factors(q - 1);
  bool found = false;
  for (std::uint32_t g = 1; g < q && !found; ++g) {
    if (slow_pow({g}, q - 1) != one()) continue;
    bool primitive = true;
    for (const auto f : factors)
      if (slow_pow({g}, (q - 1) / f) == one()) primitive = false;
    if (primitive) {
      primitive_ = {g};
      found = true;
    }
  }
  if (!found) throw std::logic_error("no primitive element: not a field");
  exp_.assign(2 * (q - 1), 0);
  log_.assign(q, 0);
  Elem x = one();
  for (std::uint32_t i = 0; i < q - 1; ++i) {
    exp_[i] = exp_[i + q - 1] = x.index;
    log_[x.index] = i;
    x = slow_mul(x, primitive_);
  }

  trace_.assign(q, 0);
  for (std::uint32_t a = 0; a < q; ++a) {
    Elem t = zero(), y{a};
    for (unsigned i = 0; i < degree_; ++i) {
      t = add(t, y);
      y = pow(y, p_);
    }
    trace_[a] = t.index;
  }

  if (p_ != 2) {
    sqrt_.assign(q, -1);
    for (std::uint32_t a = q; a-- > 0;) sqrt_[mul({a}, {a}).index] = a;
  } else {
    // z = sum_i w_i c^{2^i}, w_i = sum_{j>i} delta^{2^j}, solves z^2 + z = c
    // whenever Tr(c) = 0; delta is any element of trace 1.
    Elem delta{};
    for (std::uint32_t a = 0; a < q; ++a)
      if (trace_[a] == 1) {
        delta = {a};
        break;
      }
    std::vector<Elem> dpow(degree_);
    Elem d = delta;
    for (unsigned j = 0; j < degree_; ++j, d = mul(d, d)) dpow[j] = d;
    solver_weights_.assign(degree_, zero());
    for (unsigned i = 0; i < degree_; ++i)
      for (unsigned j = i + 1; j < degree_; ++j) solver_weights_[i] = add(solver_weights_[i], dpow[j]);
  }
}

Elem Field::element(std::uint32_t index) const {
  if (index >= order_) throw std::out_of_range("element index out of range");
  return {index};
}

Elem Field::from_int(std::int64_t k) const {
  const std::int64_t r = ((k % p_) + p_) % p_;
  return {static_cast<std::uint32_t>(r)};
}

std::vector<Elem> Field::elements() const {
  std::vector<Elem> out(order_);
  for (std::uint32_t i = 0; i < order_; ++i) out[i] = {i};
  return out;
}

Elem Field::add(Elem a, Elem b) const {
  if (p_ == 2) return {a.index ^ b.index};
  return {add_[static_cast<std::size_t>(a.index) * order_ + b.index]};
}

Elem Field::neg(Elem a) const { return {neg_[a.index]}; }

Elem Field::mul(Elem a, Elem b) const {
  if (a.index == 0 || b.index == 0) return zero();
  return {exp_[log_[a.index] + log_[b.index]]};
}

Elem Field::inv(Elem a) const {
  if (a.index == 0) throw std::domain_error("inverse of zero");
  const std::uint32_t l = log_[a.index];
  return {exp_[l == 0 ? 0 : order_ - 1 - l]};
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  if (e == 0) return one();
  if (a.index == 0) return zero();
  return {exp_[(static_cast<std::uint64_t>(log_[a.index]) * (e % (order_ - 1))) % (order_ - 1)]};
}

std::uint32_t Field::log(Elem a) const {
  if (a.index == 0) throw std::domain_error("log of zero");
  return log_[a.index];
}

bool Field::is_square(Elem a) const {
  if (p_ == 2 || a.index == 0) return true;
  return log_[a.index] % 2 == 0;
}

std::optional<Elem> Field::sqrt(Elem a) const {
  if (p_ == 2) return pow(a, order_ / 2);
  if (sqrt_[a.index] < 0) return std::nullopt;
  return Elem{static_cast<std::uint32_t>(sqrt_[a.index])};
}

unsigned Field::trace_bit(Elem a) const {
  if (p_ != 2) throw std::logic_error("trace_bit requires characteristic 2");
  return trace_[a.index];
}

Elem Field::relative_frobenius(Elem a) const {
  if (!parent_) throw std::logic_error("relative Frobenius needs a tower step");
  const Field& B = *parent_;
  const std::uint32_t q = B.order_;
  const Elem a0{a.index % q}, a1{a.index / q};
  // y^q is the other root of the step polynomial: -s1 - y.
  const Elem c0 = B.sub(a0, B.mul(a1, s1_));
  const Elem c1 = B.neg(a1);
  return {c0.index + q * c1.index};
}

Elem Field::embed(Elem base) const {
  if (!parent_) throw std::logic_error("embed needs a tower step");
  if (base.index >= parent_->order_) throw std::out_of_range("not a parent element");
  return base;
}

bool Field::in_base(Elem a) const { return parent_ && a.index < parent_->order_; }

Elem Field::to_base(Elem a) const {
  if (!in_base(a)) throw std::domain_error("element is not in the base field");
  return a;
}

std::vector<std::uint32_t> Field::coordinates(Elem a) const {
  std::vector<std::uint32_t> c(degree_, 0);
  std::uint32_t t = a.index;
  for (unsigned i = 0; i < degree_; ++i, t /= p_) c[i] = t % p_;
  return c;
}

std::string Field::to_string(Elem a) const {
  if (degree_ == 1) return std::to_string(a.index);
  std::ostringstream os;
  if (a.index == 0) return "0";
  // Power of the primitive element keeps the string short and unambiguous.
  const auto l = log(a);
  if (l == 0) return "1";
  os << "g^" << l;
  return os.str();
}

std::vector<Elem> Field::solve_quadratic(Elem A, Elem B, Elem C) const {
  if (A.index == 0 && B.index == 0 && C.index == 0)
    throw std::invalid_argument("degenerate quadratic: all coefficients zero");
  std::vector<Elem> roots;
  if (A.index == 0) {
    if (B.index != 0) roots.push_back(div(neg(C), B));
    return roots;
  }
  if (p_ == 2) {
    if (B.index == 0) {
      roots.push_back(*sqrt(div(C, A)));
      return roots;
    }
    // x = (B/A) z turns A x^2 + B x + C into z^2 + z = AC/B^2.
    const Elem c = div(mul(A, C), mul(B, B));
    if (trace_[c.index] != 0) return roots;
    Elem z = zero(), cp = c;
    for (unsigned i = 0; i < degree_; ++i, cp = mul(cp, cp)) z = add(z, mul(solver_weights_[i], cp));
    const Elem s = div(B, A);
    roots = {mul(s, z), mul(s, add(z, one()))};
  } else {
    const Elem disc = sub(mul(B, B), mul(from_int(4), mul(A, C)));
    const auto r = sqrt(disc);
    if (!r) return roots;
    const Elem two_a_inv = inv(mul(from_int(2), A));
    roots.push_back(mul(sub(*r, B), two_a_inv));
    roots.push_back(mul(sub(neg(*r), B), two_a_inv));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

bool TraceClasses::in_t_plus(unsigned e, Elem x) const {
  if (field->even()) return in_t(e, x);
  return x.index == 0 || in_t(e, x);
}

std::vector<Elem> TraceClasses::t0_star() const {
  std::vector<Elem> out;
  for (const Elem x : t0)
    if (x.index != 0) out.push_back(x);
  return out;
}

std::vector<Elem> TraceClasses::t_plus(unsigned e) const {
  std::vector<Elem> out = e == 0 ? t0 : t1;
  if (!field->even()) out.insert(out.begin(), field->zero());
  return out;
}

Elem relative_trace(const Field& ext, Elem x) {
  if (!ext.is_tower() || !ext.even()) throw std::logic_error("relative trace needs a characteristic-2 tower step");
  const unsigned r = ext.parent()->degree();
  Elem t = ext.zero();
  for (unsigned i = 0; i < r; ++i, x = ext.square(x)) t = ext.add(t, x);
  return t;
}

TraceClasses classes(const FieldPtr& field) {
  const Field& F = *field;
  TraceClasses tc;
  tc.field = field;
  tc.cls.assign(F.order(), 0);
  for (const Elem x : F.elements()) {
    std::int8_t c;
    if (F.even())
      c = static_cast<std::int8_t>(F.trace_bit(x));
    else
      c = x.index == 0 ? -1 : (F.is_square(x) ? 0 : 1);
    tc.cls[x.index] = c;
    if (c == 0) tc.t0.push_back(x);
    if (c == 1) tc.t1.push_back(x);
  }
  if (F.even() && F.is_tower()) {
    const std::uint32_t q = F.parent()->order();
    tc.s.assign(q, {});
    tc.g.assign(q, {});
    for (const Elem x : F.elements()) {
      const Elem tr = relative_trace(F, x);
      if (F.in_base(tr)) tc.s[tr.index].push_back(x);
      const Elem gx = F.add(F.relative_frobenius(x), x);
      tc.g[gx.index].push_back(x);  // x^q + x always lies in F_q
    }
  }
  return tc;
}

}  // namespace conic::gf
