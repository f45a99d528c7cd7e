#pragma once

// Finite fields GF(p^n), quadratic tower steps F_q < F_{q^2}, traces and
// trace classes.
//
// Elements are small value handles (an index into the field's enumeration).
// The index is the base-p integer of the coordinate vector with the constant
// coordinate least significant, so enumerating indices 0, 1, ... lists the
// constants first.  For a tower step F_{q^2} = F_q[y]/(y^2 + s1*y + s0) the
// element a + b*y has index a + q*b, so the embedded copy of F_q is exactly
// the indices below q.

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace conic::gf {

struct Elem {
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(const Elem&, const Elem&) = default;
};

/// A point of PG(1,F): either a field element or the symbol infinity.
struct ProjElem {
  bool infinite = false;
  Elem value{};

  static constexpr ProjElem inf() { return {true, {}}; }
  static constexpr ProjElem of(Elem e) { return {false, e}; }

  friend constexpr bool operator==(const ProjElem& a, const ProjElem& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
  /// Deterministic total order: finite elements by index, then infinity.
  friend constexpr bool operator<(const ProjElem& a, const ProjElem& b) {
    if (a.infinite != b.infinite) return b.infinite;
    return !a.infinite && a.value < b.value;
  }
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

bool is_prime(std::uint64_t n);

/// Returns (p, n) with q = p^n, or nullopt when q is not a prime power.
std::optional<std::pair<std::uint32_t, unsigned>> prime_power(std::uint64_t q);

/// Polynomials over GF(p), coefficients low degree first.
using Poly = std::vector<std::uint32_t>;

bool is_irreducible(std::uint32_t p, const Poly& f);

/// Built-in default defining polynomial of GF(p^n) over GF(p).
Poly default_polynomial(std::uint32_t p, unsigned n);

/// Binary coefficient mask (bit i = coefficient of x^i) to a GF(2) polynomial.
Poly poly_from_mask(std::uint64_t mask);
std::uint64_t mask_from_poly(const Poly& f);

class Field {
 public:
  /// GF(p^n) over the prime field.  Throws std::invalid_argument when p is not
  /// prime, n is zero, or the supplied polynomial is not irreducible of
  /// degree n.
  static FieldPtr make(std::uint32_t p, unsigned n, std::optional<Poly> poly = std::nullopt);

  /// Quadratic extension of `base`.  In characteristic 2 the step polynomial
  /// is y^2 + y + nu with nu the first element of absolute trace 1; in odd
  /// characteristic it is y^2 - nu with nu the first non-square.
  static FieldPtr extend(const FieldPtr& base);

  std::uint32_t characteristic() const { return p_; }
  unsigned degree() const { return degree_; }  // over the prime field
  std::uint32_t order() const { return order_; }
  bool even() const { return p_ == 2; }

  const FieldPtr& parent() const { return parent_; }
  bool is_tower() const { return parent_ != nullptr; }
  /// Defining polynomial over GF(p); empty for tower steps.
  const Poly& polynomial() const { return poly_; }
  /// Step polynomial y^2 + s1*y + s0 over the parent; only for tower steps.
  Elem step_s0() const { return s0_; }
  Elem step_s1() const { return s1_; }

  Elem zero() const { return {0}; }
  Elem one() const { return {1}; }
  Elem element(std::uint32_t index) const;
  /// Image of the integer k in the prime subfield.
  Elem from_int(std::int64_t k) const;
  std::vector<Elem> elements() const;
  Elem primitive() const { return primitive_; }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;  // throws std::domain_error on zero
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;
  Elem square(Elem a) const { return mul(a, a); }

  /// Discrete log to the base primitive(); a must be nonzero.
  std::uint32_t log(Elem a) const;

  bool is_square(Elem a) const;
  /// Some square root of a (for char 2 the unique one), or nullopt.
  std::optional<Elem> sqrt(Elem a) const;

  /// Absolute trace Tr_{F/F_p}(a), an element of the prime subfield.
  Elem abs_trace(Elem a) const { return {trace_[a.index]}; }
  /// Absolute trace as a bit; characteristic 2 only.
  unsigned trace_bit(Elem a) const;

  /// x -> x^|parent|; only for tower steps.
  Elem relative_frobenius(Elem a) const;
  /// Embedding of a parent element; only for tower steps.
  Elem embed(Elem base) const;
  /// True iff a lies in the embedded parent field.
  bool in_base(Elem a) const;
  /// Embedded parent element as a parent element; requires in_base(a).
  Elem to_base(Elem a) const;

  /// Coordinates over GF(p), constant first.
  std::vector<std::uint32_t> coordinates(Elem a) const;
  std::string to_string(Elem a) const;

  /// Roots of A x^2 + B x + C in this field, sorted by index, multiplicity
  /// collapsed.  Throws std::invalid_argument when A = B = C = 0.
  std::vector<Elem> solve_quadratic(Elem A, Elem B, Elem C) const;

 private:
  Field() = default;
  void build_tables();
  Elem slow_mul(Elem a, Elem b) const;
  Elem slow_pow(Elem a, std::uint64_t e) const;

  std::uint32_t p_ = 2;
  unsigned degree_ = 1;
  std::uint32_t order_ = 2;
  Poly poly_;
  FieldPtr parent_;
  Elem s0_{}, s1_{};

  Elem primitive_{};
  std::vector<std::uint32_t> exp_;  // length 2*(order-1)
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> add_;  // odd characteristic only, order^2
  std::vector<std::uint32_t> neg_;
  std::vector<std::uint32_t> trace_;
  std::vector<std::int64_t> sqrt_;  // odd characteristic: root or -1
  std::vector<Elem> solver_weights_;  // char 2: coefficients for z^2 + z = c
};

/// Trace classes of a field.  For q = 2^r, T_e is the set of elements of
/// absolute trace e; for odd q, T_0 are the nonzero squares and T_1 the
/// non-squares.  For a characteristic-2 tower step F_{q^2} over F_q the sets
/// S_r and G_r (r in F_q) are filled as well.
struct TraceClasses {
  FieldPtr field;
  std::vector<Elem> t0, t1;
  std::vector<std::int8_t> cls;  // per index: 0, 1, or -1 for zero in odd q

  std::vector<std::vector<Elem>> s, g;  // indexed by parent element index

  bool in_t(unsigned e, Elem x) const { return cls[x.index] == static_cast<int>(e); }
  bool in_t0(Elem x) const { return cls[x.index] == 0; }
  bool in_t1(Elem x) const { return cls[x.index] == 1; }
  bool in_t0_star(Elem x) const { return x.index != 0 && in_t0(x); }
  /// T_e^+: T_e for even q, T_e with 0 for odd q.
  bool in_t_plus(unsigned e, Elem x) const;
  std::vector<Elem> t0_star() const;
  std::vector<Elem> t_plus(unsigned e) const;
};

TraceClasses classes(const FieldPtr& field);

/// Relative trace x + x^2 + ... + x^{q/2} of F_{q^2} (q = |parent|); the
/// result is an element of F_{q^2} (it lies in F_q exactly when x has
/// absolute trace zero).
Elem relative_trace(const Field& ext, Elem x);

}  // namespace conic::gf
