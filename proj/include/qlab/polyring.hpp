#pragma once

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qlab {

// Exact rational scalar. Always kept in canonical form by GMP.
using Rat = mpq_class;

// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed text
// or a zero denominator.
Rat parse_rat(std::string_view text);
std::string to_string(const Rat& r);

inline constexpr int kMaxSites = 12;

// Variables of the polynomial ring: z_0..z_12, t_1..t_12 and the spectral u.
// Ordered z_0 < ... < z_12 < t_1 < ... < t_12 < u.
class VarId {
 public:
  enum class Kind : std::uint8_t { z, t, u };

  static VarId z(int k);
  static VarId t(int k);
  static VarId u();

  Kind kind() const { return kind_; }
  int index() const { return index_; }
  int slot() const;
  std::string name() const;

  friend bool operator==(const VarId&, const VarId&) = default;
  friend std::strong_ordering operator<=>(const VarId& a, const VarId& b) {
    return a.slot() <=> b.slot();
  }

 private:
  VarId(Kind k, int i) : kind_(k), index_(static_cast<std::uint8_t>(i)) {}
  Kind kind_;
  std::uint8_t index_;
};

inline constexpr int kSlots = 2 * kMaxSites + 2;

VarId var_at_slot(int slot);

class Monomial {
 public:
  Monomial() = default;
  static Monomial of(VarId v, int e = 1);

  int exponent(VarId v) const { return exp_[v.slot()]; }
  int exponent_at(int slot) const { return exp_[slot]; }
  void set(VarId v, int e);
  int degree() const { return degree_; }
  int z_degree() const;
  bool is_one() const { return degree_ == 0; }

  Monomial operator*(const Monomial& o) const;
  // Returns the monomial with the exponent of v set to zero.
  Monomial without(VarId v) const;

  std::vector<std::pair<VarId, int>> factors() const;

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.degree_ == b.degree_ && a.exp_ == b.exp_;
  }

 private:
  friend struct GradedLexOrder;
  std::array<std::uint8_t, kSlots> exp_{};
  std::uint16_t degree_ = 0;
};

// Total degree first; within a degree the larger exponent on the earlier
// variable comes first.
struct GradedLexOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class Poly {
 public:
  using TermMap = std::map<Monomial, Rat, GradedLexOrder>;

  Poly() = default;
  Poly(const Rat& c);  // NOLINT(google-explicit-constructor)
  Poly(long c);        // NOLINT(google-explicit-constructor)
  Poly(int c) : Poly(static_cast<long>(c)) {}  // NOLINT

  static Poly var(VarId v);
  static Poly term(const Rat& c, const Monomial& m);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  std::size_t size() const { return terms_.size(); }

  int degree() const;  // -1 for the zero polynomial
  int degree_in(VarId v) const;
  int z_degree() const;
  Rat coeff(const Monomial& m) const;
  Rat constant_term() const { return coeff(Monomial{}); }
  std::vector<VarId> variables() const;

  // Adds c*m in place; drops the term if it cancels.
  void add_term(const Monomial& m, const Rat& c);

  // Coefficient of v^e, as a polynomial in the remaining variables.
  Poly coeff_of(VarId v, int e) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rat& c);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rat& c) { return a *= c; }
  friend Poly operator*(const Rat& c, Poly a) { return a *= c; }
  friend Poly operator-(Poly a);
  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

 private:
  TermMap terms_;
};

Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_pow(const Poly& a, int e);
Poly poly_diff(const Poly& p, VarId v);

// Maps variables to affine forms (or arbitrary images for substitute()).
using SubstMap = std::map<VarId, Poly>;

class UnmappedVariableError : public std::invalid_argument {
 public:
  explicit UnmappedVariableError(VarId v);
  VarId variable() const { return var_; }

 private:
  VarId var_;
};

// Strict affine substitution: every variable of p must be mapped and every
// image must have z-degree <= 1. t and u act as degree-0 coefficients, so the
// z-degree is preserved when every image is homogeneous of degree 1 in z.
Poly affine_subst(const Poly& p, const SubstMap& map);

// Lenient composition: unmapped variables stay as they are, images may be
// arbitrary polynomials.
Poly substitute(const Poly& p, const SubstMap& map);

// a -> a + c*b
Poly shift_var(const Poly& p, VarId a, VarId b, const Rat& c);
// v -> v + c
Poly translate_var(const Poly& p, VarId v, const Rat& c);
// v -> c*v
Poly scale_var(const Poly& p, VarId v, const Rat& c);

// Partial evaluation; unassigned variables stay symbolic.
Poly poly_eval(const Poly& p, const std::map<VarId, Rat>& values);

// Drops every term whose exponent of v exceeds max_exp.
Poly truncate_in(const Poly& p, VarId v, int max_exp);

// Lagrange interpolation in v through (nodes[i], values[i]); the values may
// depend on other variables. Nodes must be distinct.
Poly interpolate(VarId v, std::span<const Rat> nodes, std::span<const Poly> values);

enum class BasisMode { exact_degree, up_to_degree };

// Monomials in vars of the requested degree, in GradedLexOrder.
std::vector<Monomial> monomial_basis(std::span<const VarId> vars, int d,
                                     BasisMode mode);

std::string to_string(const Monomial& m);
// Canonical rendering: highest total degree first, GradedLexOrder within a
// degree, coefficients p/q.
std::string to_string(const Poly& p);
std::ostream& operator<<(std::ostream& os, const Poly& p);

}  // namespace qlab
