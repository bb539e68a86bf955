#pragma once

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlab/polyring.hpp"

namespace qlab {

// Raised when a parameter choice puts a zero into a Pochhammer denominator
// (or otherwise leaves the exact domain of an operator).
class AdmissibilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

Rat pochhammer(const Rat& a, int k);

// (num)_k / (den)_k. Shared by every weight in the library.
Rat pochhammer_ratio(const Rat& num, const Rat& den, int k);

namespace testing {
// Fault injection: shifts the numerator argument of pochhammer_ratio by +1.
void set_pochhammer_fault(bool on);
bool pochhammer_fault();

class ScopedPochhammerFault {
 public:
  ScopedPochhammerFault() : prev_(pochhammer_fault()) { set_pochhammer_fault(true); }
  ~ScopedPochhammerFault() { set_pochhammer_fault(prev_); }
  ScopedPochhammerFault(const ScopedPochhammerFault&) = delete;
  ScopedPochhammerFault& operator=(const ScopedPochhammerFault&) = delete;

 private:
  bool prev_;
};
}  // namespace testing

enum class DegreeContract { preserving, bounded };

// Linear operator on polynomials. Cheap to copy.
class LinOp {
 public:
  using Fn = std::function<Poly(const Poly&)>;

  LinOp();  // zero operator
  LinOp(std::string name, std::vector<VarId> touched, DegreeContract contract, Fn fn);

  static LinOp identity();
  static LinOp zero();
  static LinOp scalar(const Rat& c);
  static LinOp multiply(const Poly& f);
  static LinOp derivative(VarId v);

  Poly operator()(const Poly& p) const;

  const std::string& name() const { return name_; }
  const std::vector<VarId>& touched() const { return touched_; }
  DegreeContract contract() const { return contract_; }
  bool is_zero() const { return kind_ == Kind::zero; }
  bool is_identity() const { return kind_ == Kind::identity; }

  // Composition: (a * b)(p) = a(b(p)).
  friend LinOp operator*(const LinOp& a, const LinOp& b);
  friend LinOp operator+(const LinOp& a, const LinOp& b);
  friend LinOp operator-(const LinOp& a, const LinOp& b);
  friend LinOp operator*(const Rat& c, const LinOp& a);
  LinOp operator-() const;

  LinOp renamed(std::string name) const;

 private:
  enum class Kind { general, zero, identity };
  std::string name_;
  std::vector<VarId> touched_;
  DegreeContract contract_ = DegreeContract::preserving;
  Kind kind_ = Kind::zero;
  std::shared_ptr<const Fn> fn_;
};

// Commutator [a, b] = ab - ba.
LinOp commutator(const LinOp& a, const LinOp& b);

struct SiteSpec {
  Rat spin;
  Rat shift;

  // No zero among the factors 2l, 2l+1, ..., 2l+D-1.
  bool admissible(int degree) const;
  void require_admissible(int degree) const;
};

// Parameters (u+, u- | v+, v-) of a two-site operator.
struct PairParams {
  Rat u_plus, u_minus, v_plus, v_minus;

  static PairParams from_spins(const Rat& u, const Rat& l1, const Rat& v, const Rat& l2);
  Rat u() const { return (u_plus + u_minus) / 2; }
  Rat v() const { return (v_plus + v_minus) / 2; }
  Rat spin1() const { return (u_plus - u_minus) / 2; }
  Rat spin2() const { return (v_plus - v_minus) / 2; }
};

// 2x2 matrix with LinOp entries; multiplication composes entries.
class OpMatrix2 {
 public:
  OpMatrix2();
  OpMatrix2(LinOp a11, LinOp a12, LinOp a21, LinOp a22);
  static OpMatrix2 scalar(const LinOp& op);

  const LinOp& at(int i, int j) const { return e_[2 * i + j]; }
  LinOp& at(int i, int j) { return e_[2 * i + j]; }

  friend OpMatrix2 operator*(const OpMatrix2& a, const OpMatrix2& b);
  friend OpMatrix2 operator+(const OpMatrix2& a, const OpMatrix2& b);
  friend OpMatrix2 operator-(const OpMatrix2& a, const OpMatrix2& b);
  LinOp trace() const;

 private:
  std::array<LinOp, 4> e_;
};

// Eigenvalue (alpha)_k/(beta)_k on (z_a - z_b)^k (z_b, others)^m.
// beta must be admissible up to degree_bound; higher degrees are checked on use.
LinOp diag_shift_op(const Rat& alpha, const Rat& beta, VarId a, VarId b, int degree_bound);

enum class RKind { minus, plus, check, full };

std::string to_string(RKind k);

// R-(u+,u-|v-), R+(u+|v+,v-), the check operator R+(u+|v+,u-) R-(u+,u-|v-)
// and the full operator P12 times the check operator. Sites are (first, second).
LinOp build_r(RKind kind, const PairParams& pp, VarId first, VarId second, int degree_bound);

LinOp permutation_op(VarId a, VarId b);

// z -> z + c on a single variable, as an operator.
LinOp translation_op(VarId v, const Rat& c);

struct LaxMatrix {
  OpMatrix2 matrix;
  // matrix == lower * middle * lower_inv
  OpMatrix2 lower, middle, lower_inv;
};

// L(u+,u-) on z: [[u+ + z d, -d], [z^2 d + (u+ - u-) z, u- - z d]].
LaxMatrix lax_matrix(const Rat& u_plus, const Rat& u_minus, VarId z);

// M = [[1,0],[z,1]] (inverse == false) or [[1,0],[-z,1]] (inverse == true).
OpMatrix2 lower_unitriangular(VarId z, bool inverse);

struct Sl2Generators {
  LinOp s;        // z d + l
  LinOp s_minus;  // -d
  LinOp s_plus;   // z^2 d + 2 l z
  LinOp casimir() const;
};

Sl2Generators sl2_generators(const Rat& spin, VarId z);

}  // namespace qlab
