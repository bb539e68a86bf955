#include "qlab/qops.hpp"

#include <algorithm>
#include <atomic>

namespace qlab {

namespace {

std::atomic<bool> g_pochhammer_fault{false};

std::string joined_name(const std::string& a, const char* op, const std::string& b) {
  std::string s = "(" + a + ")" + op + "(" + b + ")";
  if (s.size() > 160) s = s.substr(0, 157) + "...";
  return s;
}

std::vector<VarId> merge_touched(const std::vector<VarId>& a, const std::vector<VarId>& b) {
  std::vector<VarId> r = a;
  for (VarId v : b)
    if (std::find(r.begin(), r.end(), v) == r.end()) r.push_back(v);
  std::sort(r.begin(), r.end());
  return r;
}

DegreeContract merge_contract(const LinOp& a, const LinOp& b) {
  return a.contract() == DegreeContract::preserving && b.contract() == DegreeContract::preserving
             ? DegreeContract::preserving
             : DegreeContract::bounded;
}

}  // namespace

namespace testing {
void set_pochhammer_fault(bool on) { g_pochhammer_fault.store(on); }
bool pochhammer_fault() { return g_pochhammer_fault.load(); }
}  // namespace testing

Rat pochhammer(const Rat& a, int k) {
  if (k < 0) throw std::invalid_argument("negative Pochhammer length");
  Rat r(1);
  for (int i = 0; i < k; ++i) r *= a + i;
  return r;
}

Rat pochhammer_ratio(const Rat& num, const Rat& den, int k) {
  if (k < 0) throw std::invalid_argument("negative Pochhammer length");
  Rat n = testing::pochhammer_fault() ? Rat(num + 1) : num;
  Rat r(1);
  for (int i = 0; i < k; ++i) {
    Rat d = den + i;
    if (d == 0)
      throw AdmissibilityError("Pochhammer denominator (" + to_string(den) + ")_" +
                               std::to_string(k) + " vanishes");
    r *= (n + i) / d;
  }
  return r;
}

LinOp::LinOp() : name_("0"), kind_(Kind::zero) {}

LinOp::LinOp(std::string name, std::vector<VarId> touched, DegreeContract contract, Fn fn)
    : name_(std::move(name)),
      touched_(std::move(touched)),
      contract_(contract),
      kind_(Kind::general),
      fn_(std::make_shared<const Fn>(std::move(fn))) {}

LinOp LinOp::identity() {
  LinOp op;
  op.name_ = "1";
  op.kind_ = Kind::identity;
  return op;
}

LinOp LinOp::zero() { return LinOp(); }

LinOp LinOp::scalar(const Rat& c) {
  if (c == 0) return zero();
  if (c == 1) return identity();
  return LinOp(to_string(c), {}, DegreeContract::preserving, [c](const Poly& p) { return p * c; });
}

LinOp LinOp::multiply(const Poly& f) {
  if (f.is_zero()) return zero();
  if (f.is_constant()) return scalar(f.constant_term());
  auto vars = f.variables();
  return LinOp(to_string(f), vars, DegreeContract::bounded, [f](const Poly& p) { return f * p; });
}

LinOp LinOp::derivative(VarId v) {
  return LinOp("d" + v.name(), {v}, DegreeContract::bounded,
               [v](const Poly& p) { return poly_diff(p, v); });
}

Poly LinOp::operator()(const Poly& p) const {
  switch (kind_) {
    case Kind::zero: return Poly();
    case Kind::identity: return p;
    case Kind::general: break;
  }
  return (*fn_)(p);
}

LinOp operator*(const LinOp& a, const LinOp& b) {
  if (a.is_zero() || b.is_zero()) return LinOp::zero();
  if (a.is_identity()) return b;
  if (b.is_identity()) return a;
  auto fa = a.fn_;
  auto fb = b.fn_;
  return LinOp(joined_name(a.name_, "*", b.name_), merge_touched(a.touched_, b.touched_),
               merge_contract(a, b), [fa, fb](const Poly& p) { return (*fa)((*fb)(p)); });
}

LinOp operator+(const LinOp& a, const LinOp& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return LinOp(joined_name(a.name_, "+", b.name_), merge_touched(a.touched_, b.touched_),
               merge_contract(a, b), [a, b](const Poly& p) { return a(p) + b(p); });
}

LinOp operator-(const LinOp& a, const LinOp& b) {
  if (b.is_zero()) return a;
  return LinOp(joined_name(a.name_, "-", b.name_), merge_touched(a.touched_, b.touched_),
               merge_contract(a, b), [a, b](const Poly& p) { return a(p) - b(p); });
}

LinOp operator*(const Rat& c, const LinOp& a) {
  if (c == 0 || a.is_zero()) return LinOp::zero();
  if (c == 1) return a;
  return LinOp(to_string(c) + "*" + a.name_, a.touched_, a.contract_,
               [c, a](const Poly& p) { return a(p) * c; });
}

LinOp LinOp::operator-() const { return Rat(-1) * *this; }

LinOp LinOp::renamed(std::string name) const {
  LinOp r = *this;
  r.name_ = std::move(name);
  return r;
}

LinOp commutator(const LinOp& a, const LinOp& b) { return a * b - b * a; }

bool SiteSpec::admissible(int degree) const {
  for (int j = 0; j < degree; ++j)
    if (2 * spin + j == 0) return false;
  return true;
}

void SiteSpec::require_admissible(int degree) const {
  if (!admissible(degree))
    throw AdmissibilityError("spin " + to_string(spin) + " is not admissible up to degree " +
                             std::to_string(degree));
}

PairParams PairParams::from_spins(const Rat& u, const Rat& l1, const Rat& v, const Rat& l2) {
  return PairParams{u + l1, u - l1, v + l2, v - l2};
}

OpMatrix2::OpMatrix2() = default;

OpMatrix2::OpMatrix2(LinOp a11, LinOp a12, LinOp a21, LinOp a22)
    : e_{std::move(a11), std::move(a12), std::move(a21), std::move(a22)} {}

OpMatrix2 OpMatrix2::scalar(const LinOp& op) { return OpMatrix2(op, LinOp::zero(), LinOp::zero(), op); }

OpMatrix2 operator*(const OpMatrix2& a, const OpMatrix2& b) {
  OpMatrix2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.at(i, j) = a.at(i, 0) * b.at(0, j) + a.at(i, 1) * b.at(1, j);
  return r;
}

OpMatrix2 operator+(const OpMatrix2& a, const OpMatrix2& b) {
  OpMatrix2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
  return r;
}

OpMatrix2 operator-(const OpMatrix2& a, const OpMatrix2& b) {
  OpMatrix2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.at(i, j) = a.at(i, j) - b.at(i, j);
  return r;
}

LinOp OpMatrix2::trace() const { return at(0, 0) + at(1, 1); }

LinOp diag_shift_op(const Rat& alpha, const Rat& beta, VarId a, VarId b, int degree_bound) {
  for (int j = 0; j < degree_bound; ++j)
    if (beta + j == 0)
      throw AdmissibilityError("denominator argument " + to_string(beta) +
                               " is not admissible up to degree " + std::to_string(degree_bound));
  std::string name = "D[" + to_string(alpha) + "/" + to_string(beta) + ";" + a.name() + "," +
                     b.name() + "]";
  return LinOp(name, {a, b}, DegreeContract::preserving, [alpha, beta, a, b](const Poly& p) {
    Poly q = shift_var(p, a, b, Rat(1));
    std::vector<Rat> ratio;
    Poly scaled;
    for (const auto& [m, c] : q.terms()) {
      int k = m.exponent(a);
      while (static_cast<int>(ratio.size()) <= k)
        ratio.push_back(pochhammer_ratio(alpha, beta, static_cast<int>(ratio.size())));
      scaled.add_term(m, c * ratio[k]);
    }
    return shift_var(scaled, a, b, Rat(-1));
  });
}

std::string to_string(RKind k) {
  switch (k) {
    case RKind::minus: return "minus";
    case RKind::plus: return "plus";
    case RKind::check: return "check";
    case RKind::full: break;
  }
  return "full";
}

LinOp permutation_op(VarId a, VarId b) {
  return LinOp("P[" + a.name() + "," + b.name() + "]", {a, b}, DegreeContract::preserving,
               [a, b](const Poly& p) {
                 Poly r;
                 for (const auto& [m, c] : p.terms()) {
                   Monomial n = m;
                   n.set(a, m.exponent(b));
                   n.set(b, m.exponent(a));
                   r.add_term(n, c);
                 }
                 return r;
               });
}

LinOp translation_op(VarId v, const Rat& c) {
  return LinOp(v.name() + "+" + to_string(c), {v}, DegreeContract::bounded,
               [v, c](const Poly& p) { return translate_var(p, v, c); });
}

LinOp build_r(RKind kind, const PairParams& pp, VarId first, VarId second, int degree_bound) {
  const auto& [up, um, vp, vm] = pp;
  switch (kind) {
    case RKind::minus:
      return diag_shift_op(up - vm, up - um, first, second, degree_bound)
          .renamed("R-(" + to_string(up) + "," + to_string(um) + "|" + to_string(vm) + ")");
    case RKind::plus:
      return diag_shift_op(up - vm, vp - vm, second, first, degree_bound)
          .renamed("R+(" + to_string(up) + "|" + to_string(vp) + "," + to_string(vm) + ")");
    case RKind::check: {
      LinOp rm = build_r(RKind::minus, pp, first, second, degree_bound);
      LinOp rp = build_r(RKind::plus, PairParams{up, um, vp, um}, first, second, degree_bound);
      return (rp * rm).renamed("Rcheck");
    }
    case RKind::full: break;
  }
  return (permutation_op(first, second) * build_r(RKind::check, pp, first, second, degree_bound))
      .renamed("R");
}

OpMatrix2 lower_unitriangular(VarId z, bool inverse) {
  Poly zp = Poly::var(z);
  return OpMatrix2(LinOp::identity(), LinOp::zero(), LinOp::multiply(inverse ? -zp : zp),
                   LinOp::identity());
}

LaxMatrix lax_matrix(const Rat& u_plus, const Rat& u_minus, VarId z) {
  std::vector<VarId> tz{z};
  LinOp l11("L11", tz, DegreeContract::preserving, [u_plus, z](const Poly& p) {
    Poly r = p * u_plus;
    for (const auto& [m, c] : p.terms()) r.add_term(m, c * m.exponent(z));
    return r;
  });
  LinOp l22("L22", tz, DegreeContract::preserving, [u_minus, z](const Poly& p) {
    Poly r = p * u_minus;
    for (const auto& [m, c] : p.terms()) r.add_term(m, -c * m.exponent(z));
    return r;
  });
  LinOp l12 = -LinOp::derivative(z);
  Rat two_l = u_plus - u_minus;
  LinOp l21("L21", tz, DegreeContract::bounded, [two_l, z](const Poly& p) {
    Poly r;
    for (const auto& [m, c] : p.terms()) {
      int e = m.exponent(z);
      Monomial n = m;
      n.set(z, e + 1);
      r.add_term(n, c * (two_l + e));
    }
    return r;
  });
  LaxMatrix lax;
  lax.matrix = OpMatrix2(l11, l12, l21, l22);
  lax.lower = lower_unitriangular(z, false);
  lax.lower_inv = lower_unitriangular(z, true);
  lax.middle = OpMatrix2(LinOp::scalar(u_plus - 1), l12, LinOp::zero(), LinOp::scalar(u_minus));
  return lax;
}

LinOp Sl2Generators::casimir() const { return s * s - s + s_plus * s_minus; }

Sl2Generators sl2_generators(const Rat& spin, VarId z) {
  std::vector<VarId> tz{z};
  Sl2Generators g;
  g.s = LinOp("S", tz, DegreeContract::preserving, [spin, z](const Poly& p) {
    Poly r = p * spin;
    for (const auto& [m, c] : p.terms()) r.add_term(m, c * m.exponent(z));
    return r;
  });
  g.s_minus = -LinOp::derivative(z);
  Rat two_l = 2 * spin;
  g.s_plus = LinOp("S+", tz, DegreeContract::bounded, [two_l, z](const Poly& p) {
    Poly r;
    for (const auto& [m, c] : p.terms()) {
      int e = m.exponent(z);
      Monomial n = m;
      n.set(z, e + 1);
      r.add_term(n, c * (two_l + e));
    }
    return r;
  });
  return g;
}

}  // namespace qlab
