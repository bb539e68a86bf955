#include "qlab/polyring.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>

namespace qlab {

Rat parse_rat(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return std::invalid_argument("malformed rational: '" + s + "'"); };
  if (s.empty()) throw bad();
  std::size_t slash = s.find('/');
  auto check_int = [&](std::string_view part, bool allow_sign) {
    if (part.empty()) throw bad();
    std::size_t i = 0;
    if (allow_sign && (part[0] == '-' || part[0] == '+')) i = 1;
    if (i == part.size()) throw bad();
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') throw bad();
  };
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  check_int(num, true);
  check_int(den, false);
  if (num[0] == '+') num = num.substr(1);
  mpz_class n(num, 10);
  mpz_class d(den, 10);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  Rat r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rat& r) { return r.get_str(10); }

VarId VarId::z(int k) {
  if (k < 0 || k > kMaxSites) throw std::out_of_range("z index out of range");
  return VarId(Kind::z, k);
}

VarId VarId::t(int k) {
  if (k < 1 || k > kMaxSites) throw std::out_of_range("t index out of range");
  return VarId(Kind::t, k);
}

VarId VarId::u() { return VarId(Kind::u, 0); }

int VarId::slot() const {
  switch (kind_) {
    case Kind::z: return index_;
    case Kind::t: return kMaxSites + index_;
    case Kind::u: break;
  }
  return 2 * kMaxSites + 1;
}

std::string VarId::name() const {
  switch (kind_) {
    case Kind::z: return "z" + std::to_string(index_);
    case Kind::t: return "t" + std::to_string(index_);
    case Kind::u: break;
  }
  return "u";
}

VarId var_at_slot(int slot) {
  if (slot <= kMaxSites) return VarId::z(slot);
  if (slot <= 2 * kMaxSites) return VarId::t(slot - kMaxSites);
  return VarId::u();
}

Monomial Monomial::of(VarId v, int e) {
  Monomial m;
  m.set(v, e);
  return m;
}

void Monomial::set(VarId v, int e) {
  if (e < 0 || e > 255) throw std::out_of_range("exponent out of range");
  int s = v.slot();
  degree_ = static_cast<std::uint16_t>(degree_ - exp_[s] + e);
  exp_[s] = static_cast<std::uint8_t>(e);
}

int Monomial::z_degree() const {
  int d = 0;
  for (int s = 0; s <= kMaxSites; ++s) d += exp_[s];
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (int s = 0; s < kSlots; ++s) {
    int e = exp_[s] + o.exp_[s];
    if (e > 255) throw std::overflow_error("monomial exponent overflow");
    r.exp_[s] = static_cast<std::uint8_t>(e);
  }
  r.degree_ = static_cast<std::uint16_t>(degree_ + o.degree_);
  return r;
}

Monomial Monomial::without(VarId v) const {
  Monomial r = *this;
  r.set(v, 0);
  return r;
}

std::vector<std::pair<VarId, int>> Monomial::factors() const {
  std::vector<std::pair<VarId, int>> out;
  for (int s = 0; s < kSlots; ++s)
    if (exp_[s] != 0) out.emplace_back(var_at_slot(s), exp_[s]);
  return out;
}

bool GradedLexOrder::operator()(const Monomial& a, const Monomial& b) const {
  if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
  return std::memcmp(a.exp_.data(), b.exp_.data(), kSlots) > 0;
}

Poly::Poly(const Rat& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

Poly::Poly(long c) {
  if (c != 0) terms_.emplace(Monomial{}, Rat(c));
}

Poly Poly::var(VarId v) { return term(Rat(1), Monomial::of(v)); }

Poly Poly::term(const Rat& c, const Monomial& m) {
  Poly p;
  if (c != 0) p.terms_.emplace(m, c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

int Poly::degree() const {
  return terms_.empty() ? -1 : terms_.rbegin()->first.degree();
}

int Poly::degree_in(VarId v) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(v));
  return d;
}

int Poly::z_degree() const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.z_degree());
  return d;
}

Rat Poly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rat(0) : it->second;
}

std::vector<VarId> Poly::variables() const {
  std::array<bool, kSlots> seen{};
  for (const auto& [m, c] : terms_)
    for (int s = 0; s < kSlots; ++s)
      if (m.exponent_at(s) != 0) seen[s] = true;
  std::vector<VarId> out;
  for (int s = 0; s < kSlots; ++s)
    if (seen[s]) out.push_back(var_at_slot(s));
  return out;
}

void Poly::add_term(const Monomial& m, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

Poly Poly::coeff_of(VarId v, int e) const {
  Poly r;
  for (const auto& [m, c] : terms_)
    if (m.exponent(v) == e) r.terms_.emplace_hint(r.terms_.end(), m.without(v), c);
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly& Poly::operator*=(const Poly& o) {
  *this = *this * o;
  return *this;
}

Poly& Poly::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  Rat prod;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      prod = ca * cb;
      r.add_term(ma * mb, prod);
    }
  return r;
}

Poly operator-(Poly a) {
  for (auto& [m, c] : a.terms_) c = -c;
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b) { return a * b; }

Poly poly_pow(const Poly& a, int e) {
  if (e < 0) throw std::invalid_argument("negative power");
  Poly r(1L);
  for (int i = 0; i < e; ++i) r = r * a;
  return r;
}

Poly poly_diff(const Poly& p, VarId v) {
  Poly r;
  for (const auto& [m, c] : p.terms()) {
    int e = m.exponent(v);
    if (e == 0) continue;
    Monomial n = m;
    n.set(v, e - 1);
    r.add_term(n, c * e);
  }
  return r;
}

UnmappedVariableError::UnmappedVariableError(VarId v)
    : std::invalid_argument("variable " + v.name() + " has no image in the substitution"),
      var_(v) {}

namespace {

class PowerCache {
 public:
  explicit PowerCache(const Poly& base) { powers_.emplace_back(1L); powers_.push_back(base); }
  const Poly& get(int e) {
    while (static_cast<int>(powers_.size()) <= e) powers_.push_back(powers_.back() * powers_[1]);
    return powers_[e];
  }

 private:
  std::vector<Poly> powers_;
};

Poly substitute_impl(const Poly& p, const SubstMap& map, bool strict) {
  if (strict) {
    for (const auto& [v, img] : map)
      if (img.z_degree() > 1) throw std::invalid_argument("image of " + v.name() + " is not affine");
    for (VarId v : p.variables())
      if (!map.contains(v)) throw UnmappedVariableError(v);
  }
  std::map<VarId, PowerCache> caches;
  for (const auto& [v, img] : map) caches.emplace(v, PowerCache(img));
  Poly r;
  for (const auto& [m, c] : p.terms()) {
    Monomial kept;
    Poly acc = Poly::term(c, Monomial{});
    for (auto [v, e] : m.factors()) {
      auto it = caches.find(v);
      if (it == caches.end()) {
        kept.set(v, e);
      } else {
        acc = acc * it->second.get(e);
      }
    }
    if (kept.is_one()) {
      r += acc;
    } else {
      for (const auto& [ma, ca] : acc.terms()) r.add_term(ma * kept, ca);
    }
  }
  return r;
}

std::vector<Rat> binomial_row(int k) {
  std::vector<Rat> row(k + 1);
  row[0] = 1;
  for (int i = 1; i <= k; ++i) row[i] = row[i - 1] * (k - i + 1) / i;
  return row;
}

}  // namespace

Poly affine_subst(const Poly& p, const SubstMap& map) { return substitute_impl(p, map, true); }

Poly substitute(const Poly& p, const SubstMap& map) { return substitute_impl(p, map, false); }

Poly shift_var(const Poly& p, VarId a, VarId b, const Rat& c) {
  if (c == 0) return p;
  if (a == b) return scale_var(p, a, Rat(1) + c);
  Poly r;
  std::vector<Rat> cpow{Rat(1)};
  for (const auto& [m, coef] : p.terms()) {
    int k = m.exponent(a);
    if (k == 0) {
      r.add_term(m, coef);
      continue;
    }
    while (static_cast<int>(cpow.size()) <= k) cpow.push_back(cpow.back() * c);
    auto binom = binomial_row(k);
    int eb = m.exponent(b);
    for (int i = 0; i <= k; ++i) {
      Monomial n = m;
      n.set(a, k - i);
      n.set(b, eb + i);
      r.add_term(n, coef * binom[i] * cpow[i]);
    }
  }
  return r;
}

Poly translate_var(const Poly& p, VarId v, const Rat& c) {
  if (c == 0) return p;
  Poly r;
  std::vector<Rat> cpow{Rat(1)};
  for (const auto& [m, coef] : p.terms()) {
    int k = m.exponent(v);
    while (static_cast<int>(cpow.size()) <= k) cpow.push_back(cpow.back() * c);
    auto binom = binomial_row(k);
    for (int i = 0; i <= k; ++i) {
      Monomial n = m;
      n.set(v, k - i);
      r.add_term(n, coef * binom[i] * cpow[i]);
    }
  }
  return r;
}

Poly scale_var(const Poly& p, VarId v, const Rat& c) {
  Poly r;
  for (const auto& [m, coef] : p.terms()) {
    Rat f = coef;
    for (int i = 0; i < m.exponent(v); ++i) f *= c;
    r.add_term(m, f);
  }
  return r;
}

Poly poly_eval(const Poly& p, const std::map<VarId, Rat>& values) {
  Poly r;
  for (const auto& [m, c] : p.terms()) {
    Monomial kept = m;
    Rat f = c;
    for (auto [v, e] : m.factors()) {
      auto it = values.find(v);
      if (it == values.end()) continue;
      for (int i = 0; i < e; ++i) f *= it->second;
      kept.set(v, 0);
    }
    r.add_term(kept, f);
  }
  return r;
}

Poly truncate_in(const Poly& p, VarId v, int max_exp) {
  Poly r;
  for (const auto& [m, c] : p.terms())
    if (m.exponent(v) <= max_exp) r.add_term(m, c);
  return r;
}

Poly interpolate(VarId v, std::span<const Rat> nodes, std::span<const Poly> values) {
  if (nodes.size() != values.size()) throw std::invalid_argument("node/value count mismatch");
  Poly out;
  Poly x = Poly::var(v);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Poly basis(1L);
    Rat denom(1);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (j == i) continue;
      if (nodes[i] == nodes[j]) throw std::invalid_argument("repeated interpolation node");
      basis *= x - Poly(nodes[j]);
      denom *= nodes[i] - nodes[j];
    }
    out += values[i] * basis * Rat(1 / denom);
  }
  return out;
}

namespace {

void compositions(std::span<const VarId> vars, std::size_t at, int left, Monomial& cur,
                  std::vector<Monomial>& out) {
  if (at + 1 == vars.size()) {
    cur.set(vars[at], left);
    out.push_back(cur);
    cur.set(vars[at], 0);
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur.set(vars[at], e);
    compositions(vars, at + 1, left - e, cur, out);
  }
  cur.set(vars[at], 0);
}

}  // namespace

std::vector<Monomial> monomial_basis(std::span<const VarId> vars, int d, BasisMode mode) {
  if (d < 0) throw std::invalid_argument("negative degree");
  std::vector<Monomial> out;
  if (vars.empty()) {
    if (d == 0 || mode == BasisMode::up_to_degree) out.emplace_back();
    return out;
  }
  int lo = mode == BasisMode::exact_degree ? d : 0;
  for (int k = lo; k <= d; ++k) {
    Monomial cur;
    compositions(vars, 0, k, cur, out);
  }
  std::stable_sort(out.begin(), out.end(), GradedLexOrder{});
  return out;
}

std::string to_string(const Monomial& m) {
  std::string s;
  for (auto [v, e] : m.factors()) {
    if (!s.empty()) s += '*';
    s += v.name();
    if (e != 1) s += '^' + std::to_string(e);
  }
  return s.empty() ? "1" : s;
}

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<Monomial, Rat>> ordered(p.terms().begin(), p.terms().end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.first.degree() > b.first.degree(); });
  std::string s;
  for (const auto& [m, c] : ordered) {
    Rat a = abs(c);
    bool neg = c < 0;
    if (s.empty()) {
      if (neg) s += '-';
    } else {
      s += neg ? " - " : " + ";
    }
    if (m.is_one()) {
      s += to_string(a);
    } else {
      if (a != 1) s += to_string(a) + '*';
      s += to_string(m);
    }
  }
  return s;
}

std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << to_string(p); }

}  // namespace qlab
