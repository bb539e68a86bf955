#include <sstream>

#include "qlab/chainops.hpp"

namespace qlab {

ChainConfig ChainConfig::homogeneous(int n, const Rat& spin) {
  if (n < 1 || n > kMaxSites) throw std::invalid_argument("chain length out of range");
  ChainConfig c;
  c.sites.assign(static_cast<std::size_t>(n), SiteSpec{spin, Rat(0)});
  return c;
}

bool ChainConfig::is_homogeneous() const {
  for (const auto& s : sites)
    if (s.spin != sites.front().spin || s.shift != 0) return false;
  return true;
}

std::vector<VarId> ChainConfig::vars() const {
  std::vector<VarId> v;
  for (int k = 1; k <= size(); ++k) v.push_back(VarId::z(k));
  return v;
}

Rat ChainConfig::u_plus(int k, const Rat& u) const {
  const auto& s = sites.at(static_cast<std::size_t>(k - 1));
  return u + s.shift + s.spin;
}

Rat ChainConfig::u_minus(int k, const Rat& u) const {
  const auto& s = sites.at(static_cast<std::size_t>(k - 1));
  return u + s.shift - s.spin;
}

void ChainConfig::validate(int degree) const {
  if (sites.empty() || size() > kMaxSites)
    throw std::invalid_argument("chain length must be between 1 and " + std::to_string(kMaxSites));
  for (const auto& s : sites) s.require_admissible(degree);
}

std::string ChainConfig::describe() const {
  std::ostringstream os;
  os << "N=" << size() << " spins=[";
  for (int k = 0; k < size(); ++k) os << (k ? "," : "") << to_string(sites[k].spin);
  os << "] shifts=[";
  for (int k = 0; k < size(); ++k) os << (k ? "," : "") << to_string(sites[k].shift);
  os << "]";
  return os.str();
}

Rat delta_pm(Sign s, const Rat& u, const ChainConfig& cfg) {
  Rat r(1);
  for (int k = 1; k <= cfg.size(); ++k) r *= s == Sign::plus ? cfg.u_plus(k, u) : cfg.u_minus(k, u);
  return r;
}

Poly delta_pm_poly(Sign s, const ChainConfig& cfg) {
  Poly r(1L);
  Poly u = Poly::var(VarId::u());
  for (const auto& site : cfg.sites)
    r *= u + Poly(s == Sign::plus ? Rat(site.shift + site.spin) : Rat(site.shift - site.spin));
  return r;
}

Poly lax_trace_apply(std::span<const std::pair<Rat, Rat>> params, const Poly& p) {
  int n = static_cast<int>(params.size());
  std::vector<OpMatrix2> laxes;
  laxes.reserve(params.size());
  for (int k = 0; k < n; ++k)
    laxes.push_back(lax_matrix(params[k].first, params[k].second, VarId::z(k + 1)).matrix);
  Poly out;
  for (int i = 0; i < 2; ++i) {
    std::array<Poly, 2> v;
    v[i] = p;
    for (int k = n - 1; k >= 0; --k) {
      const auto& l = laxes[k];
      std::array<Poly, 2> w{l.at(0, 0)(v[0]) + l.at(0, 1)(v[1]), l.at(1, 0)(v[0]) + l.at(1, 1)(v[1])};
      v = std::move(w);
    }
    out += v[i];
  }
  return out;
}

Poly transfer_apply(const Rat& u, const ChainConfig& cfg, const Poly& p) {
  std::vector<std::pair<Rat, Rat>> params;
  for (int k = 1; k <= cfg.size(); ++k) params.emplace_back(cfg.u_plus(k, u), cfg.u_minus(k, u));
  return lax_trace_apply(params, p);
}

LinOp transfer_op(const Rat& u, const ChainConfig& cfg) {
  return LinOp("t(" + to_string(u) + ")", cfg.vars(), DegreeContract::preserving,
               [u, cfg](const Poly& p) { return transfer_apply(u, cfg, p); });
}

Poly cyclic_shift_apply(const Poly& p, int n, ShiftDirection dir) {
  Poly r;
  for (const auto& [m, c] : p.terms()) {
    Monomial out = m;
    for (int k = 1; k <= n; ++k) {
      // forward: z_k -> z_{k+1}; backward: z_k -> z_{k-1}, cyclically
      int target = dir == ShiftDirection::forward ? k % n + 1 : (k + n - 2) % n + 1;
      out.set(VarId::z(target), m.exponent(VarId::z(k)));
    }
    r.add_term(out, c);
  }
  return r;
}

LinOp cyclic_shift_op(int n, ShiftDirection dir) {
  std::vector<VarId> vars;
  for (int k = 1; k <= n; ++k) vars.push_back(VarId::z(k));
  return LinOp(dir == ShiftDirection::forward ? "P" : "P^-1", vars, DegreeContract::preserving,
               [n, dir](const Poly& p) { return cyclic_shift_apply(p, n, dir); });
}

QKind QKind::minus(const Rat& u) {
  QKind q;
  q.type = Type::minus;
  q.u = u;
  return q;
}

QKind QKind::plus(const Rat& u) {
  QKind q;
  q.type = Type::plus;
  q.u = u;
  return q;
}

QKind QKind::general(const Rat& u1, const Rat& u2) {
  QKind q;
  q.type = Type::general;
  q.u1 = u1;
  q.u2 = u2;
  return q;
}

QKind QKind::from_spectral(const Rat& u, const Rat& aux_spin) {
  return general(u - aux_spin + 1, u + aux_spin);
}

std::string QKind::describe() const {
  switch (type) {
    case Type::minus: return "Q-(" + to_string(u) + ")";
    case Type::plus: return "Q+(" + to_string(u) + ")";
    case Type::general: break;
  }
  return "Q(" + to_string(u1) + "|" + to_string(u2) + ")";
}

Poly aux_trace_apply(const LinOp& a, const Poly& p, int m_max, bool check_tail) {
  const VarId z0 = VarId::z(0);
  Poly out;
  int last = check_tail ? m_max + 2 : m_max;
  for (int m = 0; m <= last; ++m) {
    Poly r = a(Poly::term(Rat(1), Monomial::of(z0, m)) * p);
    Poly c = r.coeff_of(z0, m);
    if (m > m_max) {
      if (!c.is_zero())
        throw std::logic_error("auxiliary trace does not terminate at m=" + std::to_string(m_max));
      continue;
    }
    out += c;
  }
  return out;
}

std::pair<Rat, Rat> ql3_moment_sides(int k, const Rat& u, const Rat& spin) {
  Rat a = u + spin;
  Rat b = spin - u;
  if (pochhammer(2 * spin, k) == 0) throw AdmissibilityError("2l is not admissible for this order");
  // B(a+k, b)/B(a, b) by the one-step recurrence B(x+1, b) = B(x, b) x/(x+b)
  Rat moment(1);
  for (int i = 0; i < k; ++i) moment *= (a + i) / (a + b + i);
  return {pochhammer_ratio(a, 2 * spin, k), moment};
}

bool ql3_moment_identity_check(int k, const Rat& u, const Rat& spin) {
  auto [lhs, rhs] = ql3_moment_sides(k, u, spin);
  return lhs == rhs;
}

}  // namespace qlab
