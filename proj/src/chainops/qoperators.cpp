#include <algorithm>
#include <mutex>

#include "qlab/chainops.hpp"

namespace qlab {

namespace {

const VarId kZ0 = VarId::z(0);

int prev_site(int k, int n) { return k == 1 ? n : k - 1; }

Poly qminus_closed(const Rat& u, const ChainConfig& cfg, const Poly& p) {
  int n = cfg.size();
  SubstMap sub;
  for (int k = 1; k <= n; ++k) {
    Poly zk = Poly::var(VarId::z(k));
    sub[VarId::z(k)] = Poly::var(VarId::t(k)) * (Poly::var(VarId::z(prev_site(k, n))) - zk) + zk;
  }
  Poly expanded = substitute(p, sub);
  std::vector<std::vector<Rat>> weights(static_cast<std::size_t>(n));
  Poly out;
  for (const auto& [m, c] : expanded.terms()) {
    Rat w = c;
    Monomial rest = m;
    for (int k = 1; k <= n; ++k) {
      int e = m.exponent(VarId::t(k));
      auto& wk = weights[k - 1];
      while (static_cast<int>(wk.size()) <= e)
        wk.push_back(pochhammer_ratio(cfg.u_plus(k, u), 2 * cfg.sites[k - 1].spin,
                                      static_cast<int>(wk.size())));
      w *= wk[e];
      rest.set(VarId::t(k), 0);
    }
    out.add_term(rest, w);
  }
  return out;
}

using Truncation = std::vector<int>;

bool within(const Monomial& m, const Truncation& js) {
  for (std::size_t k = 0; k < js.size(); ++k)
    if (m.exponent(VarId::t(static_cast<int>(k) + 1)) > js[k]) return false;
  return true;
}

Poly truncated(const Poly& p, const Truncation& js) {
  Poly r;
  for (const auto& [m, c] : p.terms())
    if (within(m, js)) r.add_term(m, c);
  return r;
}

Poly mul_trunc(const Poly& a, const Poly& b, const Truncation& js) {
  Poly r;
  Rat prod;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      Monomial m = ma * mb;
      if (!within(m, js)) continue;
      prod = ca * cb;
      r.add_term(m, prod);
    }
  return r;
}

// Closed form of Q+ on the terminating lattice. With s_k = 1 - t_k the trace
// over V_0 collapses to (1 - a)^{-1} psi(z*, Z_1(z*), ..., Z_{N-1}(z*)), where
// Z_k = (1 - s_k) z_k + s_k Z_{k-1}, a = prod s_k and z* is the fixed point of
// z_0 -> Z_N. The site-k weight sigma_k(n) = (2l_k)_n/(b_k)_n is a polynomial
// of degree j_k in n, so s_k^q is paired with (-1)^q Delta^q sigma_k(0) and
// every series can be truncated at s_k^{j_k}.
class QPlusCollapse {
 public:
  QPlusCollapse(const Rat& u, const ChainConfig& cfg) : n_(cfg.size()) {
    auto js = qplus_lattice_offsets(u, cfg);
    if (!js) throw AdmissibilityError("Q+(" + to_string(u) + ") is off the terminating lattice");
    js_ = *js;
    for (int k = 1; k <= n_; ++k) {
      const auto& site = cfg.sites[k - 1];
      Rat two_l = 2 * site.spin;
      Rat b = 1 + site.spin - u - site.shift;
      int j = js_[k - 1];
      std::vector<Rat> sigma;
      for (int i = 0; i <= j; ++i) sigma.push_back(pochhammer_ratio(two_l, b, i));
      std::vector<Rat> w;
      for (int q = 0; q <= j; ++q) {
        Rat diff(0);
        Rat c(1);
        for (int i = 0; i <= q; ++i) {
          diff += ((q - i) % 2 ? -c : c) * sigma[i];
          c = c * (q - i) / (i + 1);
        }
        w.push_back(q % 2 ? Rat(-diff) : diff);
      }
      weights_.push_back(std::move(w));
    }
    build_series();
  }

  Poly apply(const Poly& p) {
    std::lock_guard<std::mutex> lock(mu_);
    Poly sum;
    for (const auto& [m, c] : p.terms()) {
      Poly prod = Poly(c);
      for (int k = 1; k <= n_; ++k) {
        int e = m.exponent(VarId::z(k));
        if (e > 0) prod = mul_trunc(prod, power(k, e), js_);
      }
      sum += prod;
    }
    Poly f = mul_trunc(geometric_, sum, js_);
    Poly out;
    for (const auto& [m, c] : f.terms()) {
      Rat w = c;
      Monomial rest = m;
      for (int k = 1; k <= n_; ++k) {
        w *= weights_[k - 1][m.exponent(VarId::t(k))];
        rest.set(VarId::t(k), 0);
      }
      out.add_term(rest, w);
    }
    return out;
  }

 private:
  void build_series() {
    Poly one(1L);
    std::vector<Poly> z_series{Poly::var(kZ0)};
    Poly a(1L);
    for (int k = 1; k <= n_; ++k) {
      Poly s = Poly::var(VarId::t(k));
      Poly zk = (one - s) * Poly::var(VarId::z(k)) + mul_trunc(s, z_series.back(), js_);
      z_series.push_back(truncated(zk, js_));
      a = mul_trunc(a, s, js_);
    }
    int jmin = *std::min_element(js_.begin(), js_.end());
    geometric_ = one;
    Poly an = one;
    for (int i = 1; i <= jmin; ++i) {
      an = mul_trunc(an, a, js_);
      geometric_ += an;
    }
    Poly b = z_series.back().coeff_of(kZ0, 0);
    Poly zstar = mul_trunc(b, geometric_, js_);
    images_.resize(static_cast<std::size_t>(n_));
    for (int k = 1; k <= n_; ++k) {
      const Poly& zs = z_series[k - 1];
      images_[k - 1] = zs.coeff_of(kZ0, 0) + mul_trunc(zs.coeff_of(kZ0, 1), zstar, js_);
    }
    powers_.assign(static_cast<std::size_t>(n_), std::vector<Poly>{one});
  }

  const Poly& power(int k, int e) {
    auto& pw = powers_[k - 1];
    while (static_cast<int>(pw.size()) <= e) pw.push_back(mul_trunc(pw.back(), images_[k - 1], js_));
    return pw[e];
  }

  int n_;
  Truncation js_;
  std::vector<std::vector<Rat>> weights_;
  Poly geometric_;
  std::vector<Poly> images_;
  std::vector<std::vector<Poly>> powers_;
  std::mutex mu_;
};

}  // namespace

std::optional<std::vector<int>> qplus_lattice_offsets(const Rat& u, const ChainConfig& cfg) {
  std::vector<int> js;
  for (const auto& site : cfg.sites) {
    Rat j = u + site.spin + site.shift - 1;
    if (j.get_den() != 1 || j < 0 || j > 200) return std::nullopt;
    int ji = static_cast<int>(j.get_num().get_si());
    Rat b = 1 + site.spin - u - site.shift;
    for (int i = 0; i < ji; ++i)
      if (b + i == 0) return std::nullopt;
    js.push_back(ji);
  }
  return js;
}

bool qplus_admissible(const Rat& u, const ChainConfig& cfg) {
  return qplus_lattice_offsets(u, cfg).has_value();
}

LinOp q_op(const QKind& kind, const ChainConfig& cfg) {
  switch (kind.type) {
    case QKind::Type::minus: {
      Rat u = kind.u;
      return LinOp(kind.describe(), cfg.vars(), DegreeContract::preserving,
                   [u, cfg](const Poly& p) { return qminus_closed(u, cfg, p); });
    }
    case QKind::Type::plus: {
      auto impl = std::make_shared<QPlusCollapse>(kind.u, cfg);
      return LinOp(kind.describe(), cfg.vars(), DegreeContract::preserving,
                   [impl](const Poly& p) { return impl->apply(p); });
    }
    case QKind::Type::general: break;
  }
  LinOp composite = q_op(QKind::plus(kind.u1), cfg) * cyclic_shift_op(cfg.size(), ShiftDirection::forward) *
                    q_op(QKind::minus(kind.u2), cfg);
  return composite.renamed(kind.describe());
}

Poly q_apply(const QKind& kind, const ChainConfig& cfg, const Poly& p) { return q_op(kind, cfg)(p); }

Poly qminus_symbolic(const ChainConfig& cfg, const Poly& p) {
  int n = cfg.size();
  SubstMap sub;
  for (int k = 1; k <= n; ++k) {
    Poly zk = Poly::var(VarId::z(k));
    sub[VarId::z(k)] = Poly::var(VarId::t(k)) * (Poly::var(VarId::z(prev_site(k, n))) - zk) + zk;
  }
  Poly expanded = substitute(p, sub);
  Poly u = Poly::var(VarId::u());
  std::vector<std::vector<Poly>> weights(static_cast<std::size_t>(n));
  Poly out;
  for (const auto& [m, c] : expanded.terms()) {
    Poly w(c);
    Monomial rest = m;
    for (int k = 1; k <= n; ++k) {
      const auto& site = cfg.sites[k - 1];
      int e = m.exponent(VarId::t(k));
      auto& wk = weights[k - 1];
      if (wk.empty()) wk.emplace_back(1L);
      while (static_cast<int>(wk.size()) <= e) {
        int i = static_cast<int>(wk.size()) - 1;
        Rat den = 2 * site.spin + i;
        if (den == 0) throw AdmissibilityError("spin not admissible for symbolic Q-");
        wk.push_back(wk.back() * (u + Poly(Rat(site.shift + site.spin + i))) * Rat(1 / den));
      }
      w *= wk[e];
      rest.set(VarId::t(k), 0);
    }
    out += w * Poly::term(Rat(1), rest);
  }
  return out;
}

Poly qminus_trace_apply(const Rat& u, const ChainConfig& cfg, const Poly& p) {
  int d = std::max(p.z_degree(), 0);
  int bound = 2 * d + 3;
  LinOp a = LinOp::identity();
  for (int k = 1; k <= cfg.size(); ++k) {
    VarId zk = VarId::z(k);
    a = a * permutation_op(zk, kZ0) *
        diag_shift_op(cfg.u_plus(k, u), 2 * cfg.sites[k - 1].spin, zk, kZ0, bound);
  }
  return aux_trace_apply(a, p, d, true);
}

Poly qplus_trace_apply(const Rat& u, const ChainConfig& cfg, const Poly& p) {
  auto js = qplus_lattice_offsets(u, cfg);
  if (!js) throw AdmissibilityError("Q+(" + to_string(u) + ") is off the terminating lattice");
  int d = std::max(p.z_degree(), 0);
  int m_max = d + *std::min_element(js->begin(), js->end());
  LinOp a = LinOp::identity();
  for (int k = 1; k <= cfg.size(); ++k) {
    VarId zk = VarId::z(k);
    const auto& site = cfg.sites[k - 1];
    a = a * permutation_op(zk, kZ0) *
        diag_shift_op(2 * site.spin, 1 + site.spin - u - site.shift, kZ0, zk, 0);
  }
  return aux_trace_apply(a, p, m_max, true);
}

Poly qgeneral_trace_apply(const Rat& u1, const Rat& u2, const ChainConfig& cfg, const Poly& p) {
  auto js = qplus_lattice_offsets(u1, cfg);
  if (!js) throw AdmissibilityError("Q(" + to_string(u1) + "|.) is off the terminating lattice");
  int d = std::max(p.z_degree(), 0);
  int m_max = d + *std::min_element(js->begin(), js->end());
  Rat u = (u1 + u2 - 1) / 2;
  Rat aux = (u2 - u1 + 1) / 2;
  LinOp a = LinOp::identity();
  for (int k = 1; k <= cfg.size(); ++k)
    a = a * build_r(RKind::full, PairParams{cfg.u_plus(k, u), cfg.u_minus(k, u), aux, -aux},
                    VarId::z(k), kZ0, 0);
  return aux_trace_apply(a, p, m_max, true);
}

}  // namespace qlab
