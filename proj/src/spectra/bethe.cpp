#include <algorithm>
#include <limits>

#include "qlab/spectra.hpp"

namespace qlab {

namespace {

const std::vector<Rat>& offset_candidates() {
  static const std::vector<Rat> c{Rat(0), Rat(1, 3), Rat(2, 7), Rat(5, 11), Rat(3, 13)};
  return c;
}

// First offset whose nodes offset + i (0 <= i < count) avoid zeros of D+ and D-.
Rat node_offset(const ChainConfig& cfg, int count) {
  for (const Rat& off : offset_candidates()) {
    bool ok = true;
    for (int i = 0; i < count && ok; ++i)
      ok = delta_pm(Sign::plus, off + i, cfg) != 0 && delta_pm(Sign::minus, off + i, cfg) != 0;
    if (ok) return off;
  }
  throw SpectraError("no interpolation offset avoids the zeros of D+-");
}

Rat eigenvalue_of(const LinOp& op, const Poly& vec, const std::string& what) {
  Poly w = op(vec);
  const auto& [m, c] = *vec.terms().begin();
  Rat lambda = w.coeff(m) / c;
  Poly diff = w;
  diff -= vec * Poly(lambda);
  if (!diff.is_zero()) throw SpectraError("vector is not an eigenvector of " + what);
  return lambda;
}

UPoly interpolate_values(const std::vector<Rat>& nodes, const std::vector<Rat>& values) {
  std::vector<Poly> vals(values.begin(), values.end());
  return UPoly::from_poly(interpolate(VarId::u(), nodes, vals), VarId::u());
}

// Interpolant through nodes[0..n-1], confirmed at nodes[n].
template <class F>
UPoly interpolate_checked(const Rat& offset, int count, F&& sample, const std::string& what) {
  std::vector<Rat> nodes, values;
  for (int i = 0; i < count; ++i) {
    nodes.push_back(offset + i);
    values.push_back(sample(nodes.back()));
  }
  UPoly p = interpolate_values(nodes, values);
  Rat extra = offset + count;
  if (p(extra) != sample(extra)) throw SpectraError(what + " is not polynomial of the expected degree");
  return p;
}

UPoly shifted(const UPoly& p, const Rat& s) {
  // p(u + s) by Horner in (u + s)
  UPoly lin(std::vector<Rat>{s, Rat(1)});
  UPoly r;
  for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) {
    r = r * lin;
    if (r.c.empty()) r.c.push_back(0);
    r.c[0] += *it;
    r = UPoly(r.c);
  }
  return r;
}

using CVec = std::vector<cplx>;

CVec cmul(const CVec& a, const CVec& b) {
  if (a.empty() || b.empty()) return {};
  CVec r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

CVec cshift(const CVec& p, double s) {
  CVec r;
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    r = cmul(r, CVec{cplx(s), cplx(1)});
    if (r.empty()) r.push_back(0);
    r[0] += *it;
  }
  return r;
}

CVec to_cvec(const UPoly& p) {
  CVec r;
  for (const auto& x : p.c) r.emplace_back(x.get_d(), 0.0);
  return r;
}

cplx ceval(const CVec& p, cplx x) {
  cplx r = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
  return r;
}

CVec solve_vandermonde(const std::vector<double>& nodes, const CVec& values) {
  auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXcd v(n, n);
  Eigen::VectorXcd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cplx x = 1;
    for (Eigen::Index j = 0; j < n; ++j, x *= nodes[static_cast<std::size_t>(i)]) v(i, j) = x;
    rhs(i) = values[static_cast<std::size_t>(i)];
  }
  Eigen::VectorXcd sol = v.colPivHouseholderQr().solve(rhs);
  return CVec(sol.data(), sol.data() + n);
}

// Drops leading coefficients that are negligible against the largest one.
CVec trim_float(CVec p, double rel = 1e-9) {
  double big = 0;
  for (const auto& x : p) big = std::max(big, std::abs(x));
  while (!p.empty() && std::abs(p.back()) <= rel * big) p.pop_back();
  return p;
}

std::vector<cplx> companion_roots(const CVec& monic) {
  auto n = static_cast<Eigen::Index>(monic.size()) - 1;
  if (n <= 0) return {};
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) c(i, i - 1) = 1;
  for (Eigen::Index i = 0; i < n; ++i) c(i, n - 1) = -monic[static_cast<std::size_t>(i)];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(c);
  if (solver.info() != Eigen::Success) throw SpectraError("companion eigensolver did not converge");
  std::vector<cplx> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

// |lambda|^-1 sum |c_i| |lambda|^i / |p'(lambda)| for a simple root of p.
double root_condition(const CVec& p, cplx lambda) {
  double num = 0;
  double mag = std::abs(lambda);
  for (std::size_t i = 0; i < p.size(); ++i) num += std::abs(p[i]) * std::pow(mag, static_cast<double>(i));
  CVec d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<double>(i));
  double den = std::abs(ceval(d, lambda)) * std::max(mag, 1.0);
  return den > 0 ? num / den : std::numeric_limits<double>::infinity();
}

// Residuals of ((x+l)/(x-l))^N = prod_{k != j} (x - x_k - 1)/(x - x_k + 1), the
// orientation implied by the TQ relation; computed in place.
void bethe_residuals(std::vector<BetheRoot>& roots, const ChainConfig& cfg) {
  if (!cfg.is_homogeneous()) {
    for (auto& r : roots) r.flag = "inhomogeneous";
    return;
  }
  const Rat l = cfg.sites.front().spin;
  const int n = cfg.size();
  const double ld = l.get_d();
  bool all_exact = std::all_of(roots.begin(), roots.end(), [](const BetheRoot& r) { return r.exact.has_value(); });
  for (std::size_t j = 0; j < roots.size(); ++j) {
    auto& r = roots[j];
    if (std::abs(r.value - cplx(ld)) < 1e-12 || std::abs(r.value + cplx(ld)) < 1e-12) {
      r.flag = "pole";
      continue;
    }
    bool singular = false;
    for (std::size_t k = 0; k < roots.size() && !singular; ++k)
      if (k != j) {
        cplx diff = r.value - roots[k].value;
        singular = std::abs(diff - 1.0) < 1e-12 || std::abs(diff + 1.0) < 1e-12;
      }
    if (singular) {
      r.flag = "singular-pair";
      continue;
    }
    if (all_exact) {
      const Rat& x = *r.exact;
      Rat lhs(1);
      for (int s = 0; s < n; ++s) lhs *= (x + l) / (x - l);
      Rat rhs(1);
      for (int m = 1; m < r.multiplicity; ++m) rhs *= -1;
      for (std::size_t k = 0; k < roots.size(); ++k) {
        if (k == j) continue;
        Rat diff = x - *roots[k].exact;
        for (int m = 0; m < roots[k].multiplicity; ++m) rhs *= (diff - 1) / (diff + 1);
      }
      r.exact_residual = lhs - rhs;
      r.residual = std::abs(r.exact_residual->get_d());
    } else {
      cplx x = r.value;
      cplx lhs = std::pow((x + ld) / (x - ld), n);
      cplx rhs = r.multiplicity % 2 ? 1.0 : -1.0;
      for (std::size_t k = 0; k < roots.size(); ++k) {
        if (k == j) continue;
        cplx diff = x - roots[k].value;
        for (int m = 0; m < roots[k].multiplicity; ++m) rhs *= (diff - 1.0) / (diff + 1.0);
      }
      r.residual = std::abs(lhs - rhs);
    }
  }
}

}  // namespace

LinOp QFamily::at(const Rat& u, const ChainConfig& cfg) const {
  return homogeneous ? q_op(QKind::minus(u), cfg) : q_op(QKind::general(u1, u), cfg);
}

std::string QFamily::describe() const { return homogeneous ? "Q-(u)" : "Q(" + to_string(u1) + "|u)"; }

QFamily q_family(const ChainConfig& cfg, const SpectralOptions& opts) {
  if (cfg.is_homogeneous()) return {true, Rat(0)};
  if (opts.q_u1) {
    if (!qplus_admissible(*opts.q_u1, cfg)) throw SpectraError("u1 is off the Q+ lattice of the chain");
    return {false, *opts.q_u1};
  }
  Rat lo = cfg.sites[0].spin + cfg.sites[0].shift;
  for (const auto& s : cfg.sites) lo = std::min(lo, Rat(s.spin + s.shift));
  for (int j = 0; j < 4; ++j)
    if (qplus_admissible(1 - lo + j, cfg)) return {false, 1 - lo + j};
  throw SpectraError("inhomogeneous chain has no admissible Q+ lattice point");
}

EigenPolynomials eigen_polynomials(const Poly& vec, const ChainConfig& cfg, const QFamily& family, int d) {
  if (vec.is_zero()) throw SpectraError("zero vector");
  const int n = cfg.size();
  Rat offset = node_offset(cfg, std::max(n, d) + 2);
  EigenPolynomials out;
  out.node_offset = offset;
  out.lambda = interpolate_checked(
      offset, n + 1, [&](const Rat& u) { return eigenvalue_of(transfer_op(u, cfg), vec, "t(" + to_string(u) + ")"); },
      "transfer eigenvalue");
  UPoly q = interpolate_checked(
      offset, d + 1, [&](const Rat& u) { return eigenvalue_of(family.at(u, cfg), vec, family.describe()); },
      "Q eigenvalue");
  if (q.is_zero()) throw SpectraError("Q eigenvalue vanishes identically on this vector");
  out.q = q.monic();
  return out;
}

EigenPolynomials eigen_polynomials(const Poly& vec, const ChainConfig& cfg, int d) {
  return eigen_polynomials(vec, cfg, q_family(cfg, {}), d);
}

FloatEigenPolynomials eigen_polynomials_float(const std::vector<cplx>& vec, const SectorBasis& basis,
                                              const QFamily& family) {
  const ChainConfig& cfg = basis.cfg;
  const int n = cfg.size(), d = basis.degree;
  std::vector<Rat> re(vec.size()), im(vec.size());
  for (std::size_t i = 0; i < vec.size(); ++i) {
    re[i] = vec[i].real();
    im[i] = vec[i].imag();
  }
  Poly pre = basis.to_poly(re), pim = basis.to_poly(im);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < vec.size(); ++i)
    if (std::abs(vec[i]) > std::abs(vec[arg])) arg = i;
  auto quotient = [&](const LinOp& op) {
    auto a = basis.coordinates(op(pre)), b = basis.coordinates(pim.is_zero() ? Poly() : op(pim));
    cplx lambda = cplx(a[arg].get_d(), b[arg].get_d()) / vec[arg];
    double worst = 0, scale = 0;
    for (std::size_t i = 0; i < vec.size(); ++i) {
      worst = std::max(worst, std::abs(cplx(a[i].get_d(), b[i].get_d()) - lambda * vec[i]));
      scale = std::max(scale, std::abs(lambda * vec[i]));
    }
    if (worst > 1e-7 * std::max(scale, 1.0)) throw SpectraError("floating vector is not an eigenvector of " + op.name());
    return lambda;
  };
  FloatEigenPolynomials out;
  out.node_offset = node_offset(cfg, std::max(n, d) + 2);
  std::vector<double> tn, qn;
  CVec tv, qv;
  for (int i = 0; i <= n; ++i) {
    Rat u = out.node_offset + i;
    tn.push_back(u.get_d());
    tv.push_back(quotient(transfer_op(u, cfg)));
  }
  for (int i = 0; i <= d; ++i) {
    Rat u = out.node_offset + i;
    qn.push_back(u.get_d());
    qv.push_back(quotient(family.at(u, cfg)));
  }
  out.lambda = trim_float(solve_vandermonde(tn, tv));
  CVec q = trim_float(solve_vandermonde(qn, qv));
  if (q.empty()) throw SpectraError("Q eigenvalue vanishes on this vector");
  cplx lead = q.back();
  for (auto& x : q) x /= lead;
  out.q = std::move(q);
  return out;
}

UPoly tq_check(const UPoly& lambda, const UPoly& q, const ChainConfig& cfg) {
  UPoly dp = UPoly::from_poly(delta_pm_poly(Sign::plus, cfg), VarId::u());
  UPoly dm = UPoly::from_poly(delta_pm_poly(Sign::minus, cfg), VarId::u());
  return lambda * q - dp * shifted(q, 1) - dm * shifted(q, -1);
}

double tq_check_float(const std::vector<cplx>& lambda, const std::vector<cplx>& q, const ChainConfig& cfg) {
  CVec dp = to_cvec(UPoly::from_poly(delta_pm_poly(Sign::plus, cfg), VarId::u()));
  CVec dm = to_cvec(UPoly::from_poly(delta_pm_poly(Sign::minus, cfg), VarId::u()));
  CVec lq = cmul(lambda, q), a = cmul(dp, cshift(q, 1)), b = cmul(dm, cshift(q, -1));
  std::size_t len = std::max({lq.size(), a.size(), b.size()});
  lq.resize(len);
  a.resize(len);
  b.resize(len);
  double worst = 0, scale = 0;
  for (std::size_t i = 0; i < len; ++i) {
    worst = std::max(worst, std::abs(lq[i] - a[i] - b[i]));
    scale = std::max({scale, std::abs(lq[i]), std::abs(a[i]), std::abs(b[i])});
  }
  return scale > 0 ? worst / scale : worst;
}

std::vector<BetheRoot> bethe_analyze(const UPoly& q, const ChainConfig& cfg) {
  std::vector<BetheRoot> roots;
  if (q.degree() <= 0) return roots;
  auto factors = squarefree_decomposition(q);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    int mult = static_cast<int>(i) + 1;
    UPoly f = factors[i];
    CVec fc = to_cvec(f);
    for (const Rat& x : rational_roots(f)) {
      BetheRoot r;
      r.value = cplx(x.get_d(), 0.0);
      r.exact = x;
      r.multiplicity = mult;
      r.condition = root_condition(fc, r.value);
      roots.push_back(std::move(r));
      f = divmod(f, UPoly(std::vector<Rat>{-x, Rat(1)})).first;
    }
    for (cplx x : companion_roots(to_cvec(f.monic()))) {
      BetheRoot r;
      r.value = x;
      r.multiplicity = mult;
      r.condition = root_condition(fc, x);
      roots.push_back(std::move(r));
    }
  }
  std::sort(roots.begin(), roots.end(), [](const BetheRoot& a, const BetheRoot& b) {
    return a.value.real() != b.value.real() ? a.value.real() < b.value.real() : a.value.imag() < b.value.imag();
  });
  bethe_residuals(roots, cfg);
  return roots;
}

std::vector<BetheRoot> bethe_analyze(const std::vector<cplx>& q, const ChainConfig& cfg) {
  std::vector<BetheRoot> roots;
  CVec p = trim_float(q);
  if (p.size() <= 1) return roots;
  cplx lead = p.back();
  for (auto& x : p) x /= lead;
  for (cplx x : companion_roots(p)) {
    BetheRoot r;
    r.value = x;
    r.condition = root_condition(p, x);
    roots.push_back(std::move(r));
  }
  bethe_residuals(roots, cfg);
  return roots;
}

std::vector<BetheRecord> analyze_sector(const ChainConfig& cfg, int d, const SpectralOptions& opts) {
  cfg.validate(d + 1);
  SectorBasis basis = sector_basis(cfg, d);
  if (opts.mode == EigenMode::exact && basis.dim() > opts.exact_bound)
    throw SpectraError("sector d=" + std::to_string(d) + " has dimension " + std::to_string(basis.dim()) +
                       " above the exact bound " + std::to_string(opts.exact_bound) + "; use floating mode");
  QFamily family = q_family(cfg, opts);
  DenseMatrix t = materialize(transfer_op(opts.u0, cfg), basis);
  std::vector<DenseMatrix> qs;
  for (const Rat& u : opts.q_probes) qs.push_back(materialize(family.at(u, cfg), basis));
  auto pairs = eigen_data(t, qs, opts.mode, opts.exact_bound);
  std::vector<BetheRecord> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    BetheRecord rec;
    rec.degree = d;
    rec.index = i;
    rec.exact = pairs[i].exact;
    rec.pair = std::move(pairs[i]);
    if (rec.pair.multiplicity > 1) rec.note = "joint eigenspace of dimension " + std::to_string(rec.pair.multiplicity);
    try {
      if (rec.exact) {
        rec.polys = eigen_polynomials(basis.to_poly(rec.pair.vector), cfg, family, d);
        rec.tq_exact_zero = tq_check(rec.polys->lambda, rec.polys->q, cfg).is_zero();
        rec.roots = bethe_analyze(rec.polys->q, cfg);
      } else {
        rec.fpolys = eigen_polynomials_float(rec.pair.fvector, basis, family);
        rec.tq_residual = tq_check_float(rec.fpolys->lambda, rec.fpolys->q, cfg);
        rec.roots = bethe_analyze(rec.fpolys->q, cfg);
      }
    } catch (const SpectraError& e) {
      rec.note += (rec.note.empty() ? "" : "; ") + std::string(e.what());
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace qlab
