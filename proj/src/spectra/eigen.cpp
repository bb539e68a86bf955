#include <algorithm>
#include <map>

#include "qlab/spectra.hpp"

namespace qlab {

namespace {

// Subspace with basis columns b; row piv[j] of b is the unit vector e_j.
struct Subspace {
  DenseMatrix b;
  std::vector<std::size_t> piv;
};

Subspace normalize(const DenseMatrix& cols) {
  DenseMatrix t = cols.transpose();
  auto piv = rref(t);
  DenseMatrix b(cols.rows(), piv.size());
  for (std::size_t j = 0; j < piv.size(); ++j)
    for (std::size_t i = 0; i < cols.rows(); ++i) b(i, j) = t(j, i);
  return {std::move(b), std::move(piv)};
}

DenseMatrix restrict_to(const DenseMatrix& m, const Subspace& s) {
  DenseMatrix mb = m * s.b;
  std::size_t k = s.piv.size();
  DenseMatrix a(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) a(i, j) = mb(s.piv[i], j);
  if (!(s.b * a == mb)) throw SpectraError("subspace is not invariant; operators do not commute");
  return a;
}

std::vector<Rat> column(const DenseMatrix& m, std::size_t j) {
  std::vector<Rat> v(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m(i, j);
  return v;
}

double magnitude(const Rat& re, const Rat& im) {
  double a = re.get_d(), b = im.get_d();
  return std::sqrt(a * a + b * b);
}

// max_k |(M v - lambda v)_k| / max_k |v_k|, evaluated in exact arithmetic.
double residual_bound(const DenseMatrix& m, const std::vector<cplx>& v, cplx lambda) {
  std::size_t n = v.size();
  std::vector<Rat> a(n), b(n);
  double vmax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = v[i].real();
    b[i] = v[i].imag();
    vmax = std::max(vmax, std::abs(v[i]));
  }
  Rat lr = lambda.real(), li = lambda.imag();
  std::vector<Rat> ma = m * a, mb = m * b;
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rat re = ma[i] - lr * a[i] + li * b[i];
    Rat im = mb[i] - lr * b[i] - li * a[i];
    worst = std::max(worst, magnitude(re, im));
  }
  return vmax > 0 ? worst / vmax : worst;
}

class Splitter {
 public:
  explicit Splitter(std::vector<DenseMatrix> ops) : ops_(std::move(ops)) {}

  void split(const Subspace& s, std::size_t i) {
    std::size_t k = s.piv.size();
    if (k == 0) return;
    if (i == ops_.size() || k == 1) {
      leaf(s);
      return;
    }
    DenseMatrix a = restrict_to(ops_[i], s);
    UPoly chi = characteristic_polynomial(a);
    UPoly rest = chi;
    for (const Rat& lambda : rational_roots(chi)) {
      DenseMatrix shifted = a;
      for (std::size_t d = 0; d < k; ++d) shifted(d, d) -= lambda;
      split(normalize(s.b * nullspace(shifted)), i + 1);
      UPoly lin(std::vector<Rat>{-lambda, Rat(1)});
      for (int m = root_multiplicity(chi, lambda); m > 0; --m) rest = divmod(rest, lin).first;
    }
    if (rest.degree() > 0) floating(normalize(s.b * nullspace(evaluate_at(rest, a))), true);
  }

  // Floating eigen-decomposition of a generic combination on the subspace.
  void floating(const Subspace& s, bool irrational) {
    std::size_t k = s.piv.size();
    if (k == 0) return;
    Eigen::MatrixXd comb = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t o = 0; o < ops_.size(); ++o)
      comb += (1.0 / static_cast<double>(2 * o + 1)) * restrict_to(ops_[o], s).to_double();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(comb);
    if (solver.info() != Eigen::Success) throw SpectraError("floating eigensolver did not converge");
    Eigen::MatrixXcd full = s.b.to_double().cast<cplx>() * solver.eigenvectors();
    for (Eigen::Index c = 0; c < full.cols(); ++c) {
      Eigenpair p;
      p.exact = false;
      p.irrational = irrational;
      Eigen::Index arg = 0;
      full.col(c).cwiseAbs().maxCoeff(&arg);
      cplx scale = full(arg, c);
      for (Eigen::Index r = 0; r < full.rows(); ++r) p.fvector.push_back(full(r, c) / scale);
      Eigen::VectorXcd v = Eigen::Map<Eigen::VectorXcd>(p.fvector.data(), static_cast<Eigen::Index>(p.fvector.size()));
      for (const auto& op : ops_) {
        cplx lambda = (op.to_double().cast<cplx>() * v)(arg);
        p.fvalues.push_back(lambda);
        p.residual_bound = std::max(p.residual_bound, residual_bound(op, p.fvector, lambda));
      }
      pairs_.push_back(std::move(p));
    }
  }

  std::vector<Eigenpair> take() { return std::move(pairs_); }

 private:
  void leaf(const Subspace& s) {
    for (std::size_t j = 0; j < s.piv.size(); ++j) {
      Eigenpair p;
      p.vector = column(s.b, j);
      auto first = std::find_if(p.vector.begin(), p.vector.end(), [](const Rat& x) { return x != 0; });
      std::size_t at = static_cast<std::size_t>(first - p.vector.begin());
      Rat scale = *first;
      for (auto& x : p.vector) x /= scale;
      p.multiplicity = s.piv.size();
      for (const auto& op : ops_) {
        std::vector<Rat> w = op * p.vector;
        Rat lambda = w[at];
        for (std::size_t r = 0; r < w.size(); ++r)
          if (w[r] != lambda * p.vector[r]) throw SpectraError("leaf vector is not a joint eigenvector");
        p.values.push_back(lambda);
        p.fvalues.emplace_back(lambda.get_d(), 0.0);
      }
      for (const auto& x : p.vector) p.fvector.emplace_back(x.get_d(), 0.0);
      pairs_.push_back(std::move(p));
    }
  }

  std::vector<DenseMatrix> ops_;
  std::vector<Eigenpair> pairs_;
};

bool float_less(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return a.size() < b.size();
}

}  // namespace

Poly SectorBasis::to_poly(const std::vector<Rat>& coords) const {
  if (coords.size() != monomials.size()) throw std::invalid_argument("coordinate vector has wrong length");
  Poly p;
  for (std::size_t i = 0; i < coords.size(); ++i) p.add_term(monomials[i], coords[i]);
  return p;
}

std::vector<Rat> SectorBasis::coordinates(const Poly& p) const {
  std::vector<Rat> out(monomials.size());
  for (const auto& [m, c] : p.terms()) {
    auto it = std::lower_bound(monomials.begin(), monomials.end(), m, GradedLexOrder{});
    if (it == monomials.end() || GradedLexOrder{}(m, *it))
      throw SpectraError("image term " + to_string(m) + " leaves the degree-" + std::to_string(degree) +
                         " sector");
    out[static_cast<std::size_t>(it - monomials.begin())] = c;
  }
  return out;
}

SectorBasis sector_basis(const ChainConfig& cfg, int d) {
  if (d < 0) throw std::invalid_argument("negative sector degree");
  auto vars = cfg.vars();
  SectorBasis b{cfg, d, monomial_basis(vars, d, BasisMode::exact_degree)};
  std::sort(b.monomials.begin(), b.monomials.end(), GradedLexOrder{});
  return b;
}

DenseMatrix materialize(const LinOp& op, const SectorBasis& basis) {
  std::size_t n = basis.dim();
  DenseMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    auto col = basis.coordinates(op(Poly::term(Rat(1), basis.monomials[j])));
    for (std::size_t i = 0; i < n; ++i) m(i, j) = std::move(col[i]);
  }
  return m;
}

std::vector<Eigenpair> eigen_data(const DenseMatrix& t, const std::vector<DenseMatrix>& qs, EigenMode mode,
                                  std::size_t exact_bound) {
  std::vector<DenseMatrix> ops{t};
  ops.insert(ops.end(), qs.begin(), qs.end());
  for (const auto& op : ops)
    if (op.rows() != t.rows() || op.cols() != t.rows()) throw std::invalid_argument("matrix shape mismatch");
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i + 1; j < ops.size(); ++j)
      if (!(ops[i] * ops[j] == ops[j] * ops[i]))
        throw SpectraError("input matrices " + std::to_string(i) + " and " + std::to_string(j) + " do not commute");
  std::size_t n = t.rows();
  if (mode == EigenMode::exact && n > exact_bound)
    throw SpectraError("dimension " + std::to_string(n) + " exceeds the exact bound " + std::to_string(exact_bound));
  Splitter splitter(ops);
  Subspace whole{DenseMatrix::identity(n), {}};
  for (std::size_t i = 0; i < n; ++i) whole.piv.push_back(i);
  if (mode == EigenMode::exact)
    splitter.split(whole, 0);
  else
    splitter.floating(whole, false);
  auto pairs = splitter.take();
  std::stable_sort(pairs.begin(), pairs.end(), [](const Eigenpair& a, const Eigenpair& b) {
    if (a.exact != b.exact) return a.exact;
    if (a.exact) return std::lexicographical_compare(a.values.begin(), a.values.end(), b.values.begin(), b.values.end());
    return float_less(a.fvalues, b.fvalues);
  });
  return pairs;
}

}  // namespace qlab
