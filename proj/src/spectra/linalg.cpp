#include <algorithm>

#include "qlab/spectra.hpp"

namespace qlab {

namespace {

void trim(std::vector<Rat>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

int sign_of(const Rat& x) { return sgn(x); }

int sign_changes(const std::vector<UPoly>& seq, const Rat& x) {
  int changes = 0;
  int last = 0;
  for (const auto& p : seq) {
    int s = sign_of(p(x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::vector<UPoly> sturm_sequence(const UPoly& p) {
  std::vector<UPoly> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    UPoly r = divmod(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    for (auto& x : r.c) x = -x;
    seq.push_back(std::move(r));
  }
  return seq;
}

mpz_class lcm_of_denominators(const UPoly& p) {
  mpz_class l = 1;
  for (const auto& x : p.c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

}  // namespace

UPoly::UPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(c); }

UPoly UPoly::from_poly(const Poly& p, VarId v) {
  std::vector<Rat> out;
  for (const auto& [m, coeff] : p.terms()) {
    int e = m.exponent(v);
    if (m.degree() != e) throw std::invalid_argument("polynomial involves more than " + v.name());
    if (out.size() <= static_cast<std::size_t>(e)) out.resize(static_cast<std::size_t>(e) + 1);
    out[static_cast<std::size_t>(e)] += coeff;
  }
  return UPoly(std::move(out));
}

Rat UPoly::operator()(const Rat& x) const {
  Rat r(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

Poly UPoly::to_poly(VarId v) const {
  Poly p;
  for (std::size_t i = 0; i < c.size(); ++i) p.add_term(Monomial::of(v, static_cast<int>(i)), c[i]);
  return p;
}

UPoly UPoly::derivative() const {
  std::vector<Rat> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(c[i] * static_cast<long>(i));
  return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  std::vector<Rat> out = c;
  Rat l = lead();
  for (auto& x : out) x /= l;
  return UPoly(std::move(out));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rat> out(a.c.size() + b.c.size() - 1);
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) out[i + j] += a.c[i] * b.c[j];
  return UPoly(std::move(out));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  std::vector<Rat> out(std::max(a.c.size(), b.c.size()));
  for (std::size_t i = 0; i < a.c.size(); ++i) out[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) out[i] -= b.c[i];
  return UPoly(std::move(out));
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rat> r = a.c;
  if (a.degree() < b.degree()) return {UPoly(), a};
  std::vector<Rat> q(static_cast<std::size_t>(a.degree() - b.degree()) + 1);
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    Rat f = r[static_cast<std::size_t>(k + b.degree())] / b.lead();
    q[static_cast<std::size_t>(k)] = f;
    if (f == 0) continue;
    for (int i = 0; i <= b.degree(); ++i) r[static_cast<std::size_t>(k + i)] -= f * b.c[static_cast<std::size_t>(i)];
  }
  return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  while (!y.is_zero()) {
    UPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

UPoly squarefree_part(const UPoly& p) {
  if (p.degree() <= 0) return p.monic();
  return divmod(p, gcd(p, p.derivative())).first.monic();
}

std::vector<UPoly> squarefree_decomposition(const UPoly& p) {
  std::vector<UPoly> out;
  if (p.degree() <= 0) return out;
  UPoly a = gcd(p, p.derivative());
  UPoly b = divmod(p, a).first;
  UPoly c = divmod(p.derivative(), a).first;
  UPoly d = c - b.derivative();
  while (b.degree() > 0) {
    UPoly f = gcd(b, d);
    b = divmod(b, f).first;
    c = divmod(d, f).first;
    d = c - b.derivative();
    out.push_back(f.monic());
  }
  return out;
}

int sturm_count(const UPoly& p, const Rat& a, const Rat& b) {
  auto seq = sturm_sequence(squarefree_part(p));
  return sign_changes(seq, a) - sign_changes(seq, b);
}

std::vector<Rat> rational_roots(const UPoly& p) {
  std::vector<Rat> roots;
  if (p.degree() <= 0) return roots;
  UPoly s = squarefree_part(p);
  mpz_class scale = lcm_of_denominators(s);
  Rat lead_int = s.lead() * scale;
  Rat grid = 1 / abs(lead_int);  // rational roots have denominators dividing the lead
  Rat bound(1);
  for (const auto& x : s.c) bound = std::max(bound, Rat(abs(x / s.lead()) + 1));
  auto seq = sturm_sequence(s);
  // (a, b] intervals with a known root count
  struct Interval {
    Rat a, b;
    int va, vb;
  };
  std::vector<Interval> stack{{-bound, bound, sign_changes(seq, -bound), sign_changes(seq, bound)}};
  while (!stack.empty()) {
    Interval iv = stack.back();
    stack.pop_back();
    if (iv.va - iv.vb == 0) continue;
    if (iv.b - iv.a < grid) {
      mpz_class k;
      Rat scaled = iv.b / grid;
      mpz_fdiv_q(k.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
      Rat x = Rat(k) * grid;
      if (x > iv.a && s(x) == 0) roots.push_back(x);
      continue;
    }
    Rat mid = (iv.a + iv.b) / 2;
    int vm = sign_changes(seq, mid);
    stack.push_back({iv.a, mid, iv.va, vm});
    stack.push_back({mid, iv.b, vm, iv.vb});
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

int root_multiplicity(const UPoly& p, const Rat& x) {
  if (p.is_zero()) throw std::domain_error("multiplicity in the zero polynomial");
  UPoly lin(std::vector<Rat>{-x, Rat(1)});
  UPoly cur = p;
  int m = 0;
  for (;;) {
    auto [q, r] = divmod(cur, lin);
    if (!r.is_zero()) return m;
    cur = std::move(q);
    ++m;
  }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool DenseMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Rat& x) { return x == 0; });
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Eigen::MatrixXd DenseMatrix::to_double() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).get_d();
  return m;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
  DenseMatrix r(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rat& x = a(i, k);
      if (x == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += x * b(k, j);
    }
  return r;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix shape mismatch");
  DenseMatrix r = a;
  for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
  return r;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix shape mismatch");
  DenseMatrix r = a;
  for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= b.a_[i];
  return r;
}

DenseMatrix operator*(const Rat& s, const DenseMatrix& a) {
  DenseMatrix r = a;
  for (auto& x : r.a_) x *= s;
  return r;
}

bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

std::vector<Rat> operator*(const DenseMatrix& m, const std::vector<Rat>& v) {
  if (m.cols() != v.size()) throw std::invalid_argument("matrix-vector shape mismatch");
  std::vector<Rat> r(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (v[j] != 0) r[i] += m(i, j) * v[j];
  return r;
}

std::vector<std::size_t> rref(DenseMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    Rat inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      Rat f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

DenseMatrix nullspace(const DenseMatrix& m) {
  DenseMatrix r = m;
  auto pivots = rref(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < m.cols(); ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  DenseMatrix n(m.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    n(free_cols[k], k) = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) n(pivots[i], k) = -r(i, free_cols[k]);
  }
  return n;
}

UPoly characteristic_polynomial(const DenseMatrix& a) {
  // Faddeev-LeVerrier
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("characteristic polynomial of a non-square matrix");
  std::vector<Rat> c(n + 1);
  c[n] = 1;
  DenseMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
    DenseMatrix am = a * m;
    Rat tr(0);
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / static_cast<long>(k);
  }
  return UPoly(std::move(c));
}

DenseMatrix evaluate_at(const UPoly& p, const DenseMatrix& m) {
  DenseMatrix r(m.rows(), m.cols());
  for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) {
    r = r * m;
    for (std::size_t i = 0; i < m.rows(); ++i) r(i, i) += *it;
  }
  return r;
}

}  // namespace qlab
