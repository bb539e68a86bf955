#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlab/chainops.hpp"

namespace qlab {

class SpectraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using cplx = std::complex<double>;

// Dense univariate polynomial over Q, coefficients in ascending order.
struct UPoly {
  std::vector<Rat> c;

  UPoly() = default;
  explicit UPoly(std::vector<Rat> coeffs);
  static UPoly from_poly(const Poly& p, VarId v);  // p must only involve v

  int degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c.empty(); }
  const Rat& lead() const { return c.back(); }
  Rat operator()(const Rat& x) const;
  Poly to_poly(VarId v) const;
  UPoly derivative() const;
  UPoly monic() const;

  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c == b.c; }
};

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
UPoly gcd(const UPoly& a, const UPoly& b);  // monic, gcd(0, 0) = 0
UPoly squarefree_part(const UPoly& p);
// Square-free factors f_1, f_2, ... with p = lead * prod f_i^i.
std::vector<UPoly> squarefree_decomposition(const UPoly& p);
// Number of distinct real roots in (a, b].
int sturm_count(const UPoly& p, const Rat& a, const Rat& b);
// Distinct rational roots, ascending.
std::vector<Rat> rational_roots(const UPoly& p);
// Multiplicity of x as a root of p.
int root_multiplicity(const UPoly& p, const Rat& x);

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rat& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rat& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool is_zero() const;
  DenseMatrix transpose() const;
  Eigen::MatrixXd to_double() const;

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator*(const Rat& s, const DenseMatrix& a);
  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b);

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rat> a_;
};

std::vector<Rat> operator*(const DenseMatrix& m, const std::vector<Rat>& v);

// Reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(DenseMatrix& m);
// Columns span the kernel; free variables carry the identity.
DenseMatrix nullspace(const DenseMatrix& m);
// Coefficients of det(x - m), ascending.
UPoly characteristic_polynomial(const DenseMatrix& m);
DenseMatrix evaluate_at(const UPoly& p, const DenseMatrix& m);

struct SectorBasis {
  ChainConfig cfg;
  int degree = 0;
  std::vector<Monomial> monomials;

  std::size_t dim() const { return monomials.size(); }
  Poly to_poly(const std::vector<Rat>& coords) const;
  std::vector<Rat> coordinates(const Poly& p) const;  // throws if p leaves the sector
};

SectorBasis sector_basis(const ChainConfig& cfg, int d);

// Column j holds the coordinates of op(basis[j]).
DenseMatrix materialize(const LinOp& op, const SectorBasis& basis);

enum class EigenMode { exact, floating };

struct Eigenpair {
  bool exact = true;
  std::vector<Rat> vector;                 // exact mode, first nonzero entry 1
  std::vector<cplx> fvector;               // floating data, largest entry 1
  std::vector<Rat> values;                 // one per input matrix
  std::vector<cplx> fvalues;
  std::size_t multiplicity = 1;            // dimension of the joint eigenspace
  bool irrational = false;                 // eigenvalue outside Q, floating data only
  double residual_bound = 0;               // max |M v - lambda v| / |v|, computed exactly
};

constexpr std::size_t kExactDimensionBound = 12;

// Joint eigen-data of t and commuting Q matrices. Throws SpectraError if the
// inputs do not commute exactly.
std::vector<Eigenpair> eigen_data(const DenseMatrix& t, const std::vector<DenseMatrix>& qs,
                                  EigenMode mode, std::size_t exact_bound = kExactDimensionBound);

// Spectral parameters used to probe a sector.
struct SpectralOptions {
  Rat u0 = Rat(3, 7);                      // transfer matrix used for splitting
  std::vector<Rat> q_probes = {Rat(1, 5), Rat(7, 11)};
  std::optional<Rat> q_u1;                 // fixed u1 of Q(u1|u) for inhomogeneous chains
  EigenMode mode = EigenMode::exact;
  std::size_t exact_bound = kExactDimensionBound;
};

// Q(u) family probed on a chain: Q-(u) when homogeneous, Q(u1|u) otherwise.
struct QFamily {
  bool homogeneous = true;
  Rat u1;
  LinOp at(const Rat& u, const ChainConfig& cfg) const;
  std::string describe() const;
};

QFamily q_family(const ChainConfig& cfg, const SpectralOptions& opts);

struct EigenPolynomials {
  UPoly lambda;
  UPoly q;          // monic
  Rat node_offset;  // nodes are offset + 0, 1, 2, ...
};

// Exact eigen-polynomials of a joint eigenvector of sector degree d.
EigenPolynomials eigen_polynomials(const Poly& vec, const ChainConfig& cfg, const QFamily& family,
                                   int d);
EigenPolynomials eigen_polynomials(const Poly& vec, const ChainConfig& cfg, int d);

struct FloatEigenPolynomials {
  std::vector<cplx> lambda;  // ascending
  std::vector<cplx> q;       // monic
  Rat node_offset;
};

FloatEigenPolynomials eigen_polynomials_float(const std::vector<cplx>& vec, const SectorBasis& basis,
                                              const QFamily& family);

// Lambda(u) Q(u) - D+(u) Q(u+1) - D-(u) Q(u-1).
UPoly tq_check(const UPoly& lambda, const UPoly& q, const ChainConfig& cfg);
// Max coefficient of the floating residual relative to the largest term.
double tq_check_float(const std::vector<cplx>& lambda, const std::vector<cplx>& q,
                      const ChainConfig& cfg);

struct BetheRoot {
  cplx value;
  std::optional<Rat> exact;           // rational root
  int multiplicity = 1;
  std::optional<double> residual;     // |Bethe equation residual|
  std::optional<Rat> exact_residual;  // when every root is rational
  double condition = 0;
  std::string flag;                   // "pole", "singular-pair", "inhomogeneous"
};

std::vector<BetheRoot> bethe_analyze(const UPoly& q, const ChainConfig& cfg);
std::vector<BetheRoot> bethe_analyze(const std::vector<cplx>& q, const ChainConfig& cfg);

struct BetheRecord {
  int degree = 0;
  std::size_t index = 0;
  Eigenpair pair;
  bool exact = true;
  std::optional<EigenPolynomials> polys;
  std::optional<FloatEigenPolynomials> fpolys;
  bool tq_exact_zero = false;
  double tq_residual = 0;  // floating relative residual; 0 in the exact path
  std::vector<BetheRoot> roots;
  std::string note;
};

std::vector<BetheRecord> analyze_sector(const ChainConfig& cfg, int d, const SpectralOptions& opts = {});

}  // namespace qlab
