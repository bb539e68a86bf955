#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "qlab/spectra.hpp"
#include "support.hpp"

using namespace qlab;
using namespace qlab::test;

namespace {

UPoly up(std::vector<Rat> c) { return UPoly(std::move(c)); }

UPoly linear(const Rat& root) { return up({-root, Rat(1)}); }

DenseMatrix from_rows(std::vector<std::vector<Rat>> rows) {
  DenseMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

LinOp total_s_plus(const ChainConfig& cfg) {
  LinOp s = LinOp::zero();
  for (int k = 1; k <= cfg.size(); ++k) s = s + sl2_generators(cfg.sites[k - 1].spin, VarId::z(k)).s_plus;
  return s;
}

}  // namespace

TEST_CASE("sector_basis examples") {
  auto b = sector_basis(ChainConfig::homogeneous(2, q(1, 2)), 1);
  REQUIRE(b.dim() == 2);
  CHECK(b.monomials[0] == Monomial::of(VarId::z(1)));
  CHECK(b.monomials[1] == Monomial::of(VarId::z(2)));
  CHECK(sector_basis(ChainConfig::homogeneous(3, q(1, 2)), 3).dim() == static_cast<std::size_t>(binomial(5, 2)));
  auto c = sector_basis(ChainConfig::homogeneous(1, q(1)), 5);
  REQUIRE(c.dim() == 1);
  CHECK(c.monomials[0] == Monomial::of(VarId::z(1), 5));
  CHECK_THROWS_AS(c.coordinates(z(1)), SpectraError);
}

TEST_CASE("materialize examples") {
  auto h2 = ChainConfig::homogeneous(2, q(1, 2));
  auto b = sector_basis(h2, 2);
  CHECK(materialize(LinOp::identity(), b) == DenseMatrix::identity(b.dim()));

  Rat u0 = q(3, 7);
  auto one = ChainConfig::homogeneous(1, q(5, 3));
  for (int d = 0; d <= 3; ++d) {
    auto s = sector_basis(one, d);
    CHECK(materialize(transfer_op(u0, one), s) == (2 * u0) * DenseMatrix::identity(1));
  }
  auto s1 = sector_basis(h2, 1);
  CHECK(materialize(cyclic_shift_op(2, ShiftDirection::forward), s1) == from_rows({{0, 1}, {1, 0}}));
  CHECK_THROWS_AS(materialize(LinOp::multiply(z(1)), s1), SpectraError);
}

TEST_CASE("eigen_data examples") {
  SUBCASE("N=2 spin 1/2, d=1") {
    auto h = ChainConfig::homogeneous(2, q(1, 2));
    auto b = sector_basis(h, 1);
    auto t = materialize(transfer_op(q(3, 7), h), b);
    auto qm = materialize(q_op(QKind::minus(q(1, 5)), h), b);
    auto pairs = eigen_data(t, {qm}, EigenMode::exact);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].vector == std::vector<Rat>{1, 1});
    CHECK(pairs[1].vector == std::vector<Rat>{1, -1});
    // oracle: permutation symmetry splits the sector into even and odd parts
    auto p = materialize(permutation_op(VarId::z(1), VarId::z(2)), b);
    CHECK(p * pairs[0].vector == pairs[0].vector);
    for (const auto& pr : pairs) {
      CHECK(pr.exact);
      CHECK(t * pr.vector == std::vector<Rat>{pr.values[0] * pr.vector[0], pr.values[0] * pr.vector[1]});
    }
  }
  SUBCASE("N=1: every basis vector") {
    auto one = ChainConfig::homogeneous(1, q(1));
    auto b = sector_basis(one, 4);
    auto pairs = eigen_data(materialize(transfer_op(q(3, 7), one), b), {}, EigenMode::exact);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].vector == std::vector<Rat>{1});
    CHECK(pairs[0].values[0] == 2 * q(3, 7));
  }
  SUBCASE("diagonal input") {
    auto d = from_rows({{3, 0, 0}, {0, q(-1, 2), 0}, {0, 0, 7}});
    auto pairs = eigen_data(d, {}, EigenMode::exact);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].vector == std::vector<Rat>{0, 1, 0});
    CHECK(pairs[1].vector == std::vector<Rat>{1, 0, 0});
    CHECK(pairs[2].vector == std::vector<Rat>{0, 0, 1});
  }
  SUBCASE("non-commuting inputs are rejected") {
    auto a = from_rows({{1, 1}, {0, 2}}), b = from_rows({{1, 0}, {1, 1}});
    CHECK_THROWS_AS(eigen_data(a, {b}, EigenMode::exact), SpectraError);
  }
  SUBCASE("irrational eigenvalues go to the floating tier") {
    auto a = from_rows({{0, 2}, {1, 0}});
    auto pairs = eigen_data(a, {}, EigenMode::exact);
    REQUIRE(pairs.size() == 2);
    for (const auto& pr : pairs) {
      CHECK_FALSE(pr.exact);
      CHECK(pr.irrational);
      CHECK(std::abs(std::abs(pr.fvalues[0].real()) - std::sqrt(2.0)) < 1e-12);
      CHECK(pr.residual_bound < 1e-12);
    }
  }
  SUBCASE("exact bound") {
    auto big = DenseMatrix::identity(13);
    CHECK_THROWS_AS(eigen_data(big, {}, EigenMode::exact), SpectraError);
    CHECK(eigen_data(big, {}, EigenMode::floating).size() == 13);
  }
}

TEST_CASE("eigen_polynomials examples") {
  auto h = ChainConfig::homogeneous(2, q(1, 2));
  auto vac = eigen_polynomials(Poly(1), h, 0);
  CHECK(vac.lambda == up({q(1, 2), 0, 2}));
  CHECK(vac.q == up({1}));
  auto mag = eigen_polynomials(z(1) - z(2), h, 1);
  CHECK(mag.lambda == up({q(5, 2), 0, 2}));
  CHECK(mag.q == up({0, 1}));
  auto desc = eigen_polynomials(z(1) + z(2), h, 1);
  CHECK(desc.q == up({1}));
  CHECK(desc.lambda == vac.lambda);
  CHECK_THROWS_AS(eigen_polynomials(z(1), h, 1), SpectraError);
}

TEST_CASE("tq_check examples") {
  auto h = ChainConfig::homogeneous(2, q(1, 2));
  CHECK(tq_check(up({q(1, 2), 0, 2}), up({1}), h).is_zero());
  CHECK(tq_check(up({q(5, 2), 0, 2}), up({0, 1}), h).is_zero());
  auto bad = tq_check(up({q(5, 2), 1, 2}), up({0, 1}), h);
  CHECK_FALSE(bad.is_zero());
  // oracle: residual of the corrupted Lambda at sample points
  for (Rat x : {q(0), q(2), q(-3, 4)}) {
    Rat lam = 2 * x * x + x + q(5, 2);
    Rat r = lam * x - (x + q(1, 2)) * (x + q(1, 2)) * (x + 1) - (x - q(1, 2)) * (x - q(1, 2)) * (x - 1);
    CHECK(bad(x) == r);
  }
}

TEST_CASE("bethe_analyze examples") {
  auto h = ChainConfig::homogeneous(2, q(1, 2));
  auto r = bethe_analyze(up({0, 1}), h);
  REQUIRE(r.size() == 1);
  REQUIRE(r[0].exact.has_value());
  CHECK(*r[0].exact == 0);
  REQUIRE(r[0].exact_residual.has_value());
  Rat oracle = (q(1, 2) / q(-1, 2)) * (q(1, 2) / q(-1, 2)) - 1;
  CHECK(*r[0].exact_residual == oracle);
  CHECK(*r[0].exact_residual == 0);

  CHECK(bethe_analyze(up({1}), h).empty());

  auto c = bethe_analyze(up({1, 0, 1}), h);
  REQUIRE(c.size() == 2);
  std::sort(c.begin(), c.end(), [](const BetheRoot& a, const BetheRoot& b) { return a.value.imag() < b.value.imag(); });
  CHECK(std::abs(c[0].value - cplx(0, -1)) < 1e-12);
  CHECK(std::abs(c[1].value - cplx(0, 1)) < 1e-12);
  for (const auto& root : c) {
    CHECK_FALSE(root.exact.has_value());
    CHECK(root.residual.has_value());
  }

  auto pole = bethe_analyze(linear(q(1, 2)), h);
  REQUIRE(pole.size() == 1);
  CHECK(pole[0].flag == "pole");
  CHECK_FALSE(pole[0].residual.has_value());
}

TEST_CASE("rational roots and square-free parts") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 20; ++i) {
    std::vector<Rat> roots;
    UPoly p = up({2, 0, 1});  // no rational roots
    for (int k = 0; k < 3; ++k) {
      Rat x = random_rat(rng, 9, 5);
      roots.push_back(x);
      p = p * linear(x);
    }
    p = p * up({random_rat(rng) + q(1, 9)});
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    CHECK(rational_roots(p) == roots);
    for (const auto& x : roots) CHECK(p(x) == 0);
    CHECK(squarefree_part(p).degree() == static_cast<int>(roots.size()) + 2);
  }
  CHECK(root_multiplicity(linear(q(1, 3)) * linear(q(1, 3)) * linear(q(2)), q(1, 3)) == 2);
  CHECK(sturm_count(up({-2, 0, 1}), q(0), q(2)) == 1);
  CHECK(sturm_count(up({-2, 0, 1}), q(-2), q(2)) == 2);
}

TEST_CASE("characteristic polynomial") {
  auto tri = from_rows({{2, 5, q(1, 3)}, {0, q(-1, 2), 4}, {0, 0, 3}});
  CHECK(characteristic_polynomial(tri) == linear(2) * linear(q(-1, 2)) * linear(3));
  std::mt19937_64 rng(42);
  for (int i = 0; i < 10; ++i) {
    DenseMatrix m(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) m(r, c) = random_rat(rng);
    CHECK(evaluate_at(characteristic_polynomial(m), m).is_zero());
    auto ns = nullspace(m - m);
    CHECK(ns == DenseMatrix::identity(4));
  }
}

TEST_CASE("property: exact commutation of sector matrices") {
  for (int n = 2; n <= 3; ++n) {
    auto h = ChainConfig::homogeneous(n, q(1, 2));
    for (int d = 1; d <= 3; ++d) {
      auto b = sector_basis(h, d);
      auto t0 = materialize(transfer_op(q(3, 7), h), b), t1 = materialize(transfer_op(q(-5, 4), h), b);
      auto m0 = materialize(q_op(QKind::minus(q(1, 5)), h), b), m1 = materialize(q_op(QKind::minus(q(7, 11)), h), b);
      CHECK(t0 * t1 == t1 * t0);
      CHECK(m0 * m1 == m1 * m0);
      CHECK(t0 * m0 == m0 * t0);
      CHECK(t1 * m1 == m1 * t1);
    }
  }
}

TEST_CASE("property: TQ residual vanishes for exact eigenpairs") {
  for (Rat spin : {q(1, 2), q(1)})
    for (int n = 1; n <= 3; ++n) {
      auto h = ChainConfig::homogeneous(n, spin);
      for (int d = 0; d <= 3; ++d) {
        for (const auto& rec : analyze_sector(h, d)) {
          if (!rec.exact) {
            CHECK(rec.tq_residual < 1e-10);
            continue;
          }
          if (!rec.polys) continue;
          CHECK(rec.tq_exact_zero);
          CHECK(tq_check(rec.polys->lambda, rec.polys->q, h).is_zero());
          CHECK(rec.polys->q.degree() <= d);
          CHECK(rec.polys->lambda.degree() == n);
        }
      }
    }
}

TEST_CASE("property: eigen-polynomials are constant along sl(2) multiplets") {
  for (int n = 2; n <= 3; ++n) {
    auto h = ChainConfig::homogeneous(n, q(1, 2));
    LinOp sp = total_s_plus(h);
    for (int d = 0; d <= 2; ++d) {
      auto b = sector_basis(h, d);
      for (const auto& rec : analyze_sector(h, d)) {
        if (!rec.exact || !rec.polys) continue;
        Poly v = b.to_poly(rec.pair.vector);
        Poly raised = sp(v);
        REQUIRE_FALSE(raised.is_zero());
        auto up1 = eigen_polynomials(raised, h, d + 1);
        CHECK(up1.lambda == rec.polys->lambda);
        CHECK(up1.q == rec.polys->q);
      }
    }
  }
}

TEST_CASE("interpolated Q matches a fresh node") {
  auto h = ChainConfig::homogeneous(3, q(1, 2));
  auto b = sector_basis(h, 2);
  auto eigenvalue = [&](const Rat& x, const Poly& v) {
    Poly img = q_apply(QKind::minus(x), h, v);
    const auto& [m, c] = *v.terms().begin();
    Rat e = img.coeff(m) / c;
    CHECK(img == e * v);
    return e;
  };
  for (const auto& rec : analyze_sector(h, 2)) {
    if (!rec.exact || !rec.polys) continue;
    Poly v = b.to_poly(rec.pair.vector);
    Rat ref = q(1, 5), fresh = q(29, 13);
    REQUIRE(rec.polys->q(ref) != 0);
    CHECK(eigenvalue(fresh, v) * rec.polys->q(ref) == eigenvalue(ref, v) * rec.polys->q(fresh));
  }
}
