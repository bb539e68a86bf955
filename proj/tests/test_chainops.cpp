#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qlab/chainops.hpp"
#include "support.hpp"

using namespace qlab;
using namespace qlab::test;

namespace {

ChainConfig chain(std::vector<std::pair<Rat, Rat>> spin_shift) {
  ChainConfig c;
  for (auto& [l, d] : spin_shift) c.sites.push_back(SiteSpec{l, d});
  return c;
}

// Lax entries written out by hand on site k.
Poly l11(const Rat& a, int k, const Poly& p) { return a * p + z(k) * poly_diff(p, VarId::z(k)); }
Poly l12(int k, const Poly& p) { return -poly_diff(p, VarId::z(k)); }
Poly l21(const Rat& a, const Rat& b, int k, const Poly& p) {
  return z(k) * z(k) * poly_diff(p, VarId::z(k)) + (a - b) * z(k) * p;
}
Poly l22(const Rat& b, int k, const Poly& p) { return b * p - z(k) * poly_diff(p, VarId::z(k)); }

// (L1 L2)_11 + (L1 L2)_22 for two sites.
Poly two_site_trace(const Rat& u, const ChainConfig& cfg, const Poly& p) {
  Rat a1 = cfg.u_plus(1, u), b1 = cfg.u_minus(1, u), a2 = cfg.u_plus(2, u), b2 = cfg.u_minus(2, u);
  return l11(a1, 1, l11(a2, 2, p)) + l12(1, l21(a2, b2, 2, p)) + l21(a1, b1, 1, l12(2, p)) +
         l22(b1, 1, l22(b2, 2, p));
}

std::vector<Monomial> basis(const ChainConfig& cfg, int d) {
  auto vars = cfg.vars();
  return monomial_basis(vars, d, BasisMode::up_to_degree);
}

bool same_on_basis(const LinOp& a, const LinOp& b, const ChainConfig& cfg, int d) {
  for (const auto& m : basis(cfg, d)) {
    Poly p = Poly::term(1, m);
    if (a(p) != b(p)) return false;
  }
  return true;
}

Poly shift_by_substitution(const Poly& p, int n) {
  SubstMap m;
  for (int k = 1; k <= n; ++k) m[VarId::z(k)] = z(k % n + 1);
  return affine_subst(p, m);
}

}  // namespace

TEST_CASE("delta_pm examples") {
  auto h = ChainConfig::homogeneous(2, q(1, 2));
  Rat x = q(5, 3);
  CHECK(delta_pm(Sign::plus, x, h) == (x + q(1, 2)) * (x + q(1, 2)));
  CHECK(delta_pm_poly(Sign::plus, h) == poly_pow(u() + Poly(q(1, 2)), 2));
  auto c = chain({{q(1, 2), q(0)}, {q(1), q(1)}});
  CHECK(delta_pm_poly(Sign::minus, c) == (u() - Poly(q(1, 2))) * u());
  CHECK(delta_pm(Sign::minus, q(1, 2), c) == 0);
  CHECK(delta_pm(Sign::minus, q(0), c) == 0);
}

TEST_CASE("transfer matrix examples") {
  Rat x = q(2, 9);
  auto one = ChainConfig::homogeneous(1, q(3, 2));
  Poly p = poly_pow(z(1), 3) - Poly(q(1, 4));
  CHECK(transfer_apply(x, one, p) == (one.u_plus(1, x) + one.u_minus(1, x)) * p);
  CHECK(transfer_apply(x, one, p) == (2 * x) * p);

  auto h = ChainConfig::homogeneous(2, q(1, 2));
  CHECK(transfer_apply(x, h, Poly(1)) == two_site_trace(x, h, Poly(1)));
  CHECK(two_site_trace(x, h, Poly(1)) == Poly(2 * x * x + q(1, 2)));
  Poly d = z(1) - z(2);
  CHECK(transfer_apply(x, h, d) == two_site_trace(x, h, d));
  CHECK(two_site_trace(x, h, d) == (2 * x * x + q(5, 2)) * d);
  // TQ with Q(u) = u: Lambda(u) u = (u+1/2)^2 (u+1) + (u-1/2)^2 (u-1)
  Rat lam = 2 * x * x + q(5, 2);
  CHECK(lam * x == (x + q(1, 2)) * (x + q(1, 2)) * (x + 1) + (x - q(1, 2)) * (x - q(1, 2)) * (x - 1));
}

TEST_CASE("transfer matrix against a hand-expanded trace on inhomogeneous pairs") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 6; ++i) {
    auto c = chain({{random_rat(rng), random_rat(rng)}, {random_rat(rng), random_rat(rng)}});
    Rat x = random_rat(rng);
    for (const auto& m : basis(c, 3)) {
      Poly p = Poly::term(1, m);
      CHECK(transfer_apply(x, c, p) == two_site_trace(x, c, p));
    }
  }
}

TEST_CASE("Q-minus examples") {
  auto c = chain({{q(1, 2), q(1, 3)}, {q(3, 2), q(-2)}, {q(2, 5), q(1)}});
  CHECK(q_apply(QKind::minus(q(4, 7)), c, Poly(1)) == Poly(1));

  auto h = ChainConfig::homogeneous(2, q(1, 2));
  Rat x = q(5, 11), l = q(1, 2);
  Poly d = z(1) - z(2);
  CHECK(q_apply(QKind::minus(x), h, d) == (1 - (x + l) / l) * d);
  CHECK(q_apply(QKind::minus(x), h, d) == (-2 * x) * d);

  for (int n = 2; n <= 3; ++n) {
    auto g = ChainConfig::homogeneous(n, q(3, 4));
    CHECK(same_on_basis(q_op(QKind::minus(q(3, 4)), g), cyclic_shift_op(n, ShiftDirection::backward), g, 3));
  }
}

TEST_CASE("Q-plus and general degeneracies") {
  for (int n = 2; n <= 3; ++n) {
    Rat l = q(2, 3);
    auto g = ChainConfig::homogeneous(n, l);
    CHECK(q_apply(QKind::plus(1 - l), g, Poly(1)) == Poly(1));
    CHECK(same_on_basis(q_op(QKind::plus(1 - l), g), cyclic_shift_op(n, ShiftDirection::backward), g, 3));
    Rat u2 = q(-3, 5);
    CHECK(same_on_basis(q_op(QKind::general(1 - l, u2), g), q_op(QKind::minus(u2), g), g, 3));
  }
}

TEST_CASE("Q-plus lattice admissibility") {
  auto half = chain({{q(1, 2), q(1, 3)}, {q(3, 2), q(-2, 3)}});
  CHECK(qplus_admissible(q(1, 6), half));
  // j = 1 meets (1 + l - u - delta)_1 = (0)_1 on the spin-1/2 site
  CHECK_FALSE(qplus_admissible(q(7, 6), half));
  auto c = chain({{q(3, 2), q(-2, 3)}, {q(5, 2), q(-5, 3)}});
  CHECK(qplus_admissible(q(1, 6), c));
  CHECK(qplus_admissible(q(7, 6), c));
  CHECK_FALSE(qplus_admissible(q(1, 5), c));
  CHECK_FALSE(qplus_admissible(q(-5, 6), c));
  auto off = qplus_lattice_offsets(q(13, 6), c);
  REQUIRE(off.has_value());
  CHECK(*off == std::vector<int>{2, 2});
  CHECK_THROWS_AS(q_apply(QKind::plus(q(1, 5)), c, Poly(1)), AdmissibilityError);
}

TEST_CASE("closed forms agree with direct auxiliary traces") {
  auto c = chain({{q(3, 2), q(-2, 3)}, {q(5, 2), q(-5, 3)}});
  auto h = ChainConfig::homogeneous(3, q(3, 2));
  for (const auto& m : basis(c, 3)) {
    Poly p = Poly::term(1, m);
    CHECK(q_apply(QKind::minus(q(2, 7)), c, p) == qminus_trace_apply(q(2, 7), c, p));
    CHECK(q_apply(QKind::plus(q(7, 6)), c, p) == qplus_trace_apply(q(7, 6), c, p));
    CHECK(q_apply(QKind::general(q(7, 6), q(-1, 3)), c, p) == qgeneral_trace_apply(q(7, 6), q(-1, 3), c, p));
  }
  for (const auto& m : basis(h, 2)) {
    Poly p = Poly::term(1, m);
    CHECK(q_apply(QKind::minus(q(-4, 5)), h, p) == qminus_trace_apply(q(-4, 5), h, p));
    CHECK(q_apply(QKind::plus(q(3, 2)), h, p) == qplus_trace_apply(q(3, 2), h, p));
  }
}

TEST_CASE("symbolic Q-minus matches evaluation") {
  auto c = chain({{q(1, 2), q(1, 3)}, {q(5, 2), q(-1)}});
  for (const auto& m : basis(c, 3)) {
    Poly p = Poly::term(1, m);
    Poly sym = qminus_symbolic(c, p);
    CHECK(sym.degree_in(VarId::u()) <= m.degree());
    for (Rat x : {q(0), q(3, 4), q(-2)}) CHECK(poly_eval(sym, {{VarId::u(), x}}) == q_apply(QKind::minus(x), c, p));
  }
}

TEST_CASE("cyclic shift") {
  CHECK(cyclic_shift_apply(z(1), 3, ShiftDirection::forward) == z(2));
  std::mt19937_64 rng(32);
  std::vector<VarId> vars{VarId::z(1), VarId::z(2), VarId::z(3)};
  for (int i = 0; i < 10; ++i) {
    Poly p = random_poly(rng, vars, 3);
    CHECK(cyclic_shift_apply(p, 3, ShiftDirection::forward) == shift_by_substitution(p, 3));
    Poly r = p;
    for (int k = 0; k < 3; ++k) r = cyclic_shift_apply(r, 3, ShiftDirection::forward);
    CHECK(r == p);
    CHECK(cyclic_shift_apply(cyclic_shift_apply(p, 3, ShiftDirection::forward), 3, ShiftDirection::backward) == p);
  }
}

TEST_CASE("moment identity examples") {
  CHECK(ql3_moment_identity_check(0, q(3, 7), q(5, 4)));
  auto [a, b] = ql3_moment_sides(1, q(1), q(1));
  CHECK(a == 1);
  CHECK(b == 1);
  CHECK(ql3_moment_identity_check(1, q(1), q(1)));
  auto [c, d] = ql3_moment_sides(2, q(1, 2), q(1, 2));
  CHECK(c == pochhammer(q(1), 2) / pochhammer(q(1), 2));
  CHECK(d == c);
  CHECK(ql3_moment_identity_check(2, q(1, 2), q(1, 2)));
}

TEST_CASE("property: degree preservation of t and Q") {
  std::mt19937_64 rng(33);
  auto c = chain({{q(3, 2), q(-2, 3)}, {q(5, 2), q(-5, 3)}, {q(7, 2), q(-8, 3)}});
  std::vector<LinOp> ops{transfer_op(q(2, 5), c), q_op(QKind::minus(q(-1, 4)), c), q_op(QKind::plus(q(7, 6)), c),
                         q_op(QKind::general(q(13, 6), q(3)), c)};
  for (const auto& op : ops)
    for (const auto& m : basis(c, 2)) {
      Poly img = op(Poly::term(1, m));
      for (const auto& [mm, x] : img.terms()) CHECK(mm.degree() == m.degree());
    }
}

TEST_CASE("property: homogeneous commutativity") {
  for (int n = 2; n <= 3; ++n) {
    auto h = ChainConfig::homogeneous(n, q(3, 2));
    LinOp t1 = transfer_op(q(1, 3), h), t2 = transfer_op(q(-5, 2), h);
    LinOp m1 = q_op(QKind::minus(q(2, 7)), h), m2 = q_op(QKind::minus(q(9, 4)), h);
    LinOp p1 = q_op(QKind::plus(q(3, 2)), h);
    CHECK(same_on_basis(t1 * t2, t2 * t1, h, 3));
    CHECK(same_on_basis(m1 * m2, m2 * m1, h, 3));
    CHECK(same_on_basis(p1 * m1, m1 * p1, h, 3));
    CHECK(same_on_basis(m1 * t1, t1 * m1, h, 3));
    CHECK(same_on_basis(p1 * t2, t2 * p1, h, 3));
  }
}

TEST_CASE("property: Baxter equation for Q-minus on random chains") {
  std::mt19937_64 rng(34);
  for (int i = 0; i < 5; ++i) {
    std::vector<std::pair<Rat, Rat>> sites;
    int n = 2 + i % 2;
    for (int k = 0; k < n; ++k) sites.emplace_back(random_rat(rng) + q(1, 7), random_rat(rng));
    auto c = chain(sites);
    Rat x = random_rat(rng);
    for (const auto& m : basis(c, 2)) {
      Poly p = Poly::term(1, m);
      Poly lhs = q_apply(QKind::minus(x), c, transfer_apply(x, c, p));
      Poly rhs = delta_pm(Sign::plus, x, c) * q_apply(QKind::minus(x + 1), c, p) +
                 delta_pm(Sign::minus, x, c) * q_apply(QKind::minus(x - 1), c, p);
      CHECK(lhs == rhs);
    }
  }
}
