#include "verify_plan.hpp"

namespace qlab::detail {

namespace {

VarId z(int k) { return VarId::z(k); }

OpMatrix2 lax(const Rat& a, const Rat& b, int site) { return lax_matrix(a, b, z(site)).matrix; }

OpMatrix2 sc(const LinOp& op) { return OpMatrix2::scalar(op); }

LinOp times(const Rat& c, const LinOp& op) { return c * op; }

class PlanBuilder {
 public:
  explicit PlanBuilder(std::vector<VarId> vars) { plan_.vars = std::move(vars); }

  void equal(std::string name, LinOp lhs, LinOp rhs) {
    plan_.parts.push_back(Component{std::move(name), std::move(lhs), std::move(rhs)});
  }

  void vanishes(std::string name, LinOp op) { equal(std::move(name), std::move(op), LinOp::zero()); }

  void commute(std::string name, const LinOp& a, const LinOp& b) { equal(std::move(name), a * b, b * a); }

  // Entry-wise matrix equality; entries listed as 2*i + j.
  void equal(const std::string& name, const OpMatrix2& lhs, const OpMatrix2& rhs,
             std::initializer_list<int> entries = {0, 1, 2, 3}) {
    for (int e : entries) {
      int i = e / 2;
      int j = e % 2;
      equal(name + "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")", lhs.at(i, j),
            rhs.at(i, j));
    }
  }

  Plan take() { return std::move(plan_); }

 private:
  Plan plan_;
};

PairParams pp(const Rat& up, const Rat& um, const Rat& vp, const Rat& vm) { return {up, um, vp, vm}; }

void require_pin(const ParamRecord& r, std::string_view name, const Rat& value) {
  if (r.get(name) != value)
    throw std::invalid_argument(std::string(name) + " must equal " + to_string(value) +
                                " for this identity");
}

Plan plan_pair(Identity id, const ParamRecord& r, int degree) {
  const int bound = degree + 2;
  PlanBuilder b({z(1), z(2)});
  auto rp = [&](const PairParams& p) { return build_r(RKind::plus, p, z(1), z(2), bound); };
  auto rm = [&](const PairParams& p) { return build_r(RKind::minus, p, z(1), z(2), bound); };
  auto rf = [&](const PairParams& p) { return build_r(RKind::full, p, z(1), z(2), bound); };
  switch (id) {
    case Identity::F1DEF:
    case Identity::F2DEF:
    case Identity::F1:
    case Identity::F2: {
      Rat up = r.get("u+"), um = r.get("u-"), vp = r.get("v+"), vm = r.get("v-");
      bool plus = id == Identity::F1DEF || id == Identity::F1;
      LinOp op = plus ? rp(pp(up, um, vp, vm)) : rm(pp(up, um, vp, vm));
      // exchanged parameters on the right-hand side
      Rat a1 = plus ? vp : up, b1 = plus ? um : vm, a2 = plus ? up : vp, b2 = plus ? vm : um;
      if (id == Identity::F1DEF || id == Identity::F2DEF) {
        b.equal("sum", sc(op) * (lax(up, um, 1) + lax(vp, vm, 2)),
                (lax(a1, b1, 1) + lax(a2, b2, 2)) * sc(op));
        VarId zc = plus ? z(1) : z(2);
        b.commute("[R," + zc.name() + "]", op, LinOp::multiply(Poly::var(zc)));
      } else {
        b.equal("prod", sc(op) * lax(up, um, 1) * lax(vp, vm, 2),
                lax(a1, b1, 1) * lax(a2, b2, 2) * sc(op));
      }
      break;
    }
    case Identity::RLL_CHECK: {
      Rat up = r.get("u+"), um = r.get("u-"), vp = r.get("v+"), vm = r.get("v-");
      LinOp rc = build_r(RKind::check, pp(up, um, vp, vm), z(1), z(2), bound);
      LinOp full = rf(pp(up, um, vp, vm));
      b.equal("check", sc(rc) * lax(up, um, 1) * lax(vp, vm, 2),
              lax(vp, vm, 1) * lax(up, um, 2) * sc(rc));
      b.equal("full", sc(full) * lax(up, um, 1) * lax(vp, vm, 2),
              lax(vp, vm, 2) * lax(up, um, 1) * sc(full));
      break;
    }
    case Identity::TRIANG_RMINUS: {
      require_pin(r, "v-", Rat(0));
      Rat up = r.get("u+"), um = r.get("u-");
      auto r0 = [&](const Rat& a, const Rat& c) { return rm(pp(a, c, 0, 0)); };
      OpMatrix2 lhs = lower_unitriangular(z(1), true) * sc(r0(up, um)) * lax(up, um, 1) *
                      lower_unitriangular(z(2), false);
      OpMatrix2 rhs(times(up, r0(up + 1, um + 1)), -(r0(up, um) * LinOp::derivative(z(1))),
                    LinOp::zero(), times(um, r0(up - 1, um - 1)));
      b.equal("triangle", lhs, rhs);
      break;
    }
    case Identity::TRIANG_RPLUS: {
      require_pin(r, "v+", Rat(1));
      Rat up = r.get("u+"), um = r.get("u-");
      if (um == 1) throw AdmissibilityError("u- = 1 makes the diagonal factor singular");
      auto r1 = [&](const Rat& a, const Rat& c) { return rp(pp(a, 0, 1, c)); };
      OpMatrix2 lhs = lower_unitriangular(z(1), true) * lax(up, um, 2) * sc(r1(up, um)) *
                      lower_unitriangular(z(2), false);
      Rat f = um * (up - 1) / (um - 1);
      OpMatrix2 rhs(times(f, r1(up - 1, um - 1)), LinOp::zero(), LinOp::zero(),
                    times(um, r1(up + 1, um + 1)));
      b.equal("triangle", lhs, rhs, {0, 2, 3});
      break;
    }
    case Identity::TRIANG_R1: {
      require_pin(r, "v-", Rat(0));
      Rat up = r.get("u+"), um = r.get("u-"), vp = r.get("v+");
      OpMatrix2 lhs = lower_unitriangular(z(2), true) * sc(rf(pp(up, um, vp, 0))) * lax(up, um, 1) *
                      lower_unitriangular(z(2), false);
      OpMatrix2 rhs(times(up, rf(pp(up + 1, um + 1, vp + 1, 0))), LinOp::zero(), LinOp::zero(),
                    times(um, rf(pp(up - 1, um - 1, vp - 1, 0))));
      b.equal("triangle", lhs, rhs, {0, 2, 3});
      break;
    }
    case Identity::TRIANG_R2: {
      require_pin(r, "v+", Rat(1));
      Rat up = r.get("u+"), um = r.get("u-"), vm = r.get("v-");
      if (um == 1) throw AdmissibilityError("u- = 1 makes the diagonal factor singular");
      OpMatrix2 lhs = lower_unitriangular(z(2), true) * lax(up, um, 1) * sc(rf(pp(up, um, 1, vm))) *
                      lower_unitriangular(z(2), false);
      Rat f = um * (up - 1) / (um - 1);
      OpMatrix2 rhs(times(f, rf(pp(up - 1, um - 1, 1, vm - 1))), LinOp::zero(), LinOp::zero(),
                    times(um, rf(pp(up + 1, um + 1, 1, vm + 1))));
      b.equal("triangle", lhs, rhs, {0, 2, 3});
      break;
    }
    case Identity::DEGEN_RMINUS: {
      Rat up = r.get("u+"), um = r.get("u-");
      require_pin(r, "v-", um);
      b.equal("R-", rm(pp(up, um, 0, um)), LinOp::identity());
      break;
    }
    case Identity::DEGEN_RPLUS: {
      Rat up = r.get("u+"), vm = r.get("v-");
      require_pin(r, "v+", up);
      b.equal("R+", rp(pp(up, 0, up, vm)), LinOp::identity());
      break;
    }
    case Identity::SL2_R: {
      Rat up = r.get("u+"), um = r.get("u-"), vp = r.get("v+"), vm = r.get("v-");
      LinOp full = rf(pp(up, um, vp, vm));
      auto g1 = sl2_generators((up - um) / 2, z(1));
      auto g2 = sl2_generators((vp - vm) / 2, z(2));
      b.commute("[R,S]", full, g1.s + g2.s);
      b.commute("[R,S-]", full, g1.s_minus + g2.s_minus);
      b.commute("[R,S+]", full, g1.s_plus + g2.s_plus);
      break;
    }
    case Identity::SHIFT_INV: {
      Rat up = r.get("u+"), um = r.get("u-"), vp = r.get("v+"), vm = r.get("v-");
      Rat l = r.get("lambda");
      b.equal("R-", rm(pp(up, um, vp, vm)), rm(pp(up + l, um + l, vp + l, vm + l)));
      b.equal("R+", rp(pp(up, um, vp, vm)), rp(pp(up + l, um + l, vp + l, vm + l)));
      break;
    }
    default: throw std::logic_error("not a pair identity");
  }
  return b.take();
}

Plan plan_triple(Identity id, const ParamRecord& r, int degree) {
  const int bound = degree + 2;
  PlanBuilder b({z(1), z(2), z(3)});
  Rat up = r.get("u+"), um = r.get("u-"), vp = r.get("v+"), vm = r.get("v-");
  Rat wp = r.get("w+"), wm = r.get("w-");
  auto rc = [&](const Rat& a, const Rat& c, const Rat& e, const Rat& f, int s) {
    return build_r(RKind::check, pp(a, c, e, f), z(s), z(s + 1), bound);
  };
  switch (id) {
    case Identity::YBE:
      b.equal("YBE", rc(vp, vm, wp, wm, 1) * rc(up, um, wp, wm, 2) * rc(up, um, vp, vm, 1),
              rc(up, um, vp, vm, 2) * rc(up, um, wp, wm, 1) * rc(vp, vm, wp, wm, 2));
      break;
    case Identity::THREE_TERM_MINUS: {
      auto m = [&](int s) { return build_r(RKind::minus, pp(vp, vm, wp, wm), z(s), z(s + 1), bound); };
      b.equal("R-RR", m(1) * rc(up, um, wp, wm, 2) * rc(up, um, vp, vm, 1),
              rc(up, um, wp, vm, 2) * rc(up, um, vp, wm, 1) * m(2));
      break;
    }
    case Identity::THREE_TERM_PLUS: {
      auto p = [&](int s) { return build_r(RKind::plus, pp(vp, vm, wp, wm), z(s), z(s + 1), bound); };
      b.equal("R+RR", p(1) * rc(up, um, wp, wm, 2) * rc(up, um, vp, vm, 1),
              rc(up, um, vp, wm, 2) * rc(up, um, wp, vm, 1) * p(2));
      break;
    }
    default: throw std::logic_error("not a three-space identity");
  }
  return b.take();
}

LinOp sum_of(std::initializer_list<std::pair<Rat, LinOp>> terms) {
  LinOp acc = LinOp::zero();
  for (const auto& [c, op] : terms) acc = acc + c * op;
  return acc;
}

LinOp lax_trace_op(std::vector<std::pair<Rat, Rat>> params, std::string name) {
  std::vector<VarId> vars;
  for (std::size_t k = 1; k <= params.size(); ++k) vars.push_back(z(static_cast<int>(k)));
  return LinOp(std::move(name), vars, DegreeContract::preserving,
               [params](const Poly& p) { return lax_trace_apply(params, p); });
}

void require_homogeneous(const ChainConfig& cfg, Identity id) {
  if (!cfg.is_homogeneous())
    throw AdmissibilityError(std::string(identity_name(id)) + " requires a homogeneous chain");
}

// Q-(u) p interpolated in u from nodes offset + 0..d.
Poly qminus_interpolant(const ChainConfig& cfg, const Poly& p, const Rat& offset) {
  int d = std::max(p.z_degree(), 0);
  std::vector<Rat> nodes;
  std::vector<Poly> values;
  for (int i = 0; i <= d; ++i) {
    nodes.push_back(offset + i);
    values.push_back(q_apply(QKind::minus(nodes.back()), cfg, p));
  }
  return interpolate(VarId::u(), nodes, values);
}

Plan plan_chain(Identity id, const ParamRecord& r, int degree) {
  if (!r.chain) throw std::invalid_argument("chain identity without a chain config");
  const ChainConfig cfg = *r.chain;
  cfg.validate(degree + 1);
  const int n = cfg.size();
  PlanBuilder b(cfg.vars());
  auto t = [&](const Rat& u) { return transfer_op(u, cfg); };
  auto qm = [&](const Rat& u) { return q_op(QKind::minus(u), cfg); };
  auto qp = [&](const Rat& u) { return q_op(QKind::plus(u), cfg); };
  auto qg = [&](const Rat& u1, const Rat& u2) { return q_op(QKind::general(u1, u2), cfg); };
  auto dp = [&](const Rat& u) { return delta_pm(Sign::plus, u, cfg); };
  auto dm = [&](const Rat& u) { return delta_pm(Sign::minus, u, cfg); };
  const LinOp shift_fwd = cyclic_shift_op(n, ShiftDirection::forward);
  const LinOp shift_bwd = cyclic_shift_op(n, ShiftDirection::backward);
  auto plus_coeff = [&](const Rat& u) -> Rat {
    Rat den = dm(u - 1);
    if (den == 0) throw AdmissibilityError("D-(u-1) vanishes");
    return dp(u - 1) * dm(u) / den;
  };
  switch (id) {
    case Identity::BQ_MINUS: {
      Rat u = r.get("u");
      b.equal("BQ-", qm(u) * t(u), sum_of({{dp(u), qm(u + 1)}, {dm(u), qm(u - 1)}}));
      break;
    }
    case Identity::BQ_PLUS: {
      Rat u = r.get("u");
      Rat c = plus_coeff(u);
      b.equal("BQ+", t(u) * qp(u), sum_of({{c, qp(u - 1)}, {dm(u), qp(u + 1)}}));
      break;
    }
    case Identity::BAXTER_GEN_U2: {
      Rat u1 = r.get("u1"), u = r.get("u");
      b.equal("Baxter(u2)", qg(u1, u) * t(u), sum_of({{dp(u), qg(u1, u + 1)}, {dm(u), qg(u1, u - 1)}}));
      break;
    }
    case Identity::BAXTER_GEN_U1: {
      Rat u = r.get("u"), u2 = r.get("u2");
      Rat c = plus_coeff(u);
      b.equal("Baxter(u1)", t(u) * qg(u, u2), sum_of({{c, qg(u - 1, u2)}, {dm(u), qg(u + 1, u2)}}));
      break;
    }
    case Identity::QLL_MINUS:
    case Identity::QLL_PLUS: {
      Rat lambda = r.get("lambda"), w = r.get("w");
      std::vector<std::pair<Rat, Rat>> base, shifted;
      for (int k = 1; k <= n; ++k) base.emplace_back(cfg.u_plus(k, w), cfg.u_minus(k, w));
      for (int k = 1; k <= n; ++k) {
        if (id == Identity::QLL_MINUS)
          shifted.emplace_back(cfg.u_plus(k % n + 1, w), cfg.u_minus(k, w));
        else
          shifted.emplace_back(cfg.u_plus(k, w), cfg.u_minus((k + n - 2) % n + 1, w));
      }
      LinOp tb = lax_trace_op(base, "t[base]");
      LinOp ts = lax_trace_op(shifted, "t[shifted]");
      if (id == Identity::QLL_MINUS)
        b.equal("Q-LL", qm(lambda) * tb, ts * qm(lambda));
      else
        b.equal("Q+LL", tb * qp(lambda), qp(lambda) * ts);
      break;
    }
    case Identity::EXCH_1:
    case Identity::EXCH_2: {
      Rat u1 = r.get("u1"), u2 = r.get("u2"), v1 = r.get("v1"), v2 = r.get("v2");
      LinOp lhs = qg(u1, u2) * qg(v1, v2);
      if (id == Identity::EXCH_1)
        b.equal("exchange", lhs, qg(v1, u2) * qg(u1, v2));
      else
        b.equal("exchange", lhs, qg(u1, v2) * qg(v1, u2));
      break;
    }
    case Identity::FACTOR_Q: {
      Rat u1 = r.get("u1"), u2 = r.get("u2");
      if (!qplus_admissible(u1, cfg)) throw AdmissibilityError("u1 is off the terminating lattice");
      LinOp direct("tr_0 R10...RN0", cfg.vars(), DegreeContract::preserving,
                   [u1, u2, cfg](const Poly& p) { return qgeneral_trace_apply(u1, u2, cfg, p); });
      b.equal("factorization", direct, qp(u1) * shift_fwd * qm(u2));
      break;
    }
    case Identity::DEGEN_QMINUS: {
      require_homogeneous(cfg, id);
      b.equal("Q-(l)", qm(cfg.sites[0].spin), shift_bwd);
      break;
    }
    case Identity::DEGEN_QPLUS: {
      require_homogeneous(cfg, id);
      Rat l = cfg.sites[0].spin, u = r.get("u"), v = r.get("v");
      b.equal("Q+(1-l)", qp(1 - l), shift_bwd);
      b.equal("Q(1-l|u)", qg(1 - l, u), qm(u));
      b.equal("Q(v|l)", qg(v, l), qp(v));
      break;
    }
    case Identity::QPM_EXCHANGE: {
      Rat u1 = r.get("u1"), u2 = r.get("u2"), v1 = r.get("v1"), v2 = r.get("v2");
      b.equal("Q+ exchange", qp(u1) * shift_fwd * qm(u2) * qp(v1), qp(v1) * shift_fwd * qm(u2) * qp(u1));
      b.equal("Q- exchange", qm(u2) * qp(v1) * shift_fwd * qm(v2), qm(v2) * qp(v1) * shift_fwd * qm(u2));
      break;
    }
    case Identity::COMMUTE_TT: {
      b.commute("[t(u),t(v)]", t(r.get("u")), t(r.get("v")));
      break;
    }
    case Identity::COMMUTE_QQ: {
      Rat u1 = r.get("u1"), u2 = r.get("u2"), v1 = r.get("v1"), v2 = r.get("v2");
      b.commute("[Q(u1|u2),Q(v1|v2)]", qg(u1, u2), qg(v1, v2));
      if (cfg.is_homogeneous()) {
        b.commute("[Q-(u2),Q-(v2)]", qm(u2), qm(v2));
        b.commute("[Q+(u1),Q-(v2)]", qp(u1), qm(v2));
        b.commute("[Q+(u1),Q+(v1)]", qp(u1), qp(v1));
      }
      break;
    }
    case Identity::COMMUTE_QT: {
      Rat u1 = r.get("u1"), u2 = r.get("u2"), v = r.get("v");
      b.commute("[Q+(u1)PQ-(u2),t(v)]", qp(u1) * shift_fwd * qm(u2), t(v));
      if (cfg.is_homogeneous()) {
        b.commute("[Q-(u2),t(v)]", qm(u2), t(v));
        b.commute("[Q+(u1),t(v)]", qp(u1), t(v));
      }
      break;
    }
    case Identity::SL2_Q: {
      Rat u1 = r.get("u1"), u2 = r.get("u2");
      LinOp s = LinOp::zero(), sm = LinOp::zero(), sp = LinOp::zero();
      for (int k = 1; k <= n; ++k) {
        auto g = sl2_generators(cfg.sites[k - 1].spin, z(k));
        s = s + g.s;
        sm = sm + g.s_minus;
        sp = sp + g.s_plus;
      }
      std::vector<std::pair<std::string, LinOp>> qs{{"Q(u1|u2)", qg(u1, u2)}};
      if (cfg.is_homogeneous()) {
        qs.emplace_back("Q-(u2)", qm(u2));
        qs.emplace_back("Q+(u1)", qp(u1));
      }
      for (const auto& [name, q] : qs) {
        b.commute("[" + name + ",S]", q, s);
        b.commute("[" + name + ",S-]", q, sm);
        b.commute("[" + name + ",S+]", q, sp);
      }
      break;
    }
    case Identity::QPOLY_U: {
      Rat offset(0);
      LinOp extra("interpolant at d+1", cfg.vars(), DegreeContract::bounded, [cfg, offset](const Poly& p) {
        int d = std::max(p.z_degree(), 0);
        return poly_eval(qminus_interpolant(cfg, p, offset), {{VarId::u(), offset + d + 1}});
      });
      LinOp fresh("Q-(d+1)", cfg.vars(), DegreeContract::preserving, [cfg, offset](const Poly& p) {
        int d = std::max(p.z_degree(), 0);
        return q_apply(QKind::minus(offset + d + 1), cfg, p);
      });
      LinOp interp("interpolant", cfg.vars(), DegreeContract::bounded,
                   [cfg, offset](const Poly& p) { return qminus_interpolant(cfg, p, offset); });
      LinOp symbolic("symbolic Q-(u)", cfg.vars(), DegreeContract::bounded,
                     [cfg](const Poly& p) { return qminus_symbolic(cfg, p); });
      b.equal("extra node", extra, fresh);
      b.equal("symbolic", interp, symbolic);
      LinOp u_degree("deg_u excess", cfg.vars(), DegreeContract::bounded, [cfg](const Poly& p) {
        Poly sym = qminus_symbolic(cfg, p);
        return sym.degree_in(VarId::u()) <= std::max(p.z_degree(), 0) ? Poly() : sym;
      });
      b.vanishes("deg_u <= d", u_degree);
      break;
    }
    default: throw std::logic_error("not a chain identity");
  }
  return b.take();
}

Plan plan_moment(const ParamRecord& r, int degree) {
  PlanBuilder b({});
  Rat u = r.get("u"), l = r.get("l");
  for (int k = 0; k <= degree; ++k) {
    auto [lhs, rhs] = ql3_moment_sides(k, u, l);
    b.equal("k=" + std::to_string(k), LinOp::scalar(lhs), LinOp::scalar(rhs));
  }
  return b.take();
}

}  // namespace

Plan plan_identity(Identity id, const ParamRecord& params, int degree) {
  if (degree < 0) throw std::invalid_argument("negative degree bound");
  switch (identity_info(id).signature) {
    case Signature::pair: return plan_pair(id, params, degree);
    case Signature::triple: return plan_triple(id, params, degree);
    case Signature::chain: return plan_chain(id, params, degree);
    case Signature::moment: break;
  }
  return plan_moment(params, degree);
}

}  // namespace qlab::detail
