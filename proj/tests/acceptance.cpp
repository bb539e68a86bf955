#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qlab/spectra.hpp"
#include "qlab/verify.hpp"

using namespace qlab;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Tally {
  int passed = 0, failed = 0, sampled_out = 0;
  std::ostringstream log;
};

// Runs id on `want` parameter draws that the sampler can produce; every draw
// must exact-pass.
void run_identity(Tally& t, Identity id, int degree, int want, std::uint64_t seed0, const SamplingOptions& opts = {}) {
  int got = 0;
  for (std::uint64_t seed = seed0; got < want && seed < seed0 + 10 * static_cast<std::uint64_t>(want); ++seed) {
    ParamRecord params;
    try {
      params = random_params(seed, id, degree, opts);
    } catch (const ParamSamplingError&) {
      ++t.sampled_out;
      continue;
    }
    ++got;
    auto r = check_identity(id, params, degree);
    if (r.verdict == Verdict::pass) {
      ++t.passed;
    } else {
      ++t.failed;
      t.log << "    " << identity_name(id) << " seed " << seed << " " << params.describe() << "\n";
    }
  }
  if (got < want) {
    t.failed += want - got;
    t.log << "    " << identity_name(id) << ": only " << got << " of " << want << " admissible draws\n";
  }
}

Outcome from_tally(const Tally& t) {
  std::ostringstream s;
  s << t.passed << " exact-pass, " << t.failed << " fail";
  return {t.failed == 0 && t.passed > 0, s.str() + (t.failed ? "\n" + t.log.str() : "")};
}

Outcome catalog(const std::vector<Identity>& ids, int degree, int seeds, std::uint64_t seed0,
                const SamplingOptions& opts = {}) {
  Tally t;
  for (Identity id : ids) run_identity(t, id, degree, seeds, seed0, opts);
  return from_tally(t);
}

Outcome criterion_degeneracies() {
  Tally t;
  run_identity(t, Identity::DEGEN_RMINUS, 4, 10, 400);
  run_identity(t, Identity::DEGEN_RPLUS, 4, 10, 400);
  for (int n = 1; n <= 3; ++n)
    for (Rat spin : {Rat(1, 2), Rat(1), Rat(3, 2), Rat(-5, 3)}) {
      SamplingOptions opts;
      opts.chain = ChainConfig::homogeneous(n, spin);
      run_identity(t, Identity::DEGEN_QMINUS, 3, 1, 410, opts);
      run_identity(t, Identity::DEGEN_QPLUS, 3, 1, 410, opts);
    }
  return from_tally(t);
}

Outcome criterion_baxter() {
  Tally t;
  SamplingOptions opts;
  opts.max_sites = 3;
  for (Identity id : {Identity::BQ_MINUS, Identity::BQ_PLUS, Identity::BAXTER_GEN_U2, Identity::BAXTER_GEN_U1})
    run_identity(t, id, 3, 10, 500, opts);
  return from_tally(t);
}

Outcome criterion_commutativity() {
  int checked = 0, bad = 0;
  std::ostringstream log;
  const std::vector<std::pair<Rat, Rat>> pairs{
      {Rat(1, 3), Rat(-5, 4)}, {Rat(2, 7), Rat(9, 2)}, {Rat(-3), Rat(4, 5)}, {Rat(11, 6), Rat(-1, 9)}, {Rat(0), Rat(7, 3)}};
  for (Rat spin : {Rat(1, 2), Rat(5, 2)})
    for (int n = 1; n <= 3; ++n) {
      auto cfg = ChainConfig::homogeneous(n, spin);
      std::vector<Rat> lattice;
      for (int j = 0; lattice.size() < pairs.size() && j < 12; ++j) {
        Rat x = Rat(1) - spin + j;
        if (qplus_admissible(x, cfg)) lattice.push_back(x);
      }
      for (int d = 0; d <= 3; ++d) {
        auto b = sector_basis(cfg, d);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          const auto& [u, v] = pairs[i];
          auto tu = materialize(transfer_op(u, cfg), b), tv = materialize(transfer_op(v, cfg), b);
          auto mu = materialize(q_op(QKind::minus(u), cfg), b), mv = materialize(q_op(QKind::minus(v), cfg), b);
          std::vector<std::pair<std::string, std::pair<DenseMatrix, DenseMatrix>>> tests{
              {"[t(u),t(v)]", {tu, tv}}, {"[Q-(u),Q-(v)]", {mu, mv}}, {"[Q-(u),t(v)]", {mu, tv}}};
          if (!lattice.empty()) {
            auto pu = materialize(q_op(QKind::plus(lattice[i % lattice.size()]), cfg), b);
            tests.push_back({"[Q+(u),Q-(v)]", {pu, mv}});
            tests.push_back({"[Q+(u),t(v)]", {pu, tv}});
          }
          for (const auto& [name, ab] : tests) {
            ++checked;
            const auto& [a, c] = ab;
            if (!(a * c == c * a)) {
              ++bad;
              log << "    " << name << " N=" << n << " spin " << to_string(spin) << " d=" << d << "\n";
            }
          }
        }
      }
    }
  std::ostringstream s;
  s << checked << " commutators, " << bad << " nonzero";
  return {bad == 0 && checked > 0, s.str() + (bad ? "\n" + log.str() : "")};
}

Outcome criterion_polynomiality() {
  Tally t;
  for (int n = 1; n <= 3; ++n) {
    SamplingOptions homog;
    homog.chain = ChainConfig::homogeneous(n, Rat(1, 2));
    run_identity(t, Identity::QPOLY_U, 4, 1, 800, homog);
    SamplingOptions random;
    random.max_sites = n;
    run_identity(t, Identity::QPOLY_U, 4, 3, 810 + static_cast<std::uint64_t>(n), random);
  }
  return from_tally(t);
}

Outcome criterion_worked_spectrum() {
  auto cfg = ChainConfig::homogeneous(2, Rat(1, 2));
  std::ostringstream log;
  bool ok = true;
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      log << "    " << what << "\n";
    }
  };
  // Oracles: Lambda and Q by direct hand expansion.
  UPoly vac_lambda(std::vector<Rat>{Rat(1, 2), 0, 2}), mag_lambda(std::vector<Rat>{Rat(5, 2), 0, 2});
  UPoly one(std::vector<Rat>{1}), u(std::vector<Rat>{0, 1});
  auto vac = analyze_sector(cfg, 0);
  expect(vac.size() == 1 && vac[0].polys && vac[0].polys->lambda == vac_lambda && vac[0].polys->q == one,
         "vacuum (2u^2+1/2, 1)");
  auto sec = analyze_sector(cfg, 1);
  const BetheRecord* odd = nullptr;
  for (const auto& r : sec)
    if (r.exact && r.pair.vector == std::vector<Rat>{1, -1}) odd = &r;
  expect(odd != nullptr, "eigenvector z1 - z2 in sector 1");
  if (odd) {
    expect(odd->polys && odd->polys->q == u, "Q(u) = u");
    expect(odd->polys && odd->polys->lambda == mag_lambda, "Lambda(u) = 2u^2+5/2");
    expect(odd->tq_exact_zero && odd->polys && tq_check(odd->polys->lambda, odd->polys->q, cfg).is_zero(),
           "TQ residual exactly zero");
    expect(odd->roots.size() == 1 && odd->roots[0].exact && *odd->roots[0].exact == 0, "Bethe root 0");
    expect(odd->roots.size() == 1 && odd->roots[0].exact_residual && *odd->roots[0].exact_residual == 0,
           "Bethe residual exactly zero");
  }
  return {ok, ok ? "vacuum and one-magnon data match" : "mismatch\n" + log.str()};
}

Outcome criterion_mutation() {
  std::ostringstream s;
  bool ok = true;
  testing::ScopedPochhammerFault fault;
  for (Identity id : {Identity::F1DEF, Identity::YBE, Identity::BQ_MINUS}) {
    const auto& info = identity_info(id);
    int d = std::min(info.default_degree, 3);
    auto params = random_params(1000, id, d);
    auto r = check_identity(id, params, d);
    bool caught = r.verdict == Verdict::fail && r.witness && !r.witness->residual.is_zero();
    ok = ok && caught;
    s << "\n    " << info.name << ": " << (caught ? "fail detected" : "NOT detected");
    if (r.witness)
      s << "; witness " << r.witness->component << " on " << to_string(r.witness->input) << ", residual "
        << to_string(r.witness->residual);
  }
  return {ok, "fault injected, F1DEF/YBE/BQ_MINUS " + std::string(ok ? "all detected" : "not all detected") + s.str()};
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  struct Criterion {
    int number;
    std::string title;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "defining systems and factorization, pair space, D=4, 20 seeds", 10,
       [] {
         return catalog({Identity::F1DEF, Identity::F2DEF, Identity::F1, Identity::F2, Identity::RLL_CHECK}, 4, 20, 100);
       }},
      {2, "Yang-Baxter equation, three spaces, D=3, 10 seeds", 30,
       [] { return catalog({Identity::YBE}, 3, 10, 200); }},
      {3, "triangularity, D=4, 10 seeds", 10,
       [] {
         return catalog({Identity::TRIANG_RMINUS, Identity::TRIANG_RPLUS, Identity::TRIANG_R1, Identity::TRIANG_R2}, 4,
                        10, 300);
       }},
      {4, "degeneracies of R-, R+, Q-, Q+, d<=3, N<=3", 5, criterion_degeneracies},
      {5, "Baxter equations on random inhomogeneous chains, d<=3, 10 samples", 60, criterion_baxter},
      {6, "factorization, exchange, Q/t commutation, composite commutation, N<=3, d<=2", 60,
       [] {
         SamplingOptions opts;
         opts.max_sites = 3;
         return catalog({Identity::FACTOR_Q, Identity::EXCH_1, Identity::EXCH_2, Identity::QLL_MINUS,
                         Identity::QLL_PLUS, Identity::COMMUTE_QT, Identity::QPM_EXCHANGE},
                        2, 10, 600, opts);
       }},
      {7, "homogeneous commutativity as sector matrices, N<=3, d<=3, 5 pairs", 30, criterion_commutativity},
      {8, "polynomiality of Q- in u, N<=3, d<=4", 30, criterion_polynomiality},
      {9, "worked spectrum, N=2, spin 1/2", 5, criterion_worked_spectrum},
      {10, "mutation sensitivity", 10, criterion_mutation},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(clock::now() - start).count();
    bool in_time = secs < c.limit_s;
    bool pass = o.ok && in_time;
    if (!pass) ++failures;
    auto cut = o.detail.find('\n');
    std::string head = o.detail.substr(0, cut), tail = cut == std::string::npos ? "" : o.detail.substr(cut + 1);
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title << " (" << head << "; "
              << std::fixed;
    std::cout.precision(2);
    std::cout << secs << " s, limit " << c.limit_s << " s" << (in_time ? "" : ", over time") << ")\n";
    if (!tail.empty()) std::cout << tail << (tail.back() == '\n' ? "" : "\n");
    std::cout.flush();
  }
  return failures == 0 ? 0 : 1;
}
