#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qlab/cli.hpp"

namespace qlab::cli {

using nlohmann::json;

namespace {

Rat parse_flag_rat(const std::string& flag, const std::string& text) {
  try {
    return parse_rat(text);
  } catch (const std::exception& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json rat_list(const std::vector<Rat>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

json cplx_list(const std::vector<cplx>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(json::array({x.real(), x.imag()}));
  return a;
}

json chain_json(const ChainConfig& c) {
  json spins = json::array(), shifts = json::array();
  for (const auto& s : c.sites) {
    spins.push_back(to_string(s.spin));
    shifts.push_back(to_string(s.shift));
  }
  return {{"n", c.size()}, {"spins", spins}, {"shifts", shifts}};
}

// Runs fn(i) for i < count on the worker pool; results stay indexed by i.
template <class F>
void parallel_for(std::size_t count, F&& fn) {
  unsigned workers = std::min<unsigned>(thread_count(), static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw UsageError("cannot open output file " + cfg.out);
  f << text;
}

json envelope(const RunConfig& cfg, json results, json summary) {
  return {{"schema_version", kSchemaVersion},
          {"run_config", cfg.to_json()},
          {"results", std::move(results)},
          {"summary", std::move(summary)},
          {"generated_at", utc_timestamp()}};
}

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

ChainConfig spectral_chain(const RunConfig& cfg) {
  auto chain = cfg.chain();
  if (!chain) throw UsageError(cfg.command + " needs a chain: --n with --spin or --spins");
  try {
    chain->validate(cfg.dmax + 1);
  } catch (const std::exception& e) {
    throw UsageError(std::string("inadmissible chain: ") + e.what());
  }
  if (cfg.dmax < 0) throw UsageError("--dmax must be non-negative");
  for (int d = 0; d <= cfg.dmax; ++d) {
    std::size_t dim = binomial(static_cast<std::size_t>(d + chain->size() - 1), static_cast<std::size_t>(chain->size() - 1));
    if (!cfg.floating && dim > kExactDimensionBound)
      throw UsageError("sector d=" + std::to_string(d) + " has dimension " + std::to_string(dim) +
                       " above the exact bound " + std::to_string(kExactDimensionBound) + "; pass --float");
  }
  return *chain;
}

std::vector<std::vector<BetheRecord>> run_sectors(const RunConfig& cfg, const ChainConfig& chain) {
  SpectralOptions opts;
  opts.mode = cfg.floating ? EigenMode::floating : EigenMode::exact;
  std::vector<std::vector<BetheRecord>> sectors(static_cast<std::size_t>(cfg.dmax) + 1);
  std::vector<std::string> errors(sectors.size());
  parallel_for(sectors.size(), [&](std::size_t d) {
    try {
      sectors[d] = analyze_sector(chain, static_cast<int>(d), opts);
    } catch (const std::exception& e) {
      errors[d] = e.what();
    }
  });
  for (std::size_t d = 0; d < errors.size(); ++d)
    if (!errors[d].empty()) throw UsageError("sector d=" + std::to_string(d) + ": " + errors[d]);
  return sectors;
}

bool tq_passes(const BetheRecord& r) {
  if (r.polys) return r.tq_exact_zero;
  if (r.fpolys) return r.tq_residual < 1e-10;
  return true;  // no eigen-polynomials; reported through the note
}

}  // namespace

unsigned thread_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QLAB_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

std::optional<ChainConfig> RunConfig::chain() const {
  if (!spin && spins.empty()) {
    if (!deltas.empty()) throw UsageError("--deltas needs --spins or --spin");
    return std::nullopt;
  }
  if (spin && !spins.empty()) throw UsageError("--spin and --spins are exclusive");
  ChainConfig c;
  if (spin) {
    if (!n) throw UsageError("--spin needs --n");
    if (*n < 1 || *n > kMaxSites) throw UsageError("--n must be between 1 and " + std::to_string(kMaxSites));
    Rat l = parse_flag_rat("--spin", *spin);
    c.sites.assign(static_cast<std::size_t>(*n), SiteSpec{l, Rat(0)});
  } else {
    if (n && *n != static_cast<int>(spins.size())) throw UsageError("--n disagrees with the number of --spins");
    if (spins.size() > static_cast<std::size_t>(kMaxSites)) throw UsageError("too many sites");
    for (const auto& s : spins) c.sites.push_back(SiteSpec{parse_flag_rat("--spins", s), Rat(0)});
  }
  if (!deltas.empty()) {
    if (deltas.size() != c.sites.size()) throw UsageError("--deltas needs one entry per site");
    for (std::size_t k = 0; k < deltas.size(); ++k) c.sites[k].shift = parse_flag_rat("--deltas", deltas[k]);
  }
  if (homogeneous && !c.is_homogeneous()) throw UsageError("--homog given for an inhomogeneous chain");
  return c;
}

std::vector<Identity> RunConfig::selected_identities() const {
  std::vector<Identity> ids;
  if (all || identities.empty()) {
    for (const auto& info : identity_catalog()) ids.push_back(info.id);
    return ids;
  }
  for (const auto& name : identities) {
    try {
      ids.push_back(parse_identity(name));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return ids;
}

std::string RunConfig::effective_format() const {
  if (!format.empty()) return format;
  return command == "bethe" ? "csv" : "json";
}

json RunConfig::to_json() const {
  json j{{"command", command}, {"homogeneous", homogeneous}, {"seed", seed},       {"trials", trials},
         {"all", all},         {"identities", identities},   {"dmax", dmax},       {"float", floating},
         {"format", effective_format()}, {"mutate_pochhammer", mutate_pochhammer}};
  j["n"] = n ? json(*n) : json(nullptr);
  j["spin"] = spin ? json(*spin) : json(nullptr);
  j["spins"] = spins;
  j["deltas"] = deltas;
  j["degree"] = degree ? json(*degree) : json(nullptr);
  return j;
}

json to_json(const ParamRecord& params) {
  json values = json::object();
  for (const auto& [k, v] : params.values) values[k] = to_string(v);
  json j{{"values", values}};
  if (params.chain) j["chain"] = chain_json(*params.chain);
  return j;
}

json to_json(const IdentityReport& report) {
  const auto& info = identity_info(report.id);
  json j{{"identity", info.name},
         {"statement", info.statement},
         {"params", to_json(report.params)},
         {"degree", report.degree},
         {"checked", report.checked},
         {"comparisons", report.comparisons},
         {"verdict", to_string(report.verdict)}};
  if (report.witness)
    j["witness"] = {{"component", report.witness->component},
                    {"input", to_string(report.witness->input)},
                    {"residual", to_string(report.witness->residual)}};
  if (!report.note.empty()) j["note"] = report.note;
  return j;
}

json to_json(const BetheRecord& r) {
  json j{{"d", r.degree},
         {"index", r.index},
         {"exact", r.exact},
         {"irrational", r.pair.irrational},
         {"multiplicity", r.pair.multiplicity}};
  if (r.exact) {
    j["eigenvector"] = rat_list(r.pair.vector);
    j["t_u0"] = to_string(r.pair.values.front());
  } else {
    j["eigenvector"] = cplx_list(r.pair.fvector);
    j["t_u0"] = json::array({r.pair.fvalues.front().real(), r.pair.fvalues.front().imag()});
    j["residual_bound"] = r.pair.residual_bound;
  }
  if (r.polys) {
    j["lambda"] = rat_list(r.polys->lambda.c);
    j["lambda_text"] = to_string(r.polys->lambda.to_poly(VarId::u()));
    j["q"] = rat_list(r.polys->q.c);
    j["q_text"] = to_string(r.polys->q.to_poly(VarId::u()));
    j["node_offset"] = to_string(r.polys->node_offset);
    j["tq"] = r.tq_exact_zero ? "exact-zero" : "nonzero";
  } else if (r.fpolys) {
    j["lambda"] = cplx_list(r.fpolys->lambda);
    j["q"] = cplx_list(r.fpolys->q);
    j["node_offset"] = to_string(r.fpolys->node_offset);
    j["tq"] = r.tq_residual < 1e-10 ? "float-pass" : "float-fail";
    j["tq_residual"] = r.tq_residual;
  }
  json roots = json::array();
  for (const auto& b : r.roots) {
    json x{{"re", b.value.real()}, {"im", b.value.imag()}, {"multiplicity", b.multiplicity},
           {"condition", b.condition}};
    if (b.exact) x["exact"] = to_string(*b.exact);
    if (b.residual) x["residual"] = *b.residual;
    if (b.exact_residual) x["exact_residual"] = to_string(*b.exact_residual);
    if (!b.flag.empty()) x["flag"] = b.flag;
    roots.push_back(std::move(x));
  }
  j["roots"] = std::move(roots);
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

std::string bethe_csv(const std::vector<BetheRecord>& records) {
  std::ostringstream os;
  os << "d,eigen-index,root-re,root-im,bethe-residual,tq-exact\n";
  os << std::setprecision(17);
  for (const auto& r : records) {
    std::string tq = r.polys ? (r.tq_exact_zero ? "yes" : "no") : "n/a";
    if (r.roots.empty()) {
      os << r.degree << "," << r.index << ",,,," << tq << "\n";
      continue;
    }
    for (const auto& b : r.roots)
      for (int m = 0; m < b.multiplicity; ++m) {
        os << r.degree << "," << r.index << "," << b.value.real() << "," << b.value.imag() << ",";
        if (b.exact_residual)
          os << to_string(*b.exact_residual);
        else if (b.residual)
          os << *b.residual;
        else
          os << b.flag;
        os << "," << tq << "\n";
      }
  }
  return os.str();
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig cfg;
  CLI::App app{"Exact operator identities, spectra and Bethe roots of the rational sl(2) chain", "qlab"};
  app.require_subcommand(1);
  auto chain_flags = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "number of sites");
    sub->add_flag("--homog", cfg.homogeneous, "homogeneous chain");
    sub->add_option("--spin", cfg.spin, "spin of every site, p/q");
    sub->add_option("--spins", cfg.spins, "per-site spins, comma separated")->delimiter(',');
    sub->add_option("--deltas", cfg.deltas, "per-site inhomogeneities, comma separated")->delimiter(',');
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto* verify = app.add_subcommand("verify", "check catalog identities exactly");
  chain_flags(verify);
  verify->add_flag("--all", cfg.all, "every catalog identity");
  verify->add_option("--identity", cfg.identities, "identity name (repeatable)");
  verify->add_option("--degree", cfg.degree, "monomial degree bound");
  verify->add_option("--trials", cfg.trials, "random parameter draws per identity")->check(CLI::PositiveNumber);
  verify->add_option("--seed", cfg.seed, "base seed");
  verify->add_flag("--mutate-pochhammer", cfg.mutate_pochhammer, "inject an off-by-one Pochhammer fault");
  for (const char* name : {"spectrum", "bethe"}) {
    auto* sub = app.add_subcommand(name, std::string(name) == "bethe" ? "Bethe roots per sector"
                                                                      : "joint eigen-data per sector");
    chain_flags(sub);
    sub->add_option("--dmax", cfg.dmax, "largest sector degree");
    sub->add_flag("--float", cfg.floating, "floating eigensolver for every sector");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.command == "verify" && cfg.format == "csv") throw UsageError("verify emits JSON only");
  return cfg;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto ids = cfg.selected_identities();
  SamplingOptions opts;
  opts.chain = cfg.chain();
  if (opts.chain) {
    try {
      opts.chain->validate(1);
    } catch (const std::exception& e) {
      throw UsageError(std::string("inadmissible chain: ") + e.what());
    }
  } else if (cfg.n) {
    if (*cfg.n < 2 || *cfg.n > kMaxSites) throw UsageError("--n must be between 2 and " + std::to_string(kMaxSites));
    opts.max_sites = *cfg.n;
  }
  opts.force_homogeneous = cfg.homogeneous;
  if (cfg.degree && *cfg.degree < 0) throw UsageError("--degree must be non-negative");

  struct Job {
    Identity id;
    int trial;
  };
  std::vector<Job> jobs;
  for (auto id : ids)
    for (int t = 0; t < cfg.trials; ++t) jobs.push_back({id, t});
  std::vector<IdentityReport> reports(jobs.size());

  std::optional<testing::ScopedPochhammerFault> fault;
  if (cfg.mutate_pochhammer) fault.emplace();
  parallel_for(jobs.size(), [&](std::size_t i) {
    const auto& info = identity_info(jobs[i].id);
    int degree = cfg.degree.value_or(info.default_degree);
    IdentityReport& rep = reports[i];
    rep.id = jobs[i].id;
    rep.degree = degree;
    try {
      ParamRecord p = random_params(cfg.seed + static_cast<std::uint64_t>(jobs[i].trial), jobs[i].id, degree, opts);
      rep = check_identity(jobs[i].id, p, degree);
    } catch (const ParamSamplingError& e) {
      rep.verdict = Verdict::skipped;
      rep.note = e.what();
    } catch (const AdmissibilityError& e) {
      rep.verdict = Verdict::skipped;
      rep.note = e.what();
    }
  });
  fault.reset();

  json results = json::array();
  std::size_t passed = 0, failed = 0, skipped = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& rep = reports[i];
    json j = to_json(rep);
    j["trial"] = jobs[i].trial;
    j["seed"] = cfg.seed + static_cast<std::uint64_t>(jobs[i].trial);
    results.push_back(std::move(j));
    switch (rep.verdict) {
      case Verdict::pass: ++passed; break;
      case Verdict::skipped: ++skipped; break;
      case Verdict::fail:
        ++failed;
        err << "FAIL " << identity_name(rep.id) << " [" << rep.params.describe() << "] witness "
            << rep.witness->component << " on " << to_string(rep.witness->input) << ": "
            << to_string(rep.witness->residual) << "\n";
        break;
    }
  }
  json summary{{"total", reports.size()}, {"passed", passed}, {"failed", failed}, {"skipped", skipped}};
  emit(cfg, envelope(cfg, std::move(results), summary).dump(2) + "\n", out);
  err << "verify: " << passed << " passed, " << failed << " failed, " << skipped << " skipped\n";
  if (failed > 0) return kExitFail;
  if (passed == 0) {
    err << "verify: no identity could run with this configuration\n";
    return kExitUsage;
  }
  return kExitPass;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ChainConfig chain = spectral_chain(cfg);
  auto sectors = run_sectors(cfg, chain);
  std::size_t pairs = 0, exact = 0, tq_fail = 0;
  json results = json::array();
  std::vector<BetheRecord> flat;
  for (std::size_t d = 0; d < sectors.size(); ++d) {
    SectorBasis basis = sector_basis(chain, static_cast<int>(d));
    json monos = json::array();
    for (const auto& m : basis.monomials) monos.push_back(to_string(m));
    json recs = json::array();
    for (const auto& r : sectors[d]) {
      ++pairs;
      exact += r.exact ? 1 : 0;
      tq_fail += tq_passes(r) ? 0 : 1;
      recs.push_back(to_json(r));
      flat.push_back(r);
    }
    results.push_back({{"d", d}, {"dim", basis.dim()}, {"basis", monos}, {"eigenpairs", recs}});
  }
  if (cfg.effective_format() == "csv") {
    emit(cfg, bethe_csv(flat), out);
  } else {
    json summary{{"chain", chain_json(chain)}, {"sectors", sectors.size()}, {"eigenpairs", pairs},
                 {"exact", exact}, {"tq_fail", tq_fail}};
    emit(cfg, envelope(cfg, std::move(results), summary).dump(2) + "\n", out);
  }
  err << "spectrum: " << pairs << " eigenpairs over " << sectors.size() << " sectors, " << tq_fail
      << " TQ failures\n";
  return tq_fail ? kExitFail : kExitPass;
}

int cmd_bethe(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  ChainConfig chain = spectral_chain(cfg);
  if (!chain.is_homogeneous()) throw UsageError("bethe needs a homogeneous chain");
  auto sectors = run_sectors(cfg, chain);
  std::vector<BetheRecord> flat;
  for (auto& s : sectors)
    for (auto& r : s) flat.push_back(std::move(r));
  std::size_t tq_fail = 0;
  for (const auto& r : flat) tq_fail += tq_passes(r) ? 0 : 1;
  if (cfg.effective_format() == "csv") {
    emit(cfg, bethe_csv(flat), out);
  } else {
    json results = json::array();
    for (const auto& r : flat) results.push_back(to_json(r));
    json summary{{"chain", chain_json(chain)}, {"eigenpairs", flat.size()}, {"tq_fail", tq_fail}};
    emit(cfg, envelope(cfg, std::move(results), summary).dump(2) + "\n", out);
  }
  err << "bethe: " << flat.size() << " eigenpairs, " << tq_fail << " TQ failures\n";
  return tq_fail ? kExitFail : kExitPass;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    auto cfg = parse_args(argc, argv, out);
    if (!cfg) return kExitPass;
    if (cfg->command == "verify") return cmd_verify(*cfg, out, err);
    if (cfg->command == "spectrum") return cmd_spectrum(*cfg, out, err);
    return cmd_bethe(*cfg, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const AdmissibilityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace qlab::cli
