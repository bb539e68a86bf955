#include <algorithm>
#include <random>

#include "verify_plan.hpp"

namespace qlab {

namespace {

class Sampler {
 public:
  Sampler(std::uint64_t seed, Identity id)
      : rng_(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(id) + 1) {}

  // Uniform on [lo, hi] by rejection, identical on every standard library.
  int uniform(int lo, int hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    std::uint64_t limit = rng_.max() - rng_.max() % span;
    std::uint64_t x;
    do x = rng_();
    while (x >= limit);
    return lo + static_cast<int>(x % span);
  }

  Rat rational() {
    Rat r(uniform(-12, 12), uniform(1, 6));
    r.canonicalize();
    return r;
  }

  // Spin with 2l not an integer.
  Rat spin() {
    for (;;) {
      Rat l = rational();
      if (Rat(2 * l).get_den() != 1) return l;
    }
  }

 private:
  std::mt19937_64 rng_;
};

bool needs_lattice(const IdentityInfo& info) {
  return std::any_of(info.values.begin(), info.values.end(), [](const ValueSpec& v) {
    return v.kind == ValueKind::lattice || v.kind == ValueKind::lattice1;
  });
}

ChainConfig random_chain(Sampler& s, const IdentityInfo& info, const SamplingOptions& opts) {
  int n = s.uniform(2, std::max(2, std::min(opts.max_sites, kMaxSites)));
  if (info.needs_homogeneous || opts.force_homogeneous) return ChainConfig::homogeneous(n, s.spin());
  ChainConfig cfg;
  bool lattice = needs_lattice(info);
  Rat c = s.rational();
  int free_site = s.uniform(0, n - 1);
  for (int k = 0; k < n; ++k) {
    Rat l = s.spin();
    Rat shift = lattice ? Rat(c + (k == free_site ? 0 : s.uniform(0, 1)) - l) : s.rational();
    cfg.sites.push_back(SiteSpec{l, shift});
  }
  return cfg;
}

// 1 - min(l_k + delta_k) + j when every l_k + delta_k agrees mod 1.
std::optional<Rat> lattice_value(const ChainConfig& cfg, int j) {
  Rat lo = cfg.sites[0].spin + cfg.sites[0].shift;
  for (const auto& site : cfg.sites) {
    Rat x = site.spin + site.shift;
    if (Rat(x - lo).get_den() != 1) return std::nullopt;
    lo = std::min(lo, x);
  }
  return Rat(1 - lo + j);
}

ParamRecord draw(Sampler& s, const IdentityInfo& info, const SamplingOptions& opts) {
  ParamRecord r;
  if (info.signature == Signature::chain)
    r.chain = opts.chain ? *opts.chain : random_chain(s, info, opts);
  for (const auto& v : info.values) {
    switch (v.kind) {
      case ValueKind::generic: r.set(v.name, info.signature == Signature::moment && v.name == "l"
                                                 ? s.spin()
                                                 : s.rational());
        break;
      case ValueKind::lattice:
      case ValueKind::lattice1: {
        const ChainConfig& cfg = *r.chain;
        bool shifted = v.kind == ValueKind::lattice1;
        std::vector<Rat> fresh, used;
        for (int j = shifted ? 1 : 0; j <= (shifted ? 4 : 3); ++j) {
          auto x = lattice_value(cfg, j);
          if (!x) throw ParamSamplingError("chain " + cfg.describe() + " has no Q+ lattice");
          if (!qplus_admissible(*x, cfg) || (shifted && !qplus_admissible(*x - 1, cfg))) continue;
          bool taken = std::any_of(r.values.begin(), r.values.end(), [&](const auto& kv) { return kv.second == *x; });
          (taken ? used : fresh).push_back(*x);
        }
        // distinct lattice points keep exchange checks non-trivial
        const auto& pool = fresh.empty() ? used : fresh;
        if (pool.empty())
          throw ParamSamplingError("no admissible Q+ lattice point for " + std::string(v.name) + " on " +
                                   cfg.describe());
        r.set(v.name, pool[static_cast<std::size_t>(s.uniform(0, static_cast<int>(pool.size()) - 1))]);
        break;
      }
      case ValueKind::pinned:
        if (!v.pin.empty() && v.pin.front() == '=')
          r.set(v.name, r.get(v.pin.substr(1)));
        else
          r.set(v.name, parse_rat(v.pin));
        break;
    }
  }
  return r;
}

}  // namespace

bool params_admissible(Identity id, const ParamRecord& params, int degree) {
  try {
    detail::plan_identity(id, params, degree);
    return true;
  } catch (const AdmissibilityError&) {
    return false;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

ParamRecord random_params(std::uint64_t seed, Identity id, int degree, const SamplingOptions& opts) {
  const IdentityInfo& info = identity_info(id);
  if (opts.chain && info.needs_homogeneous && !opts.chain->is_homogeneous())
    throw ParamSamplingError(std::string(info.name) + " requires a homogeneous chain");
  Sampler s(seed, id);
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    ParamRecord r = draw(s, info, opts);
    if (params_admissible(id, r, degree)) return r;
  }
  throw ParamSamplingError("no admissible parameters for " + std::string(info.name) + " after " +
                           std::to_string(opts.max_retries) + " draws");
}

}  // namespace qlab
