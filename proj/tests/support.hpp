#pragma once

#include <random>
#include <vector>

#include "qlab/polyring.hpp"

namespace qlab::test {

inline Poly z(int k) { return Poly::var(VarId::z(k)); }
inline Poly t(int k) { return Poly::var(VarId::t(k)); }
inline Poly u() { return Poly::var(VarId::u()); }
inline Rat q(long p, long d = 1) { return Rat(p, d); }

inline Rat random_rat(std::mt19937_64& rng, int max_num = 6, int max_den = 4) {
  std::uniform_int_distribution<int> num(-max_num, max_num), den(1, max_den);
  Rat r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

// Random polynomial in vars with total degree <= max_degree.
inline Poly random_poly(std::mt19937_64& rng, const std::vector<VarId>& vars, int max_degree,
                        int terms = 4) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(vars.size()) - 1), deg(0, max_degree);
  Poly p;
  for (int i = 0; i < terms; ++i) {
    Monomial m;
    int d = deg(rng);
    for (int j = 0; j < d; ++j) m = m * Monomial::of(vars[pick(rng)]);
    p.add_term(m, random_rat(rng));
  }
  return p;
}

inline long binomial(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace qlab::test
