#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qlab/polyring.hpp"
#include "qlab/qops.hpp"

namespace qlab {

// Sites 1..N carry SiteSpec{spin l_k, shift delta_k}; site k uses variable z_k.
struct ChainConfig {
  std::vector<SiteSpec> sites;

  static ChainConfig homogeneous(int n, const Rat& spin);

  int size() const { return static_cast<int>(sites.size()); }
  bool is_homogeneous() const;
  std::vector<VarId> vars() const;
  Rat u_plus(int k, const Rat& u) const;   // u + delta_k + l_k, k is 1-based
  Rat u_minus(int k, const Rat& u) const;  // u + delta_k - l_k
  void validate(int degree) const;
  std::string describe() const;
};

enum class Sign { plus, minus };

// Delta_+(u) = prod (u + delta_k + l_k), Delta_-(u) = prod (u + delta_k - l_k).
Rat delta_pm(Sign s, const Rat& u, const ChainConfig& cfg);
Poly delta_pm_poly(Sign s, const ChainConfig& cfg);  // polynomial in u

// tr L_1(a_1, b_1) ... L_N(a_N, b_N) applied to p.
Poly lax_trace_apply(std::span<const std::pair<Rat, Rat>> params, const Poly& p);

Poly transfer_apply(const Rat& u, const ChainConfig& cfg, const Poly& p);
LinOp transfer_op(const Rat& u, const ChainConfig& cfg);

enum class ShiftDirection {
  forward,   // psi(z_1..z_N) -> psi(z_2, ..., z_N, z_1)
  backward,  // psi(z_1..z_N) -> psi(z_N, z_1, ..., z_{N-1})
};

Poly cyclic_shift_apply(const Poly& p, int n, ShiftDirection dir);
LinOp cyclic_shift_op(int n, ShiftDirection dir);

struct QKind {
  enum class Type { minus, plus, general };
  Type type = Type::minus;
  Rat u;       // minus / plus
  Rat u1, u2;  // general

  static QKind minus(const Rat& u);
  static QKind plus(const Rat& u);
  static QKind general(const Rat& u1, const Rat& u2);
  // Q(u1|u2) from the spectral parameter and auxiliary spin.
  static QKind from_spectral(const Rat& u, const Rat& aux_spin);
  std::string describe() const;
};

// Per-site offsets j_k = u + l_k + delta_k - 1. Q+(u) is exact iff all j_k are
// non-negative integers and no (1 + l_k - u - delta_k)_{j_k} vanishes.
std::optional<std::vector<int>> qplus_lattice_offsets(const Rat& u, const ChainConfig& cfg);
bool qplus_admissible(const Rat& u, const ChainConfig& cfg);

Poly q_apply(const QKind& kind, const ChainConfig& cfg, const Poly& p);
LinOp q_op(const QKind& kind, const ChainConfig& cfg);

// Q- with u kept symbolic: the result is a polynomial in z_1..z_N and u.
Poly qminus_symbolic(const ChainConfig& cfg, const Poly& p);

// Traces over an auxiliary module in z_0: sum_m [z_0^m] A(z_0^m p), m <= m_max.
// Throws if the terms m_max + 1 and m_max + 2 do not vanish when check_tail is set.
Poly aux_trace_apply(const LinOp& a, const Poly& p, int m_max, bool check_tail);

// Direct auxiliary-trace constructions, independent of the closed forms used
// by q_apply.
Poly qminus_trace_apply(const Rat& u, const ChainConfig& cfg, const Poly& p);
Poly qplus_trace_apply(const Rat& u, const ChainConfig& cfg, const Poly& p);
Poly qgeneral_trace_apply(const Rat& u1, const Rat& u2, const ChainConfig& cfg, const Poly& p);

// Both sides of the moment identity: ((u+l)_k/(2l)_k, Beta-moment ratio).
std::pair<Rat, Rat> ql3_moment_sides(int k, const Rat& u, const Rat& spin);

// (u+l)_k/(2l)_k against the Beta-moment recurrence B(a+1,b)/B(a,b) = a/(a+b).
bool ql3_moment_identity_check(int k, const Rat& u, const Rat& spin);

}  // namespace qlab
