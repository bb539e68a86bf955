#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qlab/chainops.hpp"

namespace qlab {

enum class Identity {
  F1DEF,
  F2DEF,
  F1,
  F2,
  RLL_CHECK,
  YBE,
  TRIANG_RMINUS,
  TRIANG_RPLUS,
  TRIANG_R1,
  TRIANG_R2,
  THREE_TERM_MINUS,
  THREE_TERM_PLUS,
  DEGEN_RMINUS,
  DEGEN_RPLUS,
  SL2_R,
  SHIFT_INV,
  BAXTER_GEN_U2,
  BAXTER_GEN_U1,
  BQ_MINUS,
  BQ_PLUS,
  QLL_MINUS,
  QLL_PLUS,
  EXCH_1,
  EXCH_2,
  FACTOR_Q,
  DEGEN_QMINUS,
  DEGEN_QPLUS,
  QPM_EXCHANGE,
  COMMUTE_TT,
  COMMUTE_QQ,
  COMMUTE_QT,
  SL2_Q,
  QPOLY_U,
  QL3_MOMENT,
};

// Which space an identity acts on.
enum class Signature {
  pair,    // z1, z2
  triple,  // z1, z2, z3
  chain,   // z1..zN of a chain config
  moment,  // scalar identity
};

enum class ValueKind {
  generic,   // any admissible rational
  lattice,   // on the terminating Q+ lattice of the chain
  lattice1,  // on the lattice with u-1 also on it
  pinned,    // fixed: a constant ("0", "1") or another value ("=u-")
};

struct ValueSpec {
  std::string_view name;
  ValueKind kind;
  std::string_view pin = {};
};

struct IdentityInfo {
  Identity id;
  std::string_view name;
  std::string_view statement;
  int spaces;  // 2, 3, or 0 for chain-level identities
  Signature signature;
  bool needs_homogeneous;
  std::vector<ValueSpec> values;  // chain signature only
  int default_degree;
};

const std::vector<IdentityInfo>& identity_catalog();
const IdentityInfo& identity_info(Identity id);
std::string_view identity_name(Identity id);
// Throws std::invalid_argument for an unknown name.
Identity parse_identity(std::string_view name);

struct ParamRecord {
  std::vector<std::pair<std::string, Rat>> values;
  std::optional<ChainConfig> chain;

  const Rat& get(std::string_view name) const;
  bool has(std::string_view name) const;
  void set(std::string_view name, const Rat& v);
  std::string describe() const;
  friend bool operator==(const ParamRecord& a, const ParamRecord& b);
};

enum class Verdict { pass, fail, skipped };
std::string_view to_string(Verdict v);

struct Witness {
  std::string component;
  Monomial input;
  Poly residual;
};

struct IdentityReport {
  Identity id;
  ParamRecord params;
  int degree = 0;
  std::size_t checked = 0;      // basis monomials
  std::size_t comparisons = 0;  // component identities per monomial
  Verdict verdict = Verdict::pass;
  std::optional<Witness> witness;
  std::string note;
};

class ParamSamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Applies both sides of every component to every basis monomial of degree
// <= D and compares exactly. Throws AdmissibilityError for inadmissible params.
IdentityReport check_identity(Identity id, const ParamRecord& params, int degree);

struct SamplingOptions {
  std::optional<ChainConfig> chain;  // fixed chain; random chain otherwise
  int max_sites = 3;
  bool force_homogeneous = false;
  int max_retries = 200;
};

// Deterministic small rationals (|num| <= 12, 1 <= den <= 6) that pass the
// admissibility predicate of the identity at degree D.
ParamRecord random_params(std::uint64_t seed, Identity id, int degree,
                          const SamplingOptions& opts = {});

// The predicate random_params enforces.
bool params_admissible(Identity id, const ParamRecord& params, int degree);

}  // namespace qlab
