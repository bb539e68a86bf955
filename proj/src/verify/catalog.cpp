#include <algorithm>
#include <sstream>

#include "qlab/verify.hpp"

namespace qlab {

namespace {

using VK = ValueKind;

std::vector<ValueSpec> pair_values() {
  return {{"u+", VK::generic}, {"u-", VK::generic}, {"v+", VK::generic}, {"v-", VK::generic}};
}

std::vector<ValueSpec> triple_values() {
  auto v = pair_values();
  v.push_back({"w+", VK::generic});
  v.push_back({"w-", VK::generic});
  return v;
}

std::vector<IdentityInfo> build_catalog() {
  using I = Identity;
  using S = Signature;
  std::vector<IdentityInfo> c;
  auto add = [&](I id, std::string_view name, std::string_view stmt, int spaces, S sig, bool homog,
                 std::vector<ValueSpec> values, int degree) {
    c.push_back(IdentityInfo{id, name, stmt, spaces, sig, homog, std::move(values), degree});
  };
  add(I::F1DEF, "F1DEF",
      "R+(u+|v+,v-)[L1(u+,u-)+L2(v+,v-)] = [L1(v+,u-)+L2(u+,v-)]R+ and [R+, z1] = 0", 2, S::pair,
      false, pair_values(), 4);
  add(I::F2DEF, "F2DEF",
      "R-(u+,u-|v-)[L1(u+,u-)+L2(v+,v-)] = [L1(u+,v-)+L2(v+,u-)]R- and [R-, z2] = 0", 2, S::pair,
      false, pair_values(), 4);
  add(I::F1, "F1", "R+(u+|v+,v-) L1(u+,u-) L2(v+,v-) = L1(v+,u-) L2(u+,v-) R+", 2, S::pair, false,
      pair_values(), 4);
  add(I::F2, "F2", "R-(u+,u-|v-) L1(u+,u-) L2(v+,v-) = L1(u+,v-) L2(v+,u-) R-", 2, S::pair, false,
      pair_values(), 4);
  add(I::RLL_CHECK, "RLL_CHECK",
      "Rcheck L1(u) L2(v) = L1(v) L2(u) Rcheck and R L1(u) L2(v) = L2(v) L1(u) R", 2, S::pair,
      false, pair_values(), 4);
  add(I::YBE, "YBE",
      "Rcheck12(v|w) Rcheck23(u|w) Rcheck12(u|v) = Rcheck23(u|v) Rcheck12(u|w) Rcheck23(v|w)", 3,
      S::triple, false, triple_values(), 3);
  add(I::TRIANG_RMINUS, "TRIANG_RMINUS",
      "M1^-1 R-(u+,u-|0) L1 M2 = [[u+ R-(u++1,u-+1|0), -R- d1], [0, u- R-(u+-1,u--1|0)]]", 2,
      S::pair, false, {{"u+", VK::generic}, {"u-", VK::generic}, {"v-", VK::pinned, "0"}}, 4);
  add(I::TRIANG_RPLUS, "TRIANG_RPLUS",
      "M1^-1 L2 R+(u+|1,u-) M2 is upper triangular with diagonal "
      "[u-(u+-1)/(u--1) R+(u+-1|1,u--1), u- R+(u++1|1,u-+1)]",
      2, S::pair, false, {{"u+", VK::generic}, {"u-", VK::generic}, {"v+", VK::pinned, "1"}}, 4);
  add(I::TRIANG_R1, "TRIANG_R1",
      "M2^-1 R(u+,u-|v+,0) L1 M2 is upper triangular with diagonal "
      "[u+ R(u++1,u-+1|v++1,0), u- R(u+-1,u--1|v+-1,0)]",
      2, S::pair, false,
      {{"u+", VK::generic}, {"u-", VK::generic}, {"v+", VK::generic}, {"v-", VK::pinned, "0"}}, 4);
  add(I::TRIANG_R2, "TRIANG_R2",
      "M2^-1 L1 R(u+,u-|1,v-) M2 is upper triangular with diagonal "
      "[u-(u+-1)/(u--1) R(u+-1,u--1|1,v--1), u- R(u++1,u-+1|1,v-+1)]",
      2, S::pair, false,
      {{"u+", VK::generic}, {"u-", VK::generic}, {"v+", VK::pinned, "1"}, {"v-", VK::generic}}, 4);
  add(I::THREE_TERM_MINUS, "THREE_TERM_MINUS",
      "R-12(v+,v-|w-) Rcheck23(u|w) Rcheck12(u|v) = "
      "Rcheck23(u+,u-|w+,v-) Rcheck12(u+,u-|v+,w-) R-23(v+,v-|w-)",
      3, S::triple, false, triple_values(), 3);
  add(I::THREE_TERM_PLUS, "THREE_TERM_PLUS",
      "R+12(v+|w+,w-) Rcheck23(u|w) Rcheck12(u|v) = "
      "Rcheck23(u+,u-|v+,w-) Rcheck12(u+,u-|w+,v-) R+23(v+|w+,w-)",
      3, S::triple, false, triple_values(), 3);
  add(I::DEGEN_RMINUS, "DEGEN_RMINUS", "R-(u+,u-|u-) = 1", 2, S::pair, false,
      {{"u+", VK::generic}, {"u-", VK::generic}, {"v-", VK::pinned, "=u-"}}, 4);
  add(I::DEGEN_RPLUS, "DEGEN_RPLUS", "R+(u+|u+,v-) = 1", 2, S::pair, false,
      {{"u+", VK::generic}, {"v+", VK::pinned, "=u+"}, {"v-", VK::generic}}, 4);
  add(I::SL2_R, "SL2_R", "[R(u+,u-|v+,v-), S1 + S2] = 0 for S, S-, S+", 2, S::pair, false,
      pair_values(), 4);
  auto shift_values = pair_values();
  shift_values.push_back({"lambda", VK::generic});
  add(I::SHIFT_INV, "SHIFT_INV",
      "R-(u+,u-|v-) = R-(u++l,u-+l|v-+l) and R+(u+|v+,v-) = R+(u++l|v++l,v-+l)", 2, S::pair,
      false, shift_values, 4);
  add(I::BAXTER_GEN_U2, "BAXTER_GEN_U2",
      "Q(u1|u) t(u) = D+(u) Q(u1|u+1) + D-(u) Q(u1|u-1)", 0, S::chain, false,
      {{"u1", VK::lattice}, {"u", VK::generic}}, 3);
  add(I::BAXTER_GEN_U1, "BAXTER_GEN_U1",
      "t(u) Q(u|u2) = D+(u-1)D-(u)/D-(u-1) Q(u-1|u2) + D-(u) Q(u+1|u2)", 0, S::chain, false,
      {{"u", VK::lattice1}, {"u2", VK::generic}}, 3);
  add(I::BQ_MINUS, "BQ_MINUS", "Q-(u) t(u) = D+(u) Q-(u+1) + D-(u) Q-(u-1)", 0, S::chain, false,
      {{"u", VK::generic}}, 3);
  add(I::BQ_PLUS, "BQ_PLUS", "t(u) Q+(u) = D+(u-1)D-(u)/D-(u-1) Q+(u-1) + D-(u) Q+(u+1)", 0,
      S::chain, false, {{"u", VK::lattice1}}, 3);
  add(I::QLL_MINUS, "QLL_MINUS",
      "Q-(lambda) tr L1(a1,b1)...LN(aN,bN) = tr L1(a2,b1)...LN(a1,bN) Q-(lambda), a_k = w+d_k+l_k, "
      "b_k = w+d_k-l_k",
      0, S::chain, false, {{"lambda", VK::generic}, {"w", VK::generic}}, 3);
  add(I::QLL_PLUS, "QLL_PLUS",
      "tr L1(a1,b1)...LN(aN,bN) Q+(lambda) = Q+(lambda) tr L1(a1,bN)...LN(aN,b(N-1))", 0, S::chain,
      false, {{"lambda", VK::lattice}, {"w", VK::generic}}, 3);
  auto four = std::vector<ValueSpec>{
      {"u1", VK::lattice}, {"u2", VK::generic}, {"v1", VK::lattice}, {"v2", VK::generic}};
  add(I::EXCH_1, "EXCH_1", "Q(u1|u2) Q(v1|v2) = Q(v1|u2) Q(u1|v2)", 0, S::chain, false, four, 2);
  add(I::EXCH_2, "EXCH_2", "Q(u1|u2) Q(v1|v2) = Q(u1|v2) Q(v1|u2)", 0, S::chain, false, four, 2);
  add(I::FACTOR_Q, "FACTOR_Q", "tr_0 R10...RN0 = Q+(u1) P Q-(u2)", 0, S::chain, false,
      {{"u1", VK::lattice}, {"u2", VK::generic}}, 2);
  add(I::DEGEN_QMINUS, "DEGEN_QMINUS", "Q-(l) = backward cyclic shift", 0, S::chain, true, {}, 3);
  add(I::DEGEN_QPLUS, "DEGEN_QPLUS",
      "Q+(1-l) = backward cyclic shift, Q(1-l|u) = Q-(u), Q(v|l) = Q+(v)", 0, S::chain, true,
      {{"u", VK::generic}, {"v", VK::lattice}}, 3);
  add(I::QPM_EXCHANGE, "QPM_EXCHANGE",
      "Q+(u1) P Q-(u2) Q+(v1) = Q+(v1) P Q-(u2) Q+(u1) and "
      "Q-(u2) Q+(v1) P Q-(v2) = Q-(v2) Q+(v1) P Q-(u2)",
      0, S::chain, false, four, 2);
  add(I::COMMUTE_TT, "COMMUTE_TT", "[t(u), t(v)] = 0", 0, S::chain, false,
      {{"u", VK::generic}, {"v", VK::generic}}, 3);
  add(I::COMMUTE_QQ, "COMMUTE_QQ",
      "[Q(u1|u2), Q(v1|v2)] = 0; homogeneous: [Q-(u2),Q-(v2)] = [Q+(u1),Q-(v2)] = [Q+(u1),Q+(v1)] = 0",
      0, S::chain, false, four, 3);
  add(I::COMMUTE_QT, "COMMUTE_QT",
      "[Q+(u1) P Q-(u2), t(v)] = 0; homogeneous: [Q-(u2), t(v)] = [Q+(u1), t(v)] = 0", 0, S::chain,
      false, {{"u1", VK::lattice}, {"u2", VK::generic}, {"v", VK::generic}}, 3);
  add(I::SL2_Q, "SL2_Q", "[Q(u1|u2), S] = 0 for total S, S-, S+; homogeneous: also Q-(u2), Q+(u1)",
      0, S::chain, false, {{"u1", VK::lattice}, {"u2", VK::generic}}, 3);
  add(I::QPOLY_U, "QPOLY_U",
      "u -> Q-(u)p interpolated at d+1 nodes matches a further node and the symbolic form", 0,
      S::chain, false, {}, 4);
  add(I::QL3_MOMENT, "QL3_MOMENT", "(u+l)_k/(2l)_k = B(u+l+k, l-u)/B(u+l, l-u) for k <= D", 0,
      S::moment, false, {{"u", VK::generic}, {"l", VK::generic}}, 6);
  return c;
}

}  // namespace

const std::vector<IdentityInfo>& identity_catalog() {
  static const std::vector<IdentityInfo> catalog = build_catalog();
  return catalog;
}

const IdentityInfo& identity_info(Identity id) {
  const auto& c = identity_catalog();
  return c.at(static_cast<std::size_t>(id));
}

std::string_view identity_name(Identity id) { return identity_info(id).name; }

Identity parse_identity(std::string_view name) {
  for (const auto& info : identity_catalog())
    if (info.name == name) return info.id;
  throw std::invalid_argument("unknown identity: " + std::string(name));
}

const Rat& ParamRecord::get(std::string_view name) const {
  for (const auto& [k, v] : values)
    if (k == name) return v;
  throw std::invalid_argument("parameter '" + std::string(name) + "' missing from record");
}

bool ParamRecord::has(std::string_view name) const {
  return std::any_of(values.begin(), values.end(), [&](const auto& kv) { return kv.first == name; });
}

void ParamRecord::set(std::string_view name, const Rat& v) {
  for (auto& [k, val] : values)
    if (k == name) {
      val = v;
      return;
    }
  values.emplace_back(std::string(name), v);
}

std::string ParamRecord::describe() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : values) {
    os << (first ? "" : " ") << k << "=" << to_string(v);
    first = false;
  }
  if (chain) os << (first ? "" : " ") << chain->describe();
  return os.str();
}

bool operator==(const ParamRecord& a, const ParamRecord& b) {
  if (a.values != b.values || a.chain.has_value() != b.chain.has_value()) return false;
  if (!a.chain) return true;
  if (a.chain->size() != b.chain->size()) return false;
  for (int k = 0; k < a.chain->size(); ++k)
    if (a.chain->sites[k].spin != b.chain->sites[k].spin ||
        a.chain->sites[k].shift != b.chain->sites[k].shift)
      return false;
  return true;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "exact-pass";
    case Verdict::fail: return "fail";
    case Verdict::skipped: break;
  }
  return "skipped";
}

}  // namespace qlab
