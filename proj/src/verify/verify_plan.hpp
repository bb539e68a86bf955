#pragma once

#include <string>
#include <vector>

#include "qlab/verify.hpp"

namespace qlab::detail {

struct Component {
  std::string name;
  LinOp lhs, rhs;
};

struct Plan {
  std::vector<VarId> vars;  // basis variables; empty for scalar identities
  std::vector<Component> parts;
};

// Throws AdmissibilityError or std::invalid_argument when the parameters do
// not fit the identity.
Plan plan_identity(Identity id, const ParamRecord& params, int degree);

}  // namespace qlab::detail
