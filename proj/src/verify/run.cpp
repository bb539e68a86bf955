#include "verify_plan.hpp"

namespace qlab {

IdentityReport check_identity(Identity id, const ParamRecord& params, int degree) {
  detail::Plan plan = detail::plan_identity(id, params, degree);
  std::vector<Monomial> basis =
      plan.vars.empty() ? std::vector<Monomial>{Monomial{}}
                        : monomial_basis(plan.vars, degree, BasisMode::up_to_degree);
  IdentityReport report;
  report.id = id;
  report.params = params;
  report.degree = degree;
  report.checked = basis.size();
  for (const auto& m : basis) {
    Poly p = Poly::term(Rat(1), m);
    for (const auto& part : plan.parts) {
      ++report.comparisons;
      Poly residual = part.lhs(p) - part.rhs(p);
      if (!residual.is_zero()) {
        report.verdict = Verdict::fail;
        report.witness = Witness{part.name, m, std::move(residual)};
        return report;
      }
    }
  }
  report.verdict = Verdict::pass;
  return report;
}

}  // namespace qlab
