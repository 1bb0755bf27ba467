#include "cdrbac/evaluate.hpp"

#include "cdrbac/detail/overloaded.hpp"
#include "cdrbac/dynamic_eval.hpp"
#include "cdrbac/errors.hpp"
#include "cdrbac/static_eval.hpp"

namespace cdrbac {

Verdict evaluate(const RbacSnapshot& snap, const Constraint& c, const SolverLimits& limits) {
  try {
    return std::visit(
        detail::overloaded{
            [&](const Ssd& b) { return eval_ssd(snap, c.id, b); },
            [&](const Dsd& b) { return eval_dsd(snap, c.id, b); },
            [&](const Scd& b) { return eval_scd(snap, c.id, b, limits); },
            [&](const ScdItems& b) { return eval_scd_items(snap, c.id, b); },
            [&](const Dcd& b) { return eval_dcd(snap, c.id, b, limits); },
        },
        c.body);
  } catch (const CapacityError& e) {
    Verdict v;
    v.constraint_id = c.id;
    v.family = family_keyword(c);
    v.satisfied = false;
    v.undecided = true;
    v.note = std::string("undecided: over capacity: ") + e.what();
    return v;
  }
}

std::vector<Verdict> evaluate_all(const RbacSnapshot& snap, const std::vector<Constraint>& cs,
                                  const SolverLimits& limits) {
  std::vector<Verdict> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(evaluate(snap, c, limits));
  return out;
}

}  // namespace cdrbac
