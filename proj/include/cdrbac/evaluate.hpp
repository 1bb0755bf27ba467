#pragma once

#include <vector>

#include "cdrbac/constraint.hpp"
#include "cdrbac/rbac.hpp"
#include "cdrbac/subset_solver.hpp"
#include "cdrbac/verdict.hpp"

namespace cdrbac {

/// Evaluates any constraint. A CapacityError from the exact solvers becomes
/// an undecided verdict carrying the reason in `note`.
Verdict evaluate(const RbacSnapshot& snap, const Constraint& c, const SolverLimits& limits = {});

/// One verdict per constraint, in the given order.
std::vector<Verdict> evaluate_all(const RbacSnapshot& snap, const std::vector<Constraint>& cs,
                                  const SolverLimits& limits = {});

}  // namespace cdrbac
