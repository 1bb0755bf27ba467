#pragma once

#include <set>
#include <string>

#include "cdrbac/constraint.hpp"
#include "cdrbac/rbac.hpp"
#include "cdrbac/subset_solver.hpp"
#include "cdrbac/verdict.hpp"

namespace cdrbac {

// Static constraints are evaluated per user, in user-id order. Roles outside
// the snapshot raise LookupError; the Type II/III solvers raise CapacityError.

Verdict eval_ssd(const RbacSnapshot& snap, const std::string& id, const Ssd& c);

Verdict eval_scd1(const RbacSnapshot& snap, const std::string& id, const Scd& c);
Verdict eval_scd2(const RbacSnapshot& snap, const std::string& id, const Scd& c);
Verdict eval_scd3(const RbacSnapshot& snap, const std::string& id, const Scd& c,
                  const SolverLimits& limits = {});

/// Dispatches on c.type.
Verdict eval_scd(const RbacSnapshot& snap, const std::string& id, const Scd& c,
                 const SolverLimits& limits = {});

struct ItemAssessment {
  bool met = false;
  ItemShortfall items;
};

/// Combines the item sets of `matched` (intersection or union per c.mode)
/// and checks them against c's requirements. `matched` must be nonempty.
ItemAssessment assess_items(const RbacSnapshot& snap, const ScdItems& c,
                            const std::set<RoleId>& matched);

/// Common and union item constraints; dispatches on c.mode.
Verdict eval_scd_items(const RbacSnapshot& snap, const std::string& id, const ScdItems& c);

}  // namespace cdrbac
