#pragma once

#include <string>

#include "cdrbac/constraint.hpp"
#include "cdrbac/rbac.hpp"
#include "cdrbac/subset_solver.hpp"
#include "cdrbac/verdict.hpp"

namespace cdrbac {

// Dynamic constraints look only at the session layer: active roles per
// session, or their union per user.

Verdict eval_dsd(const RbacSnapshot& snap, const std::string& id, const Dsd& c);

Verdict eval_dcd1(const RbacSnapshot& snap, const std::string& id, const Dcd& c);
Verdict eval_dcd2(const RbacSnapshot& snap, const std::string& id, const Dcd& c);
Verdict eval_dcd3(const RbacSnapshot& snap, const std::string& id, const Dcd& c,
                  const SolverLimits& limits = {});

Verdict eval_dcd(const RbacSnapshot& snap, const std::string& id, const Dcd& c,
                 const SolverLimits& limits = {});

}  // namespace cdrbac
