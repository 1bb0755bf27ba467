#pragma once

#include <string>
#include <vector>

#include "cdrbac/policy_io.hpp"
#include "cdrbac/subset_solver.hpp"
#include "cdrbac/trace.hpp"
#include "cdrbac/verdict.hpp"

namespace cdrbac {

enum class ReportFormat { Text, Json };

/// Deterministic rendering of a check run. JSON layout:
///
///   { "policy": NAME,
///     "results": [ { "constraint": ID, "family": KEYWORD, "satisfied": BOOL,
///                    ["undecided": true, "note": TEXT,]
///                    "witnesses": [ { "entity": ID|null, "matched_roles": [...],
///                                     "detail": { "kind": NAME, ... } } ] } ],
///     "summary": { "total": N, "violated": M } }
///
/// Undecided verdicts are not counted as violated.
std::string emit_report(const std::vector<Verdict>& verdicts, ReportFormat format,
                        const std::string& policy_name);

/// Rendering of a trace replay: base-state results, then one entry per
/// transaction with its outcome and the violations it introduced.
std::string emit_trace_report(const ReplayResult& result, ReplayMode mode, ReportFormat format,
                              const std::string& policy_name);

/// Human-readable account of one constraint: parameters, each entity's
/// matched roles, combined items where relevant, and the verdict with its
/// witnesses. With `verify`, also compares against the reference oracle and
/// ends with "oracle: agree" or "oracle: DISAGREE ...". Throws LookupError
/// for an unknown constraint id.
std::string explain(const Policy& policy, const std::string& constraint_id, bool verify,
                    const SolverLimits& limits = {});

/// Whether the engine and the reference oracle reach the same verdict and
/// flag the same entities. Throws CapacityError if the oracle's bounds are
/// exceeded and propagates the engine's CapacityError.
bool oracle_agrees(const RbacState& state, const Constraint& c, const SolverLimits& limits = {});

}  // namespace cdrbac
