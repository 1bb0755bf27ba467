#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cdrbac/diagnostic.hpp"
#include "cdrbac/policy_io.hpp"
#include "cdrbac/rbac.hpp"
#include "cdrbac/subset_solver.hpp"
#include "cdrbac/verdict.hpp"

namespace cdrbac {

namespace event {
struct Assign { UserId user; RoleId role; friend bool operator==(const Assign&, const Assign&) = default; };
/// Also deactivates the role in the user's sessions.
struct Deassign { UserId user; RoleId role; friend bool operator==(const Deassign&, const Deassign&) = default; };
struct Grant { RoleId role; Permission perm; friend bool operator==(const Grant&, const Grant&) = default; };
struct Revoke { RoleId role; Permission perm; friend bool operator==(const Revoke&, const Revoke&) = default; };
struct Inherit { RoleId senior; RoleId junior; friend bool operator==(const Inherit&, const Inherit&) = default; };
struct Uninherit { RoleId senior; RoleId junior; friend bool operator==(const Uninherit&, const Uninherit&) = default; };
struct CreateSession { SessionId session; UserId user; friend bool operator==(const CreateSession&, const CreateSession&) = default; };
struct EndSession { SessionId session; friend bool operator==(const EndSession&, const EndSession&) = default; };
struct Activate { SessionId session; RoleId role; friend bool operator==(const Activate&, const Activate&) = default; };
struct Deactivate { SessionId session; RoleId role; friend bool operator==(const Deactivate&, const Deactivate&) = default; };
}  // namespace event

using TraceEvent = std::variant<event::Assign, event::Deassign, event::Grant, event::Revoke,
                                event::Inherit, event::Uninherit, event::CreateSession,
                                event::EndSession, event::Activate, event::Deactivate>;

struct Transaction {
  std::string label;
  std::vector<TraceEvent> events;
  std::size_t line = 0;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

/// Applies one event in place. Throws LookupError for undeclared users, roles,
/// objects or operations and StateError for events that do not fit the
/// current state (no-op edits, hierarchy cycles, activating a role the
/// session owner is not assigned). `state` is unchanged when it throws.
void apply_event(RbacState& state, const TraceEvent& e);

struct TraceParse {
  std::optional<std::vector<Transaction>> transactions;
  Diagnostics diagnostics;

  bool ok() const noexcept { return transactions.has_value(); }
};

/// Parses `txn LABEL { event... }` blocks. Events are
///
///   assign U R | deassign U R | grant R OP OB | revoke R OP OB
///   inherit SENIOR JUNIOR | uninherit SENIOR JUNIOR
///   create_session S U | end_session S | activate S R | deactivate S R
///
/// optionally separated by `;`. All transactions are simulated in order on
/// `base` so every event is checked against the state it would meet.
TraceParse parse_trace(std::string_view text, const RbacState& base);

enum class ReplayMode { Enforce, Audit };

enum class TxnOutcome {
  Committed,
  /// Enforce mode: the commit check found a new violation.
  RolledBack,
  /// Audit mode: the commit check found a new violation; kept anyway.
  CommittedWithViolations,
  /// An event could not be applied (e.g. it relied on a rolled-back edit).
  Rejected,
};

struct TxnResult {
  std::string label;
  TxnOutcome outcome = TxnOutcome::Committed;
  /// Verdicts at commit that are violated or undecided with a witness not
  /// present before the transaction; only those witnesses are kept.
  std::vector<Verdict> violations;
  std::string error;
};

struct ReplayResult {
  /// All constraints on the base state.
  std::vector<Verdict> base_verdicts;
  std::vector<TxnResult> transactions;
  RbacState final_state;

  bool any_violation() const;
  bool any_undecided() const;
};

/// Replays transactions on the policy's state, checking every constraint at
/// each commit.
ReplayResult replay(const Policy& policy, const std::vector<Transaction>& txns, ReplayMode mode,
                    const SolverLimits& limits = {});

const char* outcome_name(TxnOutcome o);

}  // namespace cdrbac
