#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "cdrbac/diagnostic.hpp"
#include "cdrbac/ids.hpp"

namespace cdrbac {

struct SessionRecord {
  UserId owner;
  std::set<RoleId> active;

  friend bool operator==(const SessionRecord&, const SessionRecord&) = default;
};

/// Raw RBAC configuration: entity sets, UA, PA, direct seniority edges and
/// sessions. Plain data; build an RbacSnapshot to query it.
struct RbacState {
  std::set<UserId> users;
  std::set<RoleId> roles;
  std::set<ObjectId> objects;
  std::set<OperationId> operations;
  std::set<std::pair<UserId, RoleId>> ua;
  std::set<std::pair<Permission, RoleId>> pa;
  /// (senior, junior). Direct edges only; reflexivity is implicit.
  std::set<std::pair<RoleId, RoleId>> rh_edges;
  std::map<SessionId, SessionRecord> sessions;

  friend bool operator==(const RbacState&, const RbacState&) = default;
};

/// Direct: assigned roles and the role's own permissions.
/// Hierarchical: authorized roles and permissions inherited from juniors.
enum class RoleView { Direct, Hierarchical };

struct RhClosure {
  /// Reflexive-transitive downward closure: juniors_of[r] contains r.
  std::map<RoleId, std::set<RoleId>> juniors_of;
  std::map<RoleId, std::set<RoleId>> seniors_of;
};

struct RoleItems {
  std::set<Permission> prms;
  std::set<ObjectId> obs;
  std::set<OperationId> ops;

  friend bool operator==(const RoleItems&, const RoleItems&) = default;
};

/// Empty iff every structural invariant holds: references are declared,
/// RH is acyclic, and each session's active roles are assigned to its owner.
Diagnostics validate_state(const RbacState& state);

/// Throws StateError naming a cycle if rh_edges is cyclic.
RhClosure rh_closure(const RbacState& state);

/// Immutable, validated view of an RbacState with the hierarchy closure and
/// per-role item indexes precomputed. All queries throw LookupError for
/// undeclared ids.
class RbacSnapshot {
 public:
  /// Throws StateError if validate_state reports anything.
  explicit RbacSnapshot(RbacState state);

  const RbacState& state() const noexcept { return state_; }
  const RhClosure& closure() const noexcept { return closure_; }

  std::set<RoleId> assigned_roles(const UserId& u) const;
  std::set<RoleId> authorized_roles(const UserId& u) const;
  /// assigned_roles or authorized_roles depending on the view.
  std::set<RoleId> user_roles(const UserId& u, RoleView view) const;
  std::set<RoleId> activated_roles(const UserId& u) const;
  const std::set<RoleId>& session_roles(const SessionId& s) const;
  std::vector<SessionId> user_sessions(const UserId& u) const;

  const RoleItems& role_items(const RoleId& r, RoleView view) const;
  std::set<OperationId> role_ops_on_ob(const RoleId& r, const ObjectId& ob,
                                       RoleView view) const;

 private:
  void require_user(const UserId& u) const;
  void require_role(const RoleId& r) const;

  RbacState state_;
  RhClosure closure_;
  std::map<UserId, std::set<RoleId>> assigned_;
  std::map<RoleId, RoleItems> direct_items_;
  std::map<RoleId, RoleItems> hier_items_;
};

}  // namespace cdrbac
