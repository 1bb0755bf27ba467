#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cdrbac/constraint.hpp"

namespace cdrbac {

enum class EntityKind { User, Session };

struct EntityRef {
  EntityKind kind = EntityKind::User;
  std::string id;
  friend bool operator==(const EntityRef&, const EntityRef&) = default;
};

/// The combined items of a set of matched roles (intersection for Common,
/// union for Union) together with what the requirement still lacks. Only the
/// fields relevant to the constraint's kind are populated.
struct ItemShortfall {
  ItemMode mode = ItemMode::Common;
  ItemKind kind = ItemKind::Obs;
  std::set<ObjectId> objects;
  std::set<OperationId> operations;
  std::set<Permission> permissions;
  /// ObsOps: combined operations on each examined object.
  std::map<ObjectId, std::set<OperationId>> ops_on_object;

  std::set<ObjectId> missing_objects;
  std::set<OperationId> missing_operations;
  std::set<Permission> missing_permissions;
  std::map<ObjectId, std::set<OperationId>> missing_ops_on_object;
  /// Count-form requirements that were not reached: required vs. available.
  std::optional<std::pair<std::size_t, std::size_t>> count_short;

  friend bool operator==(const ItemShortfall&, const ItemShortfall&) = default;
};

/// Separation of duty: too many conflicting roles.
struct TooManyRoles {
  friend bool operator==(const TooManyRoles&, const TooManyRoles&) = default;
};
/// Combination of duty: more than zero but not more than n dependent roles.
struct NotEnoughRoles {
  friend bool operator==(const NotEnoughRoles&, const NotEnoughRoles&) = default;
};
struct MissingItems {
  ItemShortfall items;
  friend bool operator==(const MissingItems&, const MissingItems&) = default;
};
struct NoHelperSet {
  friend bool operator==(const NoHelperSet&, const NoHelperSet&) = default;
};
struct NoValidPartition {
  std::size_t checked_count = 0;
  friend bool operator==(const NoValidPartition&, const NoValidPartition&) = default;
};
struct SatisfyingPartition {
  std::vector<std::vector<std::string>> groups;
  std::vector<std::vector<std::string>> zero_groups;
  friend bool operator==(const SatisfyingPartition&, const SatisfyingPartition&) = default;
};
using WitnessDetail = std::variant<TooManyRoles, NotEnoughRoles, MissingItems, NoHelperSet,
                                   NoValidPartition, SatisfyingPartition>;

struct Witness {
  std::string constraint_id;
  /// Absent for population-wide (Type III) witnesses.
  std::optional<EntityRef> entity;
  /// The entity's role set intersected with the constraint's roles; for
  /// Type III, the union over the whole population.
  std::set<RoleId> matched_roles;
  WitnessDetail detail;

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct Verdict {
  std::string constraint_id;
  std::string family;
  bool satisfied = true;
  /// Set when an exact solver refused the instance as over capacity; the
  /// verdict is then neither proven satisfied nor violated.
  bool undecided = false;
  std::string note;
  std::vector<Witness> witnesses;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Stable snake_case name of the detail alternative, e.g. "no_helper_set".
std::string detail_name(const WitnessDetail& d);

}  // namespace cdrbac
