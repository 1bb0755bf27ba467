#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cdrbac/ids.hpp"

namespace cdrbac {

/// Bit i stands for the i-th dependent role of a ContributionVector.
using RoleMask = std::uint32_t;

inline constexpr std::size_t kMaxSolverRoles = 32;
inline constexpr std::size_t kDefaultMaxEntities = 20;
/// Hard ceiling for SolverLimits::max_entities (the search state is a 64-bit set).
inline constexpr std::size_t kMaxEntitiesCeiling = 64;

struct SolverLimits {
  std::size_t max_entities = kDefaultMaxEntities;
};

/// Per-entity dependent roles, bit-encoded over a sorted indexing of rs.
class ContributionVector {
 public:
  /// Intersects each entity's roles with `rs`. Entities keep the given order.
  /// Throws CapacityError when |rs| exceeds kMaxSolverRoles.
  ContributionVector(const std::set<RoleId>& rs,
                     const std::vector<std::pair<std::string, std::set<RoleId>>>& entity_roles);

  /// Raw construction for tests and bindings: masks over `role_count` roles
  /// named "r00", "r01", ... Throws CapacityError past kMaxSolverRoles.
  static ContributionVector from_masks(std::vector<std::string> entities,
                                       std::vector<RoleMask> masks, std::size_t role_count);

  std::size_t size() const noexcept { return entities_.size(); }
  std::size_t role_count() const noexcept { return roles_.size(); }
  const std::vector<std::string>& entities() const noexcept { return entities_; }
  const std::vector<RoleMask>& masks() const noexcept { return masks_; }
  RoleMask contribution(std::size_t entity) const { return masks_.at(entity); }
  std::optional<std::size_t> index_of(const std::string& entity) const;

  RoleMask encode(const std::set<RoleId>& roles) const;
  std::set<RoleId> decode(RoleMask mask) const;

 private:
  ContributionVector() = default;

  std::vector<RoleId> roles_;
  std::vector<std::string> entities_;
  std::vector<RoleMask> masks_;
};

/// Every union U of contributions over subsets of the entities (excluding
/// `exclude`) with |U| <= cap, including the empty union. Sorted ascending.
std::vector<RoleMask> reachable_unions(const ContributionVector& cv,
                                       std::optional<std::size_t> exclude, std::size_t cap);

/// Whether some set of other entities has union <= n and, joined with
/// `entity`, exceeds n.
bool has_helper_set(const ContributionVector& cv, std::size_t entity, std::size_t n);

/// The group's union exceeds n and every (size-1)-subset's union is <= n.
/// `group` holds entity indices and must be nonempty.
bool minimality_check(const std::vector<std::size_t>& group, const ContributionVector& cv,
                      std::size_t n);

struct PartitionWitness {
  std::vector<std::vector<std::string>> groups;
  std::vector<std::vector<std::string>> zero_groups;
  friend bool operator==(const PartitionWitness&, const PartitionWitness&) = default;
};

struct PartitionSearch {
  std::optional<PartitionWitness> witness;
  /// Candidate groups whose union crossed n and were tested for minimality.
  std::size_t groups_checked = 0;
};

/// Exact search for a partition of all entities into zero-contribution
/// groups and minimal groups exceeding n. An empty `witness` is a proof that
/// none exists. Throws CapacityError when the contributing entities exceed
/// limits.max_entities.
PartitionSearch find_partition(const ContributionVector& cv, std::size_t n,
                               const SolverLimits& limits = {});

}  // namespace cdrbac
