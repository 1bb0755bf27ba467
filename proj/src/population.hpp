#pragma once

// Shared machinery for the Type I/II/III checks, which have the same shape
// whether the entities are users (static, DCD-U) or sessions (DCD-S).

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cdrbac/subset_solver.hpp"
#include "cdrbac/verdict.hpp"

namespace cdrbac::internal {

struct Population {
  EntityKind kind = EntityKind::User;
  /// Entity id and its matched roles (already intersected with rs), in id order.
  std::vector<std::pair<std::string, std::set<RoleId>>> members;
};

Verdict make_verdict(const std::string& id, const Constraint& c);

/// Every member holds zero or more than n matched roles.
void check_type1(const Population& pop, std::size_t n, Verdict& v);

/// Every member with 0 < |matched| <= n has a helper set among the others.
void check_type2(const Population& pop, const std::set<RoleId>& rs, std::size_t n, Verdict& v);

/// The population partitions into zero groups and minimal groups past n.
void check_type3(const Population& pop, const std::set<RoleId>& rs, std::size_t n,
                 const SolverLimits& limits, Verdict& v);

template <class Container>
std::set<RoleId> intersect_roles(const Container& roles, const std::set<RoleId>& rs) {
  std::set<RoleId> out;
  for (const auto& r : roles) {
    if (rs.count(r)) out.insert(r);
  }
  return out;
}

}  // namespace cdrbac::internal
