#include "cdrbac/subset_solver.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

#include "cdrbac/errors.hpp"

namespace cdrbac {
namespace {

void require_role_capacity(std::size_t count) {
  if (count > kMaxSolverRoles)
    throw CapacityError("constraint has " + std::to_string(count) +
                        " dependent roles; the exact solver supports at most " +
                        std::to_string(kMaxSolverRoles));
}

std::size_t popcount(RoleMask m) { return static_cast<std::size_t>(std::popcount(m)); }

// Dense membership for small role universes, hashing otherwise.
class MaskSet {
 public:
  explicit MaskSet(std::size_t role_count) {
    if (role_count <= 24) dense_.assign(std::size_t{1} << role_count, false);
  }
  bool insert(RoleMask m) {
    if (!dense_.empty()) {
      if (dense_[m]) return false;
      dense_[m] = true;
      return true;
    }
    return sparse_.insert(m).second;
  }

 private:
  std::vector<bool> dense_;
  std::unordered_set<RoleMask> sparse_;
};

class PartitionSearcher {
 public:
  PartitionSearcher(std::vector<RoleMask> masks, std::size_t n)
      : masks_(std::move(masks)), n_(n) {
    for (auto m : masks_) max_contrib_ = std::max(max_contrib_, popcount(m));
  }

  bool solve(std::uint64_t remaining) {
    if (remaining == 0) return true;
    if (failed_.count(remaining)) return false;
    const auto first = static_cast<std::size_t>(std::countr_zero(remaining));
    group_.assign(1, first);
    if (extend(remaining, masks_[first], first + 1)) return true;
    failed_.insert(remaining);
    return false;
  }

  const std::vector<std::vector<std::size_t>>& chosen() const { return chosen_; }
  std::size_t groups_checked() const { return checked_; }

 private:
  // Every member must own a role no other member has; otherwise dropping it
  // leaves the union unchanged and the group can never become minimal.
  bool all_essential(const std::vector<std::size_t>& group) const {
    for (std::size_t i = 0; i < group.size(); ++i) {
      RoleMask others = 0;
      for (std::size_t j = 0; j < group.size(); ++j) {
        if (j != i) others |= masks_[group[j]];
      }
      if ((masks_[group[i]] & ~others) == 0) return false;
    }
    return true;
  }

  bool extend(std::uint64_t remaining, RoleMask acc, std::size_t next) {
    if (popcount(acc) > n_) {
      // Adding members to a group already past n can only make it non-minimal.
      ++checked_;
      if (!is_minimal(group_)) return false;
      std::vector<std::size_t> group = group_;
      std::uint64_t rest = remaining;
      for (auto e : group) rest &= ~(std::uint64_t{1} << e);
      chosen_.push_back(group);
      if (solve(rest)) return true;
      chosen_.pop_back();
      group_ = std::move(group);
      return false;
    }
    for (std::size_t pos = next; pos < masks_.size(); ++pos) {
      if (!(remaining >> pos & 1u)) continue;
      const RoleMask grown = acc | masks_[pos];
      if (grown == acc) continue;
      if (popcount(grown) > n_ + max_contrib_) continue;
      group_.push_back(pos);
      if (all_essential(group_) && extend(remaining, grown, pos + 1)) return true;
      group_.pop_back();
    }
    return false;
  }

  bool is_minimal(const std::vector<std::size_t>& group) const {
    for (std::size_t skip = 0; skip < group.size(); ++skip) {
      RoleMask u = 0;
      for (std::size_t j = 0; j < group.size(); ++j) {
        if (j != skip) u |= masks_[group[j]];
      }
      if (popcount(u) > n_) return false;
    }
    return true;
  }

  std::vector<RoleMask> masks_;
  std::size_t n_;
  std::size_t max_contrib_ = 0;
  std::size_t checked_ = 0;
  std::vector<std::size_t> group_;
  std::vector<std::vector<std::size_t>> chosen_;
  std::unordered_set<std::uint64_t> failed_;
};

}  // namespace

ContributionVector::ContributionVector(
    const std::set<RoleId>& rs,
    const std::vector<std::pair<std::string, std::set<RoleId>>>& entity_roles) {
  require_role_capacity(rs.size());
  roles_.assign(rs.begin(), rs.end());
  entities_.reserve(entity_roles.size());
  masks_.reserve(entity_roles.size());
  for (const auto& [name, roles] : entity_roles) {
    entities_.push_back(name);
    masks_.push_back(encode(roles));
  }
}

ContributionVector ContributionVector::from_masks(std::vector<std::string> entities,
                                                  std::vector<RoleMask> masks,
                                                  std::size_t role_count) {
  require_role_capacity(role_count);
  if (entities.size() != masks.size())
    throw UsageError("entity and mask lists differ in length");
  ContributionVector cv;
  // Zero-padded so the sorted order of names matches bit order.
  for (std::size_t i = 0; i < role_count; ++i)
    cv.roles_.emplace_back((i < 10 ? "r0" : "r") + std::to_string(i));
  const RoleMask universe =
      role_count == 32 ? ~RoleMask{0} : static_cast<RoleMask>((RoleMask{1} << role_count) - 1);
  for (auto m : masks) {
    if (m & ~universe) throw UsageError("mask uses bits beyond role_count");
  }
  cv.entities_ = std::move(entities);
  cv.masks_ = std::move(masks);
  return cv;
}

std::optional<std::size_t> ContributionVector::index_of(const std::string& entity) const {
  auto it = std::find(entities_.begin(), entities_.end(), entity);
  if (it == entities_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - entities_.begin());
}

RoleMask ContributionVector::encode(const std::set<RoleId>& roles) const {
  RoleMask m = 0;
  for (std::size_t i = 0; i < roles_.size(); ++i) {
    if (roles.count(roles_[i])) m |= RoleMask{1} << i;
  }
  return m;
}

std::set<RoleId> ContributionVector::decode(RoleMask mask) const {
  std::set<RoleId> out;
  for (std::size_t i = 0; i < roles_.size(); ++i) {
    if (mask >> i & 1u) out.insert(roles_[i]);
  }
  return out;
}

std::vector<RoleMask> reachable_unions(const ContributionVector& cv,
                                       std::optional<std::size_t> exclude, std::size_t cap) {
  MaskSet seen(cv.role_count());
  std::vector<RoleMask> reach{0};
  seen.insert(0);
  // One pass per entity suffices: a subset's union is built by adding its
  // members in index order, and every prefix union is a subset of the final
  // one, so it never exceeds cap earlier.
  for (std::size_t e = 0; e < cv.size(); ++e) {
    if (exclude && *exclude == e) continue;
    const RoleMask c = cv.contribution(e);
    if (c == 0) continue;
    const std::size_t before = reach.size();
    for (std::size_t i = 0; i < before; ++i) {
      const RoleMask u = reach[i] | c;
      if (popcount(u) <= cap && seen.insert(u)) reach.push_back(u);
    }
  }
  std::sort(reach.begin(), reach.end());
  return reach;
}

bool has_helper_set(const ContributionVector& cv, std::size_t entity, std::size_t n) {
  const RoleMask own = cv.contribution(entity);
  for (RoleMask u : reachable_unions(cv, entity, n)) {
    if (popcount(u | own) > n) return true;
  }
  return false;
}

bool minimality_check(const std::vector<std::size_t>& group, const ContributionVector& cv,
                      std::size_t n) {
  if (group.empty()) throw UsageError("minimality_check needs a nonempty group");
  RoleMask all = 0;
  for (auto e : group) all |= cv.contribution(e);
  if (popcount(all) <= n) return false;
  for (std::size_t skip = 0; skip < group.size(); ++skip) {
    RoleMask u = 0;
    for (std::size_t j = 0; j < group.size(); ++j) {
      if (j != skip) u |= cv.contribution(group[j]);
    }
    if (popcount(u) > n) return false;
  }
  return true;
}

PartitionSearch find_partition(const ContributionVector& cv, std::size_t n,
                               const SolverLimits& limits) {
  std::vector<std::size_t> contributing;
  std::vector<std::string> zero;
  for (std::size_t e = 0; e < cv.size(); ++e) {
    if (cv.contribution(e) == 0)
      zero.push_back(cv.entities()[e]);
    else
      contributing.push_back(e);
  }
  const std::size_t limit = std::min(limits.max_entities, kMaxEntitiesCeiling);
  if (contributing.size() > limit)
    throw CapacityError("partition search over " + std::to_string(contributing.size()) +
                        " contributing entities exceeds the limit of " + std::to_string(limit));

  std::vector<RoleMask> masks;
  masks.reserve(contributing.size());
  for (auto e : contributing) masks.push_back(cv.contribution(e));

  PartitionSearcher searcher(std::move(masks), n);
  const std::uint64_t all = contributing.size() == 64
                                ? ~std::uint64_t{0}
                                : (std::uint64_t{1} << contributing.size()) - 1;
  PartitionSearch result;
  const bool found = searcher.solve(all);
  result.groups_checked = searcher.groups_checked();
  if (!found) return result;

  PartitionWitness w;
  for (const auto& g : searcher.chosen()) {
    std::vector<std::string> names;
    for (auto local : g) names.push_back(cv.entities()[contributing[local]]);
    w.groups.push_back(std::move(names));
  }
  if (!zero.empty()) w.zero_groups.push_back(std::move(zero));
  result.witness = std::move(w);
  return result;
}

}  // namespace cdrbac
