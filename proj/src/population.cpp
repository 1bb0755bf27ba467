#include "population.hpp"

namespace cdrbac::internal {

Verdict make_verdict(const std::string& id, const Constraint& c) {
  Verdict v;
  v.constraint_id = id;
  v.family = family_keyword(c);
  v.satisfied = true;
  return v;
}

void check_type1(const Population& pop, std::size_t n, Verdict& v) {
  for (const auto& [entity, matched] : pop.members) {
    if (matched.empty() || matched.size() > n) continue;
    v.satisfied = false;
    v.witnesses.push_back({v.constraint_id, EntityRef{pop.kind, entity}, matched, NotEnoughRoles{}});
  }
}

void check_type2(const Population& pop, const std::set<RoleId>& rs, std::size_t n, Verdict& v) {
  const ContributionVector cv(rs, pop.members);
  for (std::size_t i = 0; i < pop.members.size(); ++i) {
    const auto& [entity, matched] = pop.members[i];
    if (matched.empty() || matched.size() > n) continue;
    if (has_helper_set(cv, i, n)) continue;
    v.satisfied = false;
    v.witnesses.push_back({v.constraint_id, EntityRef{pop.kind, entity}, matched, NoHelperSet{}});
  }
}

void check_type3(const Population& pop, const std::set<RoleId>& rs, std::size_t n,
                 const SolverLimits& limits, Verdict& v) {
  const ContributionVector cv(rs, pop.members);
  const PartitionSearch search = find_partition(cv, n, limits);
  std::set<RoleId> all;
  for (const auto& [entity, matched] : pop.members) all.insert(matched.begin(), matched.end());
  if (search.witness) {
    v.witnesses.push_back({v.constraint_id, std::nullopt, std::move(all),
                           SatisfyingPartition{search.witness->groups, search.witness->zero_groups}});
    return;
  }
  v.satisfied = false;
  v.witnesses.push_back({v.constraint_id, std::nullopt, std::move(all),
                         NoValidPartition{search.groups_checked}});
}

}  // namespace cdrbac::internal
