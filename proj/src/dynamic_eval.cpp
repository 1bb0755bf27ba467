#include "cdrbac/dynamic_eval.hpp"

#include "cdrbac/errors.hpp"
#include "population.hpp"

namespace cdrbac {
namespace {

using internal::intersect_roles;
using internal::make_verdict;
using internal::Population;

Population activation_population(const RbacSnapshot& snap, const std::set<RoleId>& rs,
                                 Scope scope) {
  for (const auto& r : rs) {
    if (!snap.state().roles.count(r)) throw LookupError("unknown role '" + r.str() + "'");
  }
  Population pop;
  if (scope == Scope::Session) {
    pop.kind = EntityKind::Session;
    for (const auto& [s, rec] : snap.state().sessions)
      pop.members.emplace_back(s.str(), intersect_roles(rec.active, rs));
  } else {
    pop.kind = EntityKind::User;
    for (const auto& u : snap.state().users)
      pop.members.emplace_back(u.str(), intersect_roles(snap.activated_roles(u), rs));
  }
  return pop;
}

}  // namespace

Verdict eval_dsd(const RbacSnapshot& snap, const std::string& id, const Dsd& c) {
  Verdict v = make_verdict(id, Constraint{id, c});
  for (const auto& [entity, matched] : activation_population(snap, c.roles, Scope::Session).members) {
    if (matched.size() < c.n) continue;
    v.satisfied = false;
    v.witnesses.push_back({id, EntityRef{EntityKind::Session, entity}, matched, TooManyRoles{}});
  }
  return v;
}

Verdict eval_dcd1(const RbacSnapshot& snap, const std::string& id, const Dcd& c) {
  Verdict v = make_verdict(id, Constraint{id, c});
  internal::check_type1(activation_population(snap, c.roles, c.scope), c.n, v);
  return v;
}

Verdict eval_dcd2(const RbacSnapshot& snap, const std::string& id, const Dcd& c) {
  Verdict v = make_verdict(id, Constraint{id, c});
  internal::check_type2(activation_population(snap, c.roles, c.scope), c.roles, c.n, v);
  return v;
}

Verdict eval_dcd3(const RbacSnapshot& snap, const std::string& id, const Dcd& c,
                  const SolverLimits& limits) {
  Verdict v = make_verdict(id, Constraint{id, c});
  internal::check_type3(activation_population(snap, c.roles, c.scope), c.roles, c.n, limits, v);
  return v;
}

Verdict eval_dcd(const RbacSnapshot& snap, const std::string& id, const Dcd& c,
                 const SolverLimits& limits) {
  switch (c.type) {
    case CdType::I: return eval_dcd1(snap, id, c);
    case CdType::II: return eval_dcd2(snap, id, c);
    case CdType::III: return eval_dcd3(snap, id, c, limits);
  }
  throw UsageError("unknown DCD type");
}

}  // namespace cdrbac
