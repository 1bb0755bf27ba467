#include "cdrbac/static_eval.hpp"

#include <algorithm>
#include <iterator>

#include "cdrbac/errors.hpp"
#include "population.hpp"

namespace cdrbac {
namespace {

using internal::intersect_roles;
using internal::make_verdict;
using internal::Population;

void require_roles(const RbacSnapshot& snap, const std::set<RoleId>& rs) {
  for (const auto& r : rs) {
    if (!snap.state().roles.count(r)) throw LookupError("unknown role '" + r.str() + "'");
  }
}

Population user_population(const RbacSnapshot& snap, const std::set<RoleId>& rs, RoleView view) {
  require_roles(snap, rs);
  Population pop;
  pop.kind = EntityKind::User;
  for (const auto& u : snap.state().users)
    pop.members.emplace_back(u.str(), intersect_roles(snap.user_roles(u, view), rs));
  return pop;
}

template <class T>
void combine_into(std::set<T>& acc, const std::set<T>& next, ItemMode mode) {
  if (mode == ItemMode::Union) {
    acc.insert(next.begin(), next.end());
    return;
  }
  std::set<T> kept;
  std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(),
                        std::inserter(kept, kept.end()));
  acc = std::move(kept);
}

template <class T, class Project>
std::set<T> combine(const std::set<RoleId>& matched, ItemMode mode, Project project) {
  std::set<T> acc;
  bool first = true;
  for (const auto& r : matched) {
    if (first) {
      acc = project(r);
      first = false;
    } else {
      combine_into(acc, project(r), mode);
    }
  }
  return acc;
}

template <class T>
std::set<T> missing_from(const ItemRequirement<T>& req, const std::set<T>& available) {
  std::set<T> out;
  if (!req.is_named()) return out;
  std::set_difference(req.items().begin(), req.items().end(), available.begin(), available.end(),
                      std::inserter(out, out.end()));
  return out;
}

// Records a shortfall for a single-set requirement and returns whether it is met.
template <class T>
bool check_single(const ItemRequirement<T>& req, const std::set<T>& available,
                  std::set<T>& missing, ItemShortfall& out) {
  if (req.met_by(available)) return true;
  if (req.is_named())
    missing = missing_from(req, available);
  else
    out.count_short = std::pair{req.min_count(), available.size()};
  return false;
}

}  // namespace

Verdict eval_ssd(const RbacSnapshot& snap, const std::string& id, const Ssd& c) {
  Verdict v = make_verdict(id, Constraint{id, c});
  for (const auto& [entity, matched] : user_population(snap, c.roles, c.view).members) {
    if (matched.size() < c.n) continue;
    v.satisfied = false;
    v.witnesses.push_back({id, EntityRef{EntityKind::User, entity}, matched, TooManyRoles{}});
  }
  return v;
}

Verdict eval_scd1(const RbacSnapshot& snap, const std::string& id, const Scd& c) {
  Verdict v = make_verdict(id, Constraint{id, c});
  internal::check_type1(user_population(snap, c.roles, c.view), c.n, v);
  return v;
}

Verdict eval_scd2(const RbacSnapshot& snap, const std::string& id, const Scd& c) {
  Verdict v = make_verdict(id, Constraint{id, c});
  internal::check_type2(user_population(snap, c.roles, c.view), c.roles, c.n, v);
  return v;
}

Verdict eval_scd3(const RbacSnapshot& snap, const std::string& id, const Scd& c,
                  const SolverLimits& limits) {
  Verdict v = make_verdict(id, Constraint{id, c});
  internal::check_type3(user_population(snap, c.roles, c.view), c.roles, c.n, limits, v);
  return v;
}

Verdict eval_scd(const RbacSnapshot& snap, const std::string& id, const Scd& c,
                 const SolverLimits& limits) {
  switch (c.type) {
    case CdType::I: return eval_scd1(snap, id, c);
    case CdType::II: return eval_scd2(snap, id, c);
    case CdType::III: return eval_scd3(snap, id, c, limits);
  }
  throw UsageError("unknown SCD type");
}

ItemAssessment assess_items(const RbacSnapshot& snap, const ScdItems& c,
                            const std::set<RoleId>& matched) {
  if (matched.empty()) throw UsageError("assess_items needs at least one matched role");
  ItemAssessment a;
  ItemShortfall& out = a.items;
  out.mode = c.mode;
  out.kind = c.kind;
  auto items = [&](const RoleId& r) -> const RoleItems& { return snap.role_items(r, c.view); };

  switch (c.kind) {
    case ItemKind::Obs:
      out.objects = combine<ObjectId>(matched, c.mode, [&](const RoleId& r) { return items(r).obs; });
      a.met = check_single(*c.obs, out.objects, out.missing_objects, out);
      break;
    case ItemKind::Ops:
      out.operations =
          combine<OperationId>(matched, c.mode, [&](const RoleId& r) { return items(r).ops; });
      a.met = check_single(*c.ops, out.operations, out.missing_operations, out);
      break;
    case ItemKind::Prms:
      out.permissions =
          combine<Permission>(matched, c.mode, [&](const RoleId& r) { return items(r).prms; });
      a.met = check_single(*c.prms, out.permissions, out.missing_permissions, out);
      break;
    case ItemKind::ObsOps: {
      out.objects = combine<ObjectId>(matched, c.mode, [&](const RoleId& r) { return items(r).obs; });
      const bool objects_ok = check_single(*c.obs, out.objects, out.missing_objects, out);

      // Named objects: every named object needs the operations. Count form:
      // at least obn of the combined objects must carry them.
      const std::set<ObjectId>& examined = c.obs->is_named() ? c.obs->items() : out.objects;
      std::size_t good = 0;
      for (const auto& ob : examined) {
        auto ops = combine<OperationId>(
            matched, c.mode, [&](const RoleId& r) { return snap.role_ops_on_ob(r, ob, c.view); });
        if (c.ops->met_by(ops)) {
          ++good;
        } else {
          out.missing_ops_on_object[ob] = missing_from(*c.ops, ops);
        }
        out.ops_on_object[ob] = std::move(ops);
      }
      bool ops_ok;
      if (c.obs->is_named()) {
        ops_ok = out.missing_ops_on_object.empty();
      } else {
        ops_ok = good >= c.obs->min_count();
        if (!ops_ok) out.count_short = std::pair{c.obs->min_count(), good};
      }
      a.met = objects_ok && ops_ok;
      break;
    }
  }
  return a;
}

Verdict eval_scd_items(const RbacSnapshot& snap, const std::string& id, const ScdItems& c) {
  Verdict v = make_verdict(id, Constraint{id, c});
  for (const auto& [entity, matched] : user_population(snap, c.roles, c.view).members) {
    if (matched.empty()) continue;
    EntityRef who{EntityKind::User, entity};
    if (matched.size() <= c.n) {
      v.satisfied = false;
      v.witnesses.push_back({id, who, matched, NotEnoughRoles{}});
      continue;
    }
    ItemAssessment a = assess_items(snap, c, matched);
    if (a.met) continue;
    v.satisfied = false;
    v.witnesses.push_back({id, who, matched, MissingItems{std::move(a.items)}});
  }
  return v;
}

}  // namespace cdrbac
