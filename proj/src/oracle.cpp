#include "cdrbac/oracle.hpp"

#include <functional>
#include <map>
#include <vector>

#include "cdrbac/errors.hpp"

namespace cdrbac::oracle {
namespace {

thread_local std::size_t g_partition_count = 0;

using Roles = std::set<RoleId>;

// (r, r') in RH*, reflexive-transitive, by naive fixpoint over the edge list.
class Hierarchy {
 public:
  explicit Hierarchy(const RbacState& s) {
    for (const auto& r : s.roles) below_[r].insert(r);
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& [senior, junior] : s.rh_edges) {
        for (auto& [r, set] : below_) {
          if (set.count(senior) && !set.count(junior)) {
            set.insert(junior);
            changed = true;
          }
        }
      }
    }
  }
  bool senior_or_equal(const RoleId& r, const RoleId& r2) const {
    auto it = below_.find(r);
    return it != below_.end() && it->second.count(r2);
  }

 private:
  std::map<RoleId, Roles> below_;
};

struct Model {
  const RbacState& s;
  Hierarchy rh;

  explicit Model(const RbacState& st) : s(st), rh(st) {}

  Roles assigned_roles(const UserId& u) const {
    Roles out;
    for (const auto& r : s.roles) {
      if (s.ua.count({u, r})) out.insert(r);
    }
    return out;
  }

  // {r | exists r': (r', r) in RH and (u, r') in UA}
  Roles authorized_roles(const UserId& u) const {
    Roles out;
    for (const auto& r : s.roles) {
      for (const auto& r2 : s.roles) {
        if (rh.senior_or_equal(r2, r) && s.ua.count({u, r2})) {
          out.insert(r);
          break;
        }
      }
    }
    return out;
  }

  Roles user_roles(const UserId& u, RoleView v) const {
    return v == RoleView::Direct ? assigned_roles(u) : authorized_roles(u);
  }

  Roles activated_roles(const UserId& u) const {
    Roles out;
    for (const auto& [sid, rec] : s.sessions) {
      if (rec.owner == u) out.insert(rec.active.begin(), rec.active.end());
    }
    return out;
  }

  // ((op, ob), r) in PA, or via a junior r' of r under the hierarchical view.
  bool grants(const RoleId& r, const OperationId& op, const ObjectId& ob, RoleView v) const {
    if (v == RoleView::Direct) return s.pa.count({Permission{op, ob}, r}) > 0;
    for (const auto& r2 : s.roles) {
      if (rh.senior_or_equal(r, r2) && s.pa.count({Permission{op, ob}, r2})) return true;
    }
    return false;
  }

  bool has_object(const RoleId& r, const ObjectId& ob, RoleView v) const {
    for (const auto& op : s.operations) {
      if (grants(r, op, ob, v)) return true;
    }
    return false;
  }

  bool has_operation(const RoleId& r, const OperationId& op, RoleView v) const {
    for (const auto& ob : s.objects) {
      if (grants(r, op, ob, v)) return true;
    }
    return false;
  }
};

std::size_t count_in(const Roles& roles, const Roles& rs) {
  std::size_t k = 0;
  for (const auto& r : roles) k += rs.count(r);
  return k;
}

// Combined over rss: "for all r in rss" (common) or "exists r in rss" (union).
template <class Pred>
bool combined(const Roles& rss, ItemMode mode, Pred pred) {
  for (const auto& r : rss) {
    const bool hit = pred(r);
    if (mode == ItemMode::Common && !hit) return false;
    if (mode == ItemMode::Union && hit) return true;
  }
  return mode == ItemMode::Common;
}

template <class T>
bool requirement_holds(const ItemRequirement<T>& req, const std::set<T>& have) {
  if (req.is_named()) {
    for (const auto& x : req.items()) {
      if (have.find(x) == have.end()) return false;
    }
    return true;
  }
  return req.min_count() <= have.size();
}

bool item_clause(const Model& m, const ScdItems& c, const Roles& rss) {
  const RbacState& s = m.s;
  auto rss_obs = [&] {
    std::set<ObjectId> out;
    for (const auto& ob : s.objects) {
      if (combined(rss, c.mode, [&](const RoleId& r) { return m.has_object(r, ob, c.view); }))
        out.insert(ob);
    }
    return out;
  };
  auto rss_ops_on = [&](const ObjectId& ob) {
    std::set<OperationId> out;
    for (const auto& op : s.operations) {
      if (combined(rss, c.mode, [&](const RoleId& r) { return m.grants(r, op, ob, c.view); }))
        out.insert(op);
    }
    return out;
  };

  switch (c.kind) {
    case ItemKind::Obs:
      return requirement_holds(*c.obs, rss_obs());
    case ItemKind::Ops: {
      std::set<OperationId> ops;
      for (const auto& op : s.operations) {
        if (combined(rss, c.mode, [&](const RoleId& r) { return m.has_operation(r, op, c.view); }))
          ops.insert(op);
      }
      return requirement_holds(*c.ops, ops);
    }
    case ItemKind::Prms: {
      std::set<Permission> prms;
      for (const auto& ob : s.objects) {
        for (const auto& op : s.operations) {
          if (combined(rss, c.mode, [&](const RoleId& r) { return m.grants(r, op, ob, c.view); }))
            prms.insert(Permission{op, ob});
        }
      }
      return requirement_holds(*c.prms, prms);
    }
    case ItemKind::ObsOps: {
      const auto obs = rss_obs();
      if (!requirement_holds(*c.obs, obs)) return false;
      if (c.obs->is_named()) {
        for (const auto& ob : c.obs->items()) {
          if (!requirement_holds(*c.ops, rss_ops_on(ob))) return false;
        }
        return true;
      }
      // exists W subset of rssobs, |W| >= obn, every ob in W meets the op requirement
      const std::vector<ObjectId> pool(obs.begin(), obs.end());
      if (pool.size() > kMaxWitnessObjects)
        throw CapacityError("oracle: too many combined objects to enumerate witness sets");
      for (std::uint32_t mask = 0; mask < (1u << pool.size()); ++mask) {
        std::size_t size = 0;
        bool all_ok = true;
        for (std::size_t i = 0; i < pool.size() && all_ok; ++i) {
          if (!(mask >> i & 1u)) continue;
          ++size;
          all_ok = requirement_holds(*c.ops, rss_ops_on(pool[i]));
        }
        if (all_ok && size >= c.obs->min_count()) return true;
      }
      return false;
    }
  }
  return false;
}

struct Entity {
  EntityRef ref;
  Roles roles;  // full role set, not yet intersected with rs
};

std::vector<Entity> population(const Model& m, const Constraint& c) {
  std::vector<Entity> out;
  auto users = [&](auto roles_of) {
    for (const auto& u : m.s.users) out.push_back({{EntityKind::User, u.str()}, roles_of(u)});
  };
  auto sessions = [&] {
    for (const auto& [sid, rec] : m.s.sessions)
      out.push_back({{EntityKind::Session, sid.str()}, rec.active});
  };
  if (const auto* b = std::get_if<Ssd>(&c.body)) {
    users([&](const UserId& u) { return m.user_roles(u, b->view); });
  } else if (std::holds_alternative<Dsd>(c.body)) {
    sessions();
  } else if (const auto* b = std::get_if<Scd>(&c.body)) {
    users([&](const UserId& u) { return m.user_roles(u, b->view); });
  } else if (const auto* b = std::get_if<ScdItems>(&c.body)) {
    users([&](const UserId& u) { return m.user_roles(u, b->view); });
  } else if (const auto* b = std::get_if<Dcd>(&c.body)) {
    if (b->scope == Scope::Session)
      sessions();
    else
      users([&](const UserId& u) { return m.activated_roles(u); });
  }
  return out;
}

std::size_t union_count(const std::vector<Entity>& pop, const std::vector<std::size_t>& members,
                        const Roles& rs) {
  Roles u;
  for (auto i : members) u.insert(pop[i].roles.begin(), pop[i].roles.end());
  return count_in(u, rs);
}

std::size_t union_count_mask(const std::vector<Entity>& pop, std::uint32_t mask, const Roles& rs) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (mask >> i & 1u) members.push_back(i);
  }
  return union_count(pop, members, rs);
}

// exists us subset of the population (u itself included in the enumeration)
bool helper_exists(const std::vector<Entity>& pop, std::size_t u, const Roles& rs, std::size_t n) {
  for (std::uint32_t us = 0; us < (1u << pop.size()); ++us) {
    if (union_count_mask(pop, us, rs) <= n &&
        union_count_mask(pop, us | (1u << u), rs) > n)
      return true;
  }
  return false;
}

bool block_ok(const std::vector<Entity>& pop, const std::vector<std::size_t>& block,
              const Roles& rs, std::size_t n) {
  const std::size_t total = union_count(pop, block, rs);
  if (total == 0) return true;
  if (total <= n) return false;
  for (std::size_t skip = 0; skip < block.size(); ++skip) {
    std::vector<std::size_t> uss;
    for (std::size_t j = 0; j < block.size(); ++j) {
      if (j != skip) uss.push_back(block[j]);
    }
    if (union_count(pop, uss, rs) > n) return false;
  }
  return true;
}

// Enumerates every set partition via restricted growth strings.
bool partition_exists(const std::vector<Entity>& pop, const Roles& rs, std::size_t n,
                      std::size_t& enumerated) {
  const std::size_t k = pop.size();
  enumerated = 0;
  if (k == 0) {
    enumerated = 1;
    return true;
  }
  std::vector<std::size_t> label(k, 0);
  std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t blocks) {
    if (i == k) {
      ++enumerated;
      std::vector<std::vector<std::size_t>> parts(blocks);
      for (std::size_t e = 0; e < k; ++e) parts[label[e]].push_back(e);
      for (const auto& b : parts) {
        if (!block_ok(pop, b, rs, n)) return false;
      }
      return true;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      label[i] = b;
      if (rec(i + 1, b == blocks ? blocks + 1 : blocks)) return true;
    }
    return false;
  };
  return rec(0, 0);
}

enum class Family { Sd, Type1, Type2, Type3, Items };

Family family_of(const Constraint& c) {
  if (std::holds_alternative<Ssd>(c.body) || std::holds_alternative<Dsd>(c.body)) return Family::Sd;
  if (std::holds_alternative<ScdItems>(c.body)) return Family::Items;
  CdType t = std::holds_alternative<Scd>(c.body) ? std::get<Scd>(c.body).type
                                                 : std::get<Dcd>(c.body).type;
  switch (t) {
    case CdType::I: return Family::Type1;
    case CdType::II: return Family::Type2;
    case CdType::III: return Family::Type3;
  }
  return Family::Type1;
}

void check_bounds(const std::vector<Entity>& pop, const Roles& rs) {
  if (pop.size() > kMaxPopulation)
    throw CapacityError("oracle: population of " + std::to_string(pop.size()) +
                        " exceeds enumeration bound " + std::to_string(kMaxPopulation));
  if (rs.size() > kMaxRoles)
    throw CapacityError("oracle: " + std::to_string(rs.size()) +
                        " roles exceed enumeration bound " + std::to_string(kMaxRoles));
}

Roles matched(const Entity& e, const Roles& rs) {
  Roles out;
  for (const auto& r : e.roles) {
    if (rs.count(r)) out.insert(r);
  }
  return out;
}

// Per-entity predicate for the families that quantify over single entities.
bool entity_ok(const Model& m, const Constraint& c, Family fam, const std::vector<Entity>& pop,
               std::size_t i) {
  const Roles& rs = constraint_roles(c);
  const std::size_t n = constraint_threshold(c);
  const std::size_t k = count_in(pop[i].roles, rs);
  switch (fam) {
    case Family::Sd: return k < n;
    case Family::Type1: return k == 0 || k > n;
    case Family::Type2: return !(0 < k && k <= n) || helper_exists(pop, i, rs, n);
    case Family::Items:
      return k == 0 || (k > n && item_clause(m, std::get<ScdItems>(c.body), matched(pop[i], rs)));
    case Family::Type3: break;
  }
  throw UsageError("Type III has no per-entity predicate");
}

}  // namespace

std::size_t last_partition_count() { return g_partition_count; }

Verdict oracle_eval(const RbacState& state, const Constraint& c) {
  const Model m(state);
  const auto pop = population(m, c);
  const Roles& rs = constraint_roles(c);
  check_bounds(pop, rs);

  Verdict v;
  v.constraint_id = c.id;
  v.family = family_keyword(c);
  v.satisfied = true;
  const Family fam = family_of(c);
  if (fam == Family::Type3) {
    std::size_t enumerated = 0;
    v.satisfied = partition_exists(pop, rs, constraint_threshold(c), enumerated);
    g_partition_count = enumerated;
    if (!v.satisfied) {
      Roles all;
      for (const auto& e : pop) {
        auto mm = matched(e, rs);
        all.insert(mm.begin(), mm.end());
      }
      v.witnesses.push_back({c.id, std::nullopt, all, NoValidPartition{enumerated}});
    }
    return v;
  }
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (entity_ok(m, c, fam, pop, i)) continue;
    v.satisfied = false;
    WitnessDetail d;
    switch (fam) {
      case Family::Sd: d = TooManyRoles{}; break;
      case Family::Type1: d = NotEnoughRoles{}; break;
      case Family::Type2: d = NoHelperSet{}; break;
      default: {
        const std::size_t k = count_in(pop[i].roles, rs);
        if (k <= constraint_threshold(c))
          d = NotEnoughRoles{};
        else {
          // Only the mode is reported; the item sets are the engine's business.
          MissingItems m;
          m.items.mode = std::get<ScdItems>(c.body).mode;
          m.items.kind = std::get<ScdItems>(c.body).kind;
          d = m;
        }
      }
    }
    v.witnesses.push_back({c.id, pop[i].ref, matched(pop[i], rs), d});
  }
  return v;
}

bool verify_witness(const RbacState& state, const Constraint& c, const Witness& w) {
  if (w.constraint_id != c.id)
    throw UsageError("witness belongs to constraint '" + w.constraint_id + "', not '" + c.id + "'");
  const Model m(state);
  const auto pop = population(m, c);
  const Roles& rs = constraint_roles(c);
  const std::size_t n = constraint_threshold(c);
  check_bounds(pop, rs);
  const Family fam = family_of(c);

  auto require = [&](bool fits) {
    if (!fits) throw UsageError("witness kind does not fit constraint family " + family_keyword(c));
  };

  if (const auto* part = std::get_if<SatisfyingPartition>(&w.detail)) {
    require(fam == Family::Type3);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < pop.size(); ++i) index[pop[i].ref.id] = i;
    std::vector<bool> seen(pop.size(), false);
    auto check_blocks = [&](const std::vector<std::vector<std::string>>& blocks, bool zero) {
      for (const auto& names : blocks) {
        if (names.empty()) return false;
        std::vector<std::size_t> block;
        for (const auto& name : names) {
          auto it = index.find(name);
          if (it == index.end() || seen[it->second]) return false;  // unknown or overlapping
          seen[it->second] = true;
          block.push_back(it->second);
        }
        if (zero ? union_count(pop, block, rs) != 0 : !block_ok(pop, block, rs, n)) return false;
      }
      return true;
    };
    if (!check_blocks(part->groups, false) || !check_blocks(part->zero_groups, true)) return false;
    for (bool b : seen) {
      if (!b) return false;  // not covering
    }
    return true;
  }
  if (std::holds_alternative<NoValidPartition>(w.detail)) {
    require(fam == Family::Type3);
    std::size_t enumerated = 0;
    return !partition_exists(pop, rs, n, enumerated);
  }

  // Per-entity witnesses.
  std::visit(
      [&](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, TooManyRoles>) require(fam == Family::Sd);
        if constexpr (std::is_same_v<D, NotEnoughRoles>)
          require(fam == Family::Type1 || fam == Family::Items);
        if constexpr (std::is_same_v<D, NoHelperSet>) require(fam == Family::Type2);
        if constexpr (std::is_same_v<D, MissingItems>) require(fam == Family::Items);
      },
      w.detail);
  if (!w.entity) throw UsageError("per-entity witness without an entity");
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (pop[i].ref.id != w.entity->id) continue;
    if (pop[i].ref.kind != w.entity->kind)
      throw UsageError("witness entity kind does not fit constraint family " + family_keyword(c));
    const Roles mm = matched(pop[i], rs);
    if (mm != w.matched_roles) return false;
    if (entity_ok(m, c, fam, pop, i)) return false;
    const std::size_t k = mm.size();
    if (std::holds_alternative<NotEnoughRoles>(w.detail)) return 0 < k && k <= n;
    if (std::holds_alternative<MissingItems>(w.detail)) return k > n;
    return true;
  }
  return false;
}

}  // namespace cdrbac::oracle
