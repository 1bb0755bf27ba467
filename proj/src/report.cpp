#include "cdrbac/report.hpp"

#include <sstream>

#include <json.hpp>

#include "cdrbac/detail/overloaded.hpp"
#include "cdrbac/errors.hpp"
#include "cdrbac/evaluate.hpp"
#include "cdrbac/oracle.hpp"
#include "cdrbac/static_eval.hpp"

namespace cdrbac {
namespace {

using Json = nlohmann::ordered_json;

template <class C>
Json id_array(const C& items) {
  Json out = Json::array();
  for (const auto& x : items) out.push_back(x.str());
  return out;
}

Json perm_array(const std::set<Permission>& items) {
  Json out = Json::array();
  for (const auto& p : items) out.push_back(Json::array({p.ob.str(), p.op.str()}));
  return out;
}

Json ops_map(const std::map<ObjectId, std::set<OperationId>>& m) {
  Json out = Json::object();
  for (const auto& [ob, ops] : m) out[ob.str()] = id_array(ops);
  return out;
}

Json groups_json(const std::vector<std::vector<std::string>>& groups) {
  Json out = Json::array();
  for (const auto& g : groups) out.push_back(g);
  return out;
}

const char* mode_name(ItemMode m) { return m == ItemMode::Common ? "common" : "union"; }

Json detail_json(const WitnessDetail& d) {
  Json out;
  out["kind"] = detail_name(d);
  std::visit(detail::overloaded{
                 [&](const MissingItems& m) {
                   const ItemShortfall& s = m.items;
                   switch (s.kind) {
                     case ItemKind::Obs:
                       out["objects"] = id_array(s.objects);
                       out["missing_objects"] = id_array(s.missing_objects);
                       break;
                     case ItemKind::Ops:
                       out["operations"] = id_array(s.operations);
                       out["missing_operations"] = id_array(s.missing_operations);
                       break;
                     case ItemKind::Prms:
                       out["permissions"] = perm_array(s.permissions);
                       out["missing_permissions"] = perm_array(s.missing_permissions);
                       break;
                     case ItemKind::ObsOps:
                       out["objects"] = id_array(s.objects);
                       out["missing_objects"] = id_array(s.missing_objects);
                       out["ops_on_object"] = ops_map(s.ops_on_object);
                       out["missing_ops_on_object"] = ops_map(s.missing_ops_on_object);
                       break;
                   }
                   if (s.count_short) {
                     out["required_count"] = s.count_short->first;
                     out["available_count"] = s.count_short->second;
                   }
                 },
                 [&](const NoValidPartition& p) { out["groupings_checked"] = p.checked_count; },
                 [&](const SatisfyingPartition& p) {
                   out["groups"] = groups_json(p.groups);
                   out["zero_groups"] = groups_json(p.zero_groups);
                 },
                 [](const auto&) {},
             },
             d);
  return out;
}

Json verdict_json(const Verdict& v) {
  Json out;
  out["constraint"] = v.constraint_id;
  out["family"] = v.family;
  out["satisfied"] = v.satisfied;
  if (v.undecided) {
    out["undecided"] = true;
    out["note"] = v.note;
  }
  Json ws = Json::array();
  for (const auto& w : v.witnesses) {
    Json j;
    j["entity"] = w.entity ? Json(w.entity->id) : Json(nullptr);
    j["matched_roles"] = id_array(w.matched_roles);
    j["detail"] = detail_json(w.detail);
    ws.push_back(std::move(j));
  }
  out["witnesses"] = std::move(ws);
  return out;
}

std::size_t violated_count(const std::vector<Verdict>& vs) {
  std::size_t n = 0;
  for (const auto& v : vs) n += !v.satisfied && !v.undecided;
  return n;
}

std::string braces(const std::vector<std::string>& items) {
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out + "}";
}

template <class C>
std::string braces_ids(const C& items) {
  std::vector<std::string> v;
  for (const auto& x : items) v.push_back(x.str());
  return braces(v);
}

std::string braces_perms(const std::set<Permission>& items) {
  std::vector<std::string> v;
  for (const auto& p : items) v.push_back("(" + p.ob.str() + "," + p.op.str() + ")");
  return braces(v);
}

std::string ops_map_text(const std::map<ObjectId, std::set<OperationId>>& m) {
  std::vector<std::string> v;
  for (const auto& [ob, ops] : m) v.push_back(ob.str() + ": " + braces_ids(ops));
  return braces(v);
}

std::string groups_text(const std::vector<std::vector<std::string>>& groups) {
  std::vector<std::string> v;
  for (const auto& g : groups) v.push_back(braces(g));
  return braces(v);
}

std::string shortfall_text(const ItemShortfall& s) {
  const std::string combined = s.mode == ItemMode::Common ? "common" : "combined";
  std::string out;
  switch (s.kind) {
    case ItemKind::Obs:
      out = combined + " objects " + braces_ids(s.objects) + ", missing " + braces_ids(s.missing_objects);
      break;
    case ItemKind::Ops:
      out = combined + " operations " + braces_ids(s.operations) + ", missing " +
            braces_ids(s.missing_operations);
      break;
    case ItemKind::Prms:
      out = combined + " permissions " + braces_perms(s.permissions) + ", missing " +
            braces_perms(s.missing_permissions);
      break;
    case ItemKind::ObsOps:
      out = combined + " objects " + braces_ids(s.objects) + ", missing " + braces_ids(s.missing_objects) +
            "; operations per object " + ops_map_text(s.ops_on_object);
      if (!s.missing_ops_on_object.empty()) out += ", short " + ops_map_text(s.missing_ops_on_object);
      break;
  }
  if (s.count_short)
    out += "; need " + std::to_string(s.count_short->first) + ", have " + std::to_string(s.count_short->second);
  return out;
}

std::string detail_text(const WitnessDetail& d) {
  return std::visit(
      detail::overloaded{
          [](const TooManyRoles&) -> std::string { return "holds too many conflicting roles"; },
          [](const NotEnoughRoles&) -> std::string { return "holds some but not more than n dependent roles"; },
          [](const MissingItems& m) -> std::string { return shortfall_text(m.items); },
          [](const NoHelperSet&) -> std::string { return "no helper set of other entities completes it"; },
          [](const NoValidPartition& p) -> std::string {
            return "no valid grouping (" + std::to_string(p.checked_count) + " checked)";
          },
          [](const SatisfyingPartition& p) -> std::string {
            std::string out = "groups " + groups_text(p.groups);
            if (!p.zero_groups.empty()) out += ", zero groups " + groups_text(p.zero_groups);
            return out;
          },
      },
      d);
}

void verdict_text(std::ostream& os, const Verdict& v) {
  os << v.constraint_id << " " << v.family << ": "
     << (v.undecided ? "undecided" : v.satisfied ? "satisfied" : "violated") << "\n";
  if (v.undecided) os << "  " << v.note << "\n";
  for (const auto& w : v.witnesses) {
    os << "  " << (w.entity ? (w.entity->kind == EntityKind::User ? "user " : "session ") + w.entity->id
                            : std::string("population"))
       << " matched " << braces_ids(w.matched_roles) << ": " << detail_name(w.detail) << ": "
       << detail_text(w.detail) << "\n";
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string emit_report(const std::vector<Verdict>& verdicts, ReportFormat format,
                        const std::string& policy_name) {
  if (format == ReportFormat::Json) {
    Json out;
    out["policy"] = policy_name;
    Json results = Json::array();
    for (const auto& v : verdicts) results.push_back(verdict_json(v));
    out["results"] = std::move(results);
    out["summary"] = Json{{"total", verdicts.size()}, {"violated", violated_count(verdicts)}};
    return dump(out);
  }
  std::ostringstream os;
  os << "policy " << policy_name << "\n";
  for (const auto& v : verdicts) verdict_text(os, v);
  os << "summary: " << verdicts.size() << " constraints, " << violated_count(verdicts) << " violated\n";
  return os.str();
}

std::string emit_trace_report(const ReplayResult& result, ReplayMode mode, ReportFormat format,
                              const std::string& policy_name) {
  const char* mode_text = mode == ReplayMode::Enforce ? "enforce" : "audit";
  std::size_t committed = 0, flagged = 0;
  for (const auto& t : result.transactions) {
    committed += t.outcome == TxnOutcome::Committed || t.outcome == TxnOutcome::CommittedWithViolations;
    flagged += t.outcome != TxnOutcome::Committed;
  }
  if (format == ReportFormat::Json) {
    Json out;
    out["policy"] = policy_name;
    out["mode"] = mode_text;
    Json base = Json::array();
    for (const auto& v : result.base_verdicts) base.push_back(verdict_json(v));
    out["base"] = std::move(base);
    Json txns = Json::array();
    for (const auto& t : result.transactions) {
      Json j;
      j["label"] = t.label;
      j["outcome"] = outcome_name(t.outcome);
      if (!t.error.empty()) j["error"] = t.error;
      Json vs = Json::array();
      for (const auto& v : t.violations) vs.push_back(verdict_json(v));
      j["violations"] = std::move(vs);
      txns.push_back(std::move(j));
    }
    out["transactions"] = std::move(txns);
    out["summary"] = Json{{"transactions", result.transactions.size()},
                          {"committed", committed},
                          {"flagged", flagged},
                          {"base_violated", violated_count(result.base_verdicts)}};
    return dump(out);
  }
  std::ostringstream os;
  os << "policy " << policy_name << " (" << mode_text << " mode)\n";
  os << "base state: " << violated_count(result.base_verdicts) << " of " << result.base_verdicts.size()
     << " constraints violated\n";
  for (const auto& v : result.base_verdicts) {
    if (!v.satisfied) verdict_text(os, v);
  }
  for (const auto& t : result.transactions) {
    os << "txn " << t.label << ": " << outcome_name(t.outcome) << "\n";
    if (!t.error.empty()) os << "  " << t.error << "\n";
    for (const auto& v : t.violations) {
      std::ostringstream inner;
      verdict_text(inner, v);
      std::istringstream lines(inner.str());
      for (std::string line; std::getline(lines, line);) os << "  " << line << "\n";
    }
  }
  os << "summary: " << result.transactions.size() << " transactions, " << committed << " committed, "
     << flagged << " flagged\n";
  return os.str();
}

bool oracle_agrees(const RbacState& state, const Constraint& c, const SolverLimits& limits) {
  const Verdict mine = evaluate(RbacSnapshot(state), c, limits);
  if (mine.undecided) throw CapacityError(mine.note);
  const Verdict theirs = oracle::oracle_eval(state, c);
  if (mine.satisfied != theirs.satisfied) return false;
  auto flagged = [](const Verdict& v) {
    std::set<std::string> out;
    for (const auto& w : v.witnesses) {
      if (w.entity && !std::holds_alternative<SatisfyingPartition>(w.detail)) out.insert(w.entity->id);
    }
    return out;
  };
  return flagged(mine) == flagged(theirs);
}

std::string explain(const Policy& policy, const std::string& constraint_id, bool verify,
                    const SolverLimits& limits) {
  const Constraint* found = nullptr;
  for (const auto& c : policy.constraints) {
    if (c.id == constraint_id) found = &c;
  }
  if (!found) throw LookupError("no constraint with id '" + constraint_id + "'");
  const Constraint& c = *found;
  const RbacSnapshot snap(policy.state);
  const auto& rs = constraint_roles(c);
  const std::size_t n = constraint_threshold(c);

  std::ostringstream os;
  os << write_constraint(c) << "\n";

  // Which entities the family looks at, and which roles count for each.
  EntityKind kind = EntityKind::User;
  std::vector<std::pair<std::string, std::set<RoleId>>> population;
  auto add = [&](const std::string& who, const std::set<RoleId>& roles) {
    std::set<RoleId> m;
    for (const auto& r : roles) {
      if (rs.count(r)) m.insert(r);
    }
    population.emplace_back(who, std::move(m));
  };
  auto by_users = [&](RoleView view) {
    for (const auto& u : policy.state.users) add(u.str(), snap.user_roles(u, view));
  };
  auto by_sessions = [&] {
    kind = EntityKind::Session;
    for (const auto& [sid, rec] : policy.state.sessions) add(sid.str(), rec.active);
  };
  std::visit(detail::overloaded{
                 [&](const Ssd& b) {
                   os << "at most " << n - 1 << " of the roles per user"
                      << (b.view == RoleView::Hierarchical ? " (authorized roles)" : "") << "\n";
                   by_users(b.view);
                 },
                 [&](const Dsd&) {
                   os << "at most " << n - 1 << " of the roles active per session\n";
                   by_sessions();
                 },
                 [&](const Scd& b) {
                   os << "each user holds none or more than " << n << " of the roles"
                      << (b.view == RoleView::Hierarchical ? " (authorized roles)" : "") << "\n";
                   by_users(b.view);
                 },
                 [&](const ScdItems& b) {
                   os << "each user holds none or more than " << n << " of the roles, whose "
                      << mode_name(b.mode) << " items must cover the requirement"
                      << (b.view == RoleView::Hierarchical ? " (authorized roles, inherited items)" : "")
                      << "\n";
                   by_users(b.view);
                 },
                 [&](const Dcd& b) {
                   if (b.scope == Scope::Session) {
                     os << "active roles per session, threshold " << n << "\n";
                     by_sessions();
                   } else {
                     os << "activated roles per user across sessions, threshold " << n << "\n";
                     for (const auto& u : policy.state.users) add(u.str(), snap.activated_roles(u));
                   }
                 },
             },
             c.body);

  const char* label = kind == EntityKind::User ? "user " : "session ";
  const auto* items = std::get_if<ScdItems>(&c.body);
  for (const auto& [who, matched] : population) {
    os << "  " << label << who << ": matched " << braces_ids(matched) << " (" << matched.size() << ")";
    if (items && matched.size() > n) os << "; " << shortfall_text(assess_items(snap, *items, matched).items);
    os << "\n";
  }

  const Verdict v = evaluate(snap, c, limits);
  os << "verdict: ";
  verdict_text(os, v);

  if (verify) {
    try {
      os << (oracle_agrees(policy.state, c, limits) ? "oracle: agree\n"
                                                    : "oracle: DISAGREE (engine and reference differ)\n");
    } catch (const CapacityError& e) {
      os << "oracle: skipped (" << e.what() << ")\n";
    }
  }
  return os.str();
}

}  // namespace cdrbac
