#include "cdrbac/trace.hpp"

#include <map>
#include <set>
#include <tuple>

#include "cdrbac/detail/overloaded.hpp"
#include "cdrbac/errors.hpp"
#include "cdrbac/evaluate.hpp"
#include "lexer.hpp"

namespace cdrbac {
namespace {

using internal::Tok;
using internal::Token;

void need_user(const RbacState& s, const UserId& u) {
  if (!s.users.count(u)) throw LookupError("unknown user '" + u.str() + "'");
}
void need_role(const RbacState& s, const RoleId& r) {
  if (!s.roles.count(r)) throw LookupError("unknown role '" + r.str() + "'");
}
void need_perm(const RbacState& s, const Permission& p) {
  if (!s.operations.count(p.op)) throw LookupError("unknown operation '" + p.op.str() + "'");
  if (!s.objects.count(p.ob)) throw LookupError("unknown object '" + p.ob.str() + "'");
}
SessionRecord& need_session(RbacState& s, const SessionId& sid) {
  auto it = s.sessions.find(sid);
  if (it == s.sessions.end()) throw LookupError("unknown session '" + sid.str() + "'");
  return it->second;
}

bool reaches(const RbacState& s, const RoleId& from, const RoleId& to) {
  std::vector<RoleId> stack{from};
  std::set<RoleId> seen{from};
  while (!stack.empty()) {
    RoleId r = stack.back();
    stack.pop_back();
    if (r == to) return true;
    for (auto it = s.rh_edges.lower_bound({r, RoleId()}); it != s.rh_edges.end() && it->first == r; ++it) {
      if (seen.insert(it->second).second) stack.push_back(it->second);
    }
  }
  return false;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (true) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      return lines;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
}

// Witness identity for "is this violation new": who, which roles, what kind.
using WitnessKey = std::tuple<std::string, std::set<RoleId>, std::string>;

WitnessKey key_of(const Witness& w) {
  return {w.entity ? w.entity->id : std::string(), w.matched_roles, detail_name(w.detail)};
}

}  // namespace

void apply_event(RbacState& s, const TraceEvent& e) {
  std::visit(
      detail::overloaded{
          [&](const event::Assign& a) {
            need_user(s, a.user);
            need_role(s, a.role);
            if (s.ua.count({a.user, a.role}))
              throw StateError("user '" + a.user.str() + "' is already assigned '" + a.role.str() + "'");
            s.ua.emplace(a.user, a.role);
          },
          [&](const event::Deassign& a) {
            need_user(s, a.user);
            need_role(s, a.role);
            if (!s.ua.erase({a.user, a.role}))
              throw StateError("user '" + a.user.str() + "' is not assigned '" + a.role.str() + "'");
            for (auto& [sid, rec] : s.sessions) {
              if (rec.owner == a.user) rec.active.erase(a.role);
            }
          },
          [&](const event::Grant& g) {
            need_role(s, g.role);
            need_perm(s, g.perm);
            if (!s.pa.emplace(g.perm, g.role).second)
              throw StateError("role '" + g.role.str() + "' already holds (" + g.perm.op.str() + ", " +
                               g.perm.ob.str() + ")");
          },
          [&](const event::Revoke& g) {
            need_role(s, g.role);
            need_perm(s, g.perm);
            if (!s.pa.erase({g.perm, g.role}))
              throw StateError("role '" + g.role.str() + "' does not hold (" + g.perm.op.str() + ", " +
                               g.perm.ob.str() + ")");
          },
          [&](const event::Inherit& h) {
            need_role(s, h.senior);
            need_role(s, h.junior);
            if (h.senior == h.junior || reaches(s, h.junior, h.senior))
              throw StateError("inherit " + h.senior.str() + " " + h.junior.str() +
                               " would create a cycle in the role hierarchy");
            if (!s.rh_edges.emplace(h.senior, h.junior).second)
              throw StateError("'" + h.senior.str() + "' already inherits '" + h.junior.str() + "'");
          },
          [&](const event::Uninherit& h) {
            need_role(s, h.senior);
            need_role(s, h.junior);
            if (!s.rh_edges.erase({h.senior, h.junior}))
              throw StateError("'" + h.senior.str() + "' does not directly inherit '" + h.junior.str() + "'");
          },
          [&](const event::CreateSession& c) {
            need_user(s, c.user);
            if (s.sessions.count(c.session))
              throw StateError("session '" + c.session.str() + "' already exists");
            s.sessions.emplace(c.session, SessionRecord{c.user, {}});
          },
          [&](const event::EndSession& c) {
            need_session(s, c.session);
            s.sessions.erase(c.session);
          },
          [&](const event::Activate& a) {
            need_role(s, a.role);
            auto& rec = need_session(s, a.session);
            if (!s.ua.count({rec.owner, a.role}))
              throw StateError("cannot activate role '" + a.role.str() + "' in session '" + a.session.str() +
                               "': not assigned to owner '" + rec.owner.str() + "'");
            if (!rec.active.insert(a.role).second)
              throw StateError("role '" + a.role.str() + "' is already active in session '" +
                               a.session.str() + "'");
          },
          [&](const event::Deactivate& a) {
            need_role(s, a.role);
            auto& rec = need_session(s, a.session);
            if (!rec.active.erase(a.role))
              throw StateError("role '" + a.role.str() + "' is not active in session '" + a.session.str() + "'");
          },
      },
      e);
}

TraceParse parse_trace(std::string_view text, const RbacState& base) {
  const auto lines = split_lines(text);
  TraceParse out;
  auto report = [&](std::size_t line, std::size_t column, std::string message) {
    Diagnostic d;
    d.line = line;
    d.column = column;
    d.message = std::move(message);
    if (line >= 1 && line <= lines.size()) d.snippet = std::string(lines[line - 1]);
    out.diagnostics.push_back(std::move(d));
  };
  auto report_at = [&](const Token& t, std::string message) { report(t.line, t.column, std::move(message)); };

  internal::LexError err;
  const auto toks = internal::lex(text, 1, &err);
  if (!err.message.empty()) {
    report(err.line, err.column, err.message);
    return out;
  }

  static const std::map<std::string, std::size_t> arity{
      {"assign", 2},  {"deassign", 2},       {"grant", 3},       {"revoke", 3},
      {"inherit", 2}, {"uninherit", 2},      {"create_session", 2}, {"end_session", 1},
      {"activate", 2}, {"deactivate", 2}};

  RbacState sim = base;
  std::vector<Transaction> txns;
  std::map<std::string, std::size_t> labels;
  std::size_t i = 0;
  auto skip_block = [&] {
    while (toks[i].kind != Tok::End && toks[i].kind != Tok::RBrace) ++i;
    if (toks[i].kind == Tok::RBrace) ++i;
  };

  while (toks[i].kind != Tok::End) {
    if (toks[i].kind != Tok::Ident || toks[i].text != "txn") {
      report_at(toks[i], "expected 'txn LABEL {'");
      skip_block();
      continue;
    }
    Transaction txn;
    txn.line = toks[i].line;
    ++i;
    if (toks[i].kind != Tok::Ident) {
      report_at(toks[i], "expected a transaction label after 'txn'");
      skip_block();
      continue;
    }
    txn.label = toks[i].text;
    if (auto [it, inserted] = labels.emplace(txn.label, toks[i].line); !inserted)
      report_at(toks[i], "duplicate transaction label '" + txn.label + "' (first used on line " +
                             std::to_string(it->second) + ")");
    ++i;
    if (toks[i].kind != Tok::LBrace) {
      report_at(toks[i], "expected '{' after transaction label");
      skip_block();
      continue;
    }
    ++i;
    bool closed = false;
    while (toks[i].kind != Tok::End) {
      if (toks[i].kind == Tok::RBrace) {
        ++i;
        closed = true;
        break;
      }
      if (toks[i].kind == Tok::Semicolon) {
        ++i;
        continue;
      }
      const Token head = toks[i];
      auto ar = head.kind == Tok::Ident ? arity.find(head.text) : arity.end();
      if (ar == arity.end()) {
        report_at(head, head.kind == Tok::Ident ? "unknown event '" + head.text + "'"
                                                : std::string("expected an event, got ") +
                                                      internal::token_name(head.kind));
        ++i;
        continue;
      }
      ++i;
      std::vector<std::string> args;
      bool bad = false;
      for (std::size_t k = 0; k < ar->second; ++k) {
        if (toks[i].kind != Tok::Ident) {
          report_at(toks[i], "'" + head.text + "' expects " + std::to_string(ar->second) +
                                 " identifier(s), got " + internal::token_name(toks[i].kind));
          bad = true;
          break;
        }
        args.push_back(toks[i++].text);
      }
      if (bad) continue;
      const std::string& k = head.text;
      TraceEvent e;
      if (k == "assign") e = event::Assign{UserId(args[0]), RoleId(args[1])};
      else if (k == "deassign") e = event::Deassign{UserId(args[0]), RoleId(args[1])};
      else if (k == "grant") e = event::Grant{RoleId(args[0]), Permission{OperationId(args[1]), ObjectId(args[2])}};
      else if (k == "revoke") e = event::Revoke{RoleId(args[0]), Permission{OperationId(args[1]), ObjectId(args[2])}};
      else if (k == "inherit") e = event::Inherit{RoleId(args[0]), RoleId(args[1])};
      else if (k == "uninherit") e = event::Uninherit{RoleId(args[0]), RoleId(args[1])};
      else if (k == "create_session") e = event::CreateSession{SessionId(args[0]), UserId(args[1])};
      else if (k == "end_session") e = event::EndSession{SessionId(args[0])};
      else if (k == "activate") e = event::Activate{SessionId(args[0]), RoleId(args[1])};
      else e = event::Deactivate{SessionId(args[0]), RoleId(args[1])};
      try {
        apply_event(sim, e);
      } catch (const std::exception& ex) {
        report_at(head, ex.what());
      }
      txn.events.push_back(std::move(e));
    }
    if (!closed) {
      report_at(toks[i], "transaction '" + txn.label + "' is missing its closing '}'");
      break;
    }
    txns.push_back(std::move(txn));
  }
  if (out.diagnostics.empty()) out.transactions = std::move(txns);
  return out;
}

bool ReplayResult::any_violation() const {
  for (const auto& v : base_verdicts) {
    if (!v.satisfied && !v.undecided) return true;
  }
  for (const auto& t : transactions) {
    if (t.outcome != TxnOutcome::Committed) return true;
  }
  return false;
}

bool ReplayResult::any_undecided() const {
  for (const auto& v : base_verdicts) {
    if (v.undecided) return true;
  }
  for (const auto& t : transactions) {
    for (const auto& v : t.violations) {
      if (v.undecided) return true;
    }
  }
  return false;
}

ReplayResult replay(const Policy& policy, const std::vector<Transaction>& txns, ReplayMode mode,
                    const SolverLimits& limits) {
  ReplayResult result;
  RbacState state = policy.state;
  std::vector<Verdict> current = evaluate_all(RbacSnapshot(state), policy.constraints, limits);
  result.base_verdicts = current;

  for (const auto& txn : txns) {
    TxnResult tr;
    tr.label = txn.label;
    RbacState next = state;
    try {
      for (const auto& e : txn.events) apply_event(next, e);
    } catch (const std::exception& ex) {
      tr.outcome = TxnOutcome::Rejected;
      tr.error = ex.what();
      result.transactions.push_back(std::move(tr));
      continue;
    }
    auto after = evaluate_all(RbacSnapshot(next), policy.constraints, limits);
    for (std::size_t k = 0; k < after.size(); ++k) {
      const Verdict& before = current[k];
      const Verdict& now = after[k];
      if (now.satisfied) continue;
      if (now.undecided) {
        if (!before.undecided) tr.violations.push_back(now);
        continue;
      }
      std::set<WitnessKey> old;
      if (!before.satisfied && !before.undecided) {
        for (const auto& w : before.witnesses) old.insert(key_of(w));
      }
      Verdict fresh = now;
      fresh.witnesses.clear();
      for (const auto& w : now.witnesses) {
        if (!old.count(key_of(w))) fresh.witnesses.push_back(w);
      }
      if (!fresh.witnesses.empty()) tr.violations.push_back(std::move(fresh));
    }
    if (tr.violations.empty()) {
      tr.outcome = TxnOutcome::Committed;
    } else if (mode == ReplayMode::Enforce) {
      tr.outcome = TxnOutcome::RolledBack;
    } else {
      tr.outcome = TxnOutcome::CommittedWithViolations;
    }
    if (tr.outcome != TxnOutcome::RolledBack) {
      state = std::move(next);
      current = std::move(after);
    }
    result.transactions.push_back(std::move(tr));
  }
  result.final_state = std::move(state);
  return result;
}

const char* outcome_name(TxnOutcome o) {
  switch (o) {
    case TxnOutcome::Committed: return "committed";
    case TxnOutcome::RolledBack: return "rolled_back";
    case TxnOutcome::CommittedWithViolations: return "committed_with_violations";
    case TxnOutcome::Rejected: return "rejected";
  }
  return "unknown";
}

}  // namespace cdrbac
