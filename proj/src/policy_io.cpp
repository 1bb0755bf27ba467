#include "cdrbac/policy_io.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include "cdrbac/detail/overloaded.hpp"
#include "lexer.hpp"

namespace cdrbac {
namespace {

using internal::lex;
using internal::LexError;
using internal::Tok;
using internal::Token;
using internal::token_name;

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

// One `key=value` pair of a constraint statement.
struct KeyValue {
  Token key;
  Token value;                                   // Number or Ident; kind End for lists
  std::vector<Token> list;                       // identifiers
  std::vector<std::pair<Token, Token>> tuples;   // (ob, op)
  bool is_list = false;
};

struct ConstraintDraft {
  Token keyword;
  ConstraintBody body;
  std::optional<Token> id;
  std::vector<KeyValue> pairs;
  std::size_t line = 0;
};

struct Relation {
  Token keyword;
  std::vector<Token> args;
};

class PolicyParser {
 public:
  PolicyParser(std::string_view text, std::string name)
      : lines_(split_lines(text)), name_(std::move(name)) {}

  PolicyParse run() {
    for (std::size_t i = 0; i < lines_.size(); ++i) parse_line(i + 1);
    Policy p;
    p.name = name_;
    resolve(p.state);
    build_constraints(p);
    PolicyParse out;
    bool has_error = false;
    for (const auto& d : diags_) has_error |= d.severity == Severity::Error;
    if (!has_error) {
      // Everything is resolved above; this only guards invariants the line
      // checks might have missed.
      for (auto d : validate_state(p.state)) diags_.push_back(std::move(d)), has_error = true;
    }
    out.diagnostics = std::move(diags_);
    if (!has_error) out.policy = std::move(p);
    return out;
  }

 private:
  void report(std::size_t line, std::size_t column, std::string message,
              Severity sev = Severity::Error) {
    Diagnostic d;
    d.severity = sev;
    d.line = line;
    d.column = column;
    d.message = std::move(message);
    if (line >= 1 && line <= lines_.size()) d.snippet = std::string(lines_[line - 1]);
    diags_.push_back(std::move(d));
  }
  void report(const Token& at, std::string message, Severity sev = Severity::Error) {
    report(at.line, at.column, std::move(message), sev);
  }

  void parse_line(std::size_t lineno) {
    LexError err;
    auto toks = lex(lines_[lineno - 1], lineno, &err);
    if (!err.message.empty()) {
      report(err.line, err.column, err.message);
      return;
    }
    if (toks.front().kind == Tok::End) return;
    const Token& head = toks.front();
    if (head.kind != Tok::Ident) {
      report(head, std::string("expected a statement keyword, got ") + token_name(head.kind));
      return;
    }
    static const std::map<std::string, std::size_t> decl_kw{
        {"user", 0}, {"role", 1}, {"object", 2}, {"op", 3}};
    static const std::map<std::string, std::size_t> relation_arity{
        {"perm", 3}, {"assign", 2}, {"inherit", 2}, {"session", 2}, {"activate", 2}};

    if (auto it = decl_kw.find(head.text); it != decl_kw.end()) {
      std::vector<Token> args;
      if (!take_idents(toks, 1, args)) return;
      declare(decls_[it->second], head.text, args[0]);
    } else if (auto rit = relation_arity.find(head.text); rit != relation_arity.end()) {
      Relation rel{head, {}};
      if (!take_idents(toks, rit->second, rel.args)) return;
      if (head.text == "session") declare(sessions_, "session", rel.args[0]);
      relations_.push_back(std::move(rel));
    } else if (head.text == "constraint") {
      parse_constraint(toks);
    } else {
      report(head, "unknown statement '" + head.text + "'");
    }
  }

  // Expects exactly `count` identifiers after the keyword.
  bool take_idents(const std::vector<Token>& toks, std::size_t count, std::vector<Token>& out) {
    for (std::size_t i = 1; i <= count; ++i) {
      const Token& t = toks[std::min(i, toks.size() - 1)];
      if (t.kind != Tok::Ident) {
        report(t, "'" + toks[0].text + "' expects " + std::to_string(count) +
                      " identifier(s), got " + token_name(t.kind));
        return false;
      }
      out.push_back(t);
    }
    if (toks[count + 1].kind != Tok::End) {
      report(toks[count + 1], "unexpected " + std::string(token_name(toks[count + 1].kind)) +
                                  " after '" + toks[0].text + "' statement");
      return false;
    }
    return true;
  }

  void declare(std::map<std::string, std::size_t>& table, const std::string& what, const Token& id) {
    auto [it, inserted] = table.emplace(id.text, id.line);
    if (!inserted)
      report(id, "duplicate declaration of " + what + " '" + id.text + "' (first declared on line " +
                     std::to_string(it->second) + ")");
  }

  bool declared(std::size_t kind, const Token& t, const char* what) {
    if (decls_[kind].count(t.text)) return true;
    report(t, std::string("unknown ") + what + " '" + t.text + "'");
    return false;
  }

  void parse_constraint(const std::vector<Token>& toks) {
    std::size_t i = 1;
    if (toks[i].kind != Tok::Ident) {
      report(toks[i], "expected a constraint kind after 'constraint'");
      return;
    }
    ConstraintDraft draft;
    draft.keyword = toks[i];
    draft.line = toks[i].line;
    auto body = body_for_keyword(toks[i].text);
    if (!body) {
      report(toks[i], "unknown constraint kind '" + toks[i].text + "'");
      return;
    }
    draft.body = *body;
    ++i;
    while (toks[i].kind != Tok::End) {
      KeyValue kv;
      if (toks[i].kind != Tok::Ident) {
        report(toks[i], std::string("expected key=value, got ") + token_name(toks[i].kind));
        return;
      }
      kv.key = toks[i++];
      if (toks[i].kind != Tok::Equals) {
        report(toks[i], "expected '=' after '" + kv.key.text + "'");
        return;
      }
      ++i;
      if (toks[i].kind == Tok::Number || toks[i].kind == Tok::Ident) {
        kv.value = toks[i++];
      } else if (toks[i].kind == Tok::LBracket) {
        kv.is_list = true;
        ++i;
        bool first = true;
        while (toks[i].kind != Tok::RBracket) {
          if (!first) {
            if (toks[i].kind != Tok::Comma) {
              report(toks[i], std::string("expected ',' or ']', got ") + token_name(toks[i].kind));
              return;
            }
            ++i;
          }
          first = false;
          if (toks[i].kind == Tok::Ident) {
            kv.list.push_back(toks[i++]);
          } else if (toks[i].kind == Tok::LParen) {
            auto kind_at = [&](std::size_t k) { return k < toks.size() ? toks[k].kind : Tok::End; };
            if (kind_at(i + 1) != Tok::Ident || kind_at(i + 2) != Tok::Comma ||
                kind_at(i + 3) != Tok::Ident || kind_at(i + 4) != Tok::RParen) {
              report(toks[i], "expected a permission tuple (object,operation)");
              return;
            }
            kv.tuples.emplace_back(toks[i + 1], toks[i + 3]);
            i += 5;
          } else {
            report(toks[i], std::string("expected a list item, got ") + token_name(toks[i].kind));
            return;
          }
        }
        ++i;
      } else {
        report(toks[i], "expected a value for '" + kv.key.text + "'");
        return;
      }
      draft.pairs.push_back(std::move(kv));
    }
    drafts_.push_back(std::move(draft));
  }

  void resolve(RbacState& s) {
    for (const auto& [name, line] : decls_[0]) s.users.insert(UserId(name));
    for (const auto& [name, line] : decls_[1]) s.roles.insert(RoleId(name));
    for (const auto& [name, line] : decls_[2]) s.objects.insert(ObjectId(name));
    for (const auto& [name, line] : decls_[3]) s.operations.insert(OperationId(name));

    auto duplicate = [&](bool inserted, const Relation& rel) {
      if (!inserted) report(rel.keyword, "duplicate '" + rel.keyword.text + "' statement", Severity::Warning);
    };
    // Relations are resolved in dependency order so declarations may appear anywhere.
    for (const char* kw : {"perm", "assign", "inherit", "session", "activate"}) {
      for (const auto& rel : relations_) {
        if (rel.keyword.text != kw) continue;
        const auto& a = rel.args;
        const std::string k = kw;
        if (k == "perm") {
          if (declared(1, a[0], "role") & declared(3, a[1], "operation") & declared(2, a[2], "object"))
            duplicate(s.pa.emplace(Permission{OperationId(a[1].text), ObjectId(a[2].text)},
                                   RoleId(a[0].text)).second, rel);
        } else if (k == "assign") {
          if (declared(0, a[0], "user") & declared(1, a[1], "role"))
            duplicate(s.ua.emplace(UserId(a[0].text), RoleId(a[1].text)).second, rel);
        } else if (k == "inherit") {
          if (!(declared(1, a[0], "role") & declared(1, a[1], "role"))) continue;
          RoleId senior(a[0].text), junior(a[1].text);
          if (senior == junior) {
            report(a[1], "a role cannot inherit itself");
            continue;
          }
          if (auto path = hierarchy_path(s, junior, senior); !path.empty()) {
            std::string shown = senior.str();
            for (const auto& r : path) shown += " -> " + r.str();
            report(a[1], "inherit " + senior.str() + " " + junior.str() +
                             " closes a cycle in the role hierarchy: " + shown);
            continue;
          }
          duplicate(s.rh_edges.emplace(senior, junior).second, rel);
        } else if (k == "session") {
          if (!declared(0, a[1], "user")) continue;
          SessionId sid(a[0].text);
          if (!s.sessions.count(sid)) s.sessions[sid] = SessionRecord{UserId(a[1].text), {}};
        } else {
          SessionId sid(a[0].text);
          auto sit = s.sessions.find(sid);
          if (sit == s.sessions.end()) {
            if (!sessions_.count(a[0].text)) report(a[0], "unknown session '" + a[0].text + "'");
            continue;
          }
          if (!declared(1, a[1], "role")) continue;
          RoleId r(a[1].text);
          if (!s.ua.count({sit->second.owner, r})) {
            report(a[1], "cannot activate role '" + r.str() + "' in session '" + sid.str() +
                             "': not assigned to owner '" + sit->second.owner.str() + "'");
            continue;
          }
          duplicate(sit->second.active.insert(r).second, rel);
        }
      }
    }
  }

  // Path from `from` down to `to` along existing edges, excluding `from`.
  static std::vector<RoleId> hierarchy_path(const RbacState& s, const RoleId& from,
                                            const RoleId& to) {
    std::map<RoleId, RoleId> parent;
    std::vector<RoleId> frontier{from};
    std::set<RoleId> seen{from};
    while (!frontier.empty()) {
      std::vector<RoleId> next;
      for (const auto& r : frontier) {
        for (auto it = s.rh_edges.lower_bound({r, RoleId()}); it != s.rh_edges.end() && it->first == r; ++it) {
          if (!seen.insert(it->second).second) continue;
          parent[it->second] = r;
          if (it->second == to) {
            std::vector<RoleId> path{to};
            for (RoleId cur = to; parent.count(cur) && parent[cur] != from;) {
              cur = parent[cur];
              path.insert(path.begin(), cur);
            }
            path.insert(path.begin(), from);
            return path;
          }
          next.push_back(it->second);
        }
      }
      frontier = std::move(next);
    }
    return {};
  }

  std::optional<std::size_t> number(const KeyValue& kv) {
    if (kv.is_list || kv.value.kind != Tok::Number) {
      report(kv.key, "'" + kv.key.text + "' expects a number");
      return std::nullopt;
    }
    std::size_t v = 0;
    const auto& t = kv.value.text;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      report(kv.value, "number out of range");
      return std::nullopt;
    }
    return v;
  }

  template <class IdT>
  std::optional<std::set<IdT>> id_list(const KeyValue& kv, std::size_t decl_kind, const char* what) {
    if (!kv.is_list || !kv.tuples.empty()) {
      report(kv.key, "'" + kv.key.text + "' expects a list of identifiers [a,b,...]");
      return std::nullopt;
    }
    std::set<IdT> out;
    bool ok = true;
    for (const auto& t : kv.list) {
      if (!declared(decl_kind, t, what)) {
        ok = false;
        continue;
      }
      if (!out.insert(IdT(t.text)).second) {
        report(t, std::string("duplicate ") + what + " '" + t.text + "' in list");
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<std::set<Permission>> permission_list(const KeyValue& kv) {
    if (!kv.is_list || !kv.list.empty()) {
      report(kv.key, "'prms' expects a list of (object,operation) tuples");
      return std::nullopt;
    }
    std::set<Permission> out;
    bool ok = true;
    for (const auto& [ob, op] : kv.tuples) {
      if (!(declared(2, ob, "object") & declared(3, op, "operation"))) {
        ok = false;
        continue;
      }
      if (!out.insert(Permission{OperationId(op.text), ObjectId(ob.text)}).second) {
        report(ob, "duplicate permission in list");
        ok = false;
      }
    }
    if (!ok) return std::nullopt;
    return out;
  }

  void build_constraints(Policy& p) {
    std::map<std::string, std::size_t> ids;
    std::size_t ordinal = 0;
    for (auto& d : drafts_) {
      ++ordinal;
      if (auto c = build_constraint(d, ordinal, p.state)) {
        auto [it, inserted] = ids.emplace(c->id, d.line);
        if (!inserted) {
          report(d.keyword, "duplicate constraint id '" + c->id + "' (first used on line " +
                                std::to_string(it->second) + ")");
          continue;
        }
        p.constraints.push_back(std::move(*c));
      }
    }
  }

  std::optional<Constraint> build_constraint(const ConstraintDraft& d, std::size_t ordinal,
                                             const RbacState& state) {
    Constraint c{"c" + std::to_string(ordinal), d.body};
    auto* items = std::get_if<ScdItems>(&c.body);
    const bool wants_obs = items && (items->kind == ItemKind::Obs || items->kind == ItemKind::ObsOps);
    const bool wants_ops = items && (items->kind == ItemKind::Ops || items->kind == ItemKind::ObsOps);
    const bool wants_prms = items && items->kind == ItemKind::Prms;

    std::map<std::string, const KeyValue*> seen;
    bool ok = true;
    bool have_roles = false, have_n = false;
    for (const auto& kv : d.pairs) {
      const std::string& key = kv.key.text;
      if (!seen.emplace(key, &kv).second) {
        report(kv.key, "duplicate key '" + key + "'");
        ok = false;
        continue;
      }
      auto alternative = [&](const char* other) {
        if (seen.count(other)) {
          report(kv.key, "give only one of '" + std::string(other) + "' and '" + key + "'");
          ok = false;
          return false;
        }
        return true;
      };
      auto not_applicable = [&] {
        report(kv.key, "key '" + key + "' does not apply to constraint kind '" + d.keyword.text + "'");
        ok = false;
      };

      if (key == "id") {
        if (kv.is_list || kv.value.kind != Tok::Ident) {
          report(kv.key, "'id' expects an identifier");
          ok = false;
        } else {
          c.id = kv.value.text;
        }
      } else if (key == "roles") {
        have_roles = true;
        auto rs = id_list<RoleId>(kv, 1, "role");
        if (!rs) {
          ok = false;
          continue;
        }
        std::visit([&](auto& b) { b.roles = std::move(*rs); }, c.body);
      } else if (key == "n") {
        have_n = true;
        auto n = number(kv);
        if (!n) {
          ok = false;
          continue;
        }
        std::visit([&](auto& b) { b.n = *n; }, c.body);
      } else if (key == "obs" || key == "obn") {
        if (!wants_obs) {
          not_applicable();
          continue;
        }
        if (!alternative(key == "obs" ? "obn" : "obs")) continue;
        if (key == "obs") {
          auto v = id_list<ObjectId>(kv, 2, "object");
          if (v) items->obs = ObjectRequirement::named(std::move(*v)); else ok = false;
        } else {
          auto v = number(kv);
          if (v) items->obs = ObjectRequirement::count(*v); else ok = false;
        }
      } else if (key == "ops" || key == "opn") {
        if (!wants_ops) {
          not_applicable();
          continue;
        }
        if (!alternative(key == "ops" ? "opn" : "ops")) continue;
        if (key == "ops") {
          auto v = id_list<OperationId>(kv, 3, "operation");
          if (v) items->ops = OperationRequirement::named(std::move(*v)); else ok = false;
        } else {
          auto v = number(kv);
          if (v) items->ops = OperationRequirement::count(*v); else ok = false;
        }
      } else if (key == "prms" || key == "prmn") {
        if (!wants_prms) {
          not_applicable();
          continue;
        }
        if (!alternative(key == "prms" ? "prmn" : "prms")) continue;
        if (key == "prms") {
          auto v = permission_list(kv);
          if (v) items->prms = PermissionRequirement::named(std::move(*v)); else ok = false;
        } else {
          auto v = number(kv);
          if (v) items->prms = PermissionRequirement::count(*v); else ok = false;
        }
      } else {
        report(kv.key, "unknown key '" + key + "'");
        ok = false;
      }
    }
    if (!have_roles) {
      report(d.keyword, "constraint '" + d.keyword.text + "' is missing roles=[...]");
      ok = false;
    }
    if (!have_n) {
      report(d.keyword, "constraint '" + d.keyword.text + "' is missing n=K");
      ok = false;
    }
    if (!ok) return std::nullopt;
    auto problems = validate_constraint(c, state);
    for (const auto& problem : problems) report(d.keyword, problem.message);
    if (!problems.empty()) return std::nullopt;
    return c;
  }

  std::vector<std::string_view> lines_;
  std::string name_;
  Diagnostics diags_;
  // users, roles, objects, operations: name -> declaring line
  std::map<std::string, std::size_t> decls_[4];
  std::map<std::string, std::size_t> sessions_;
  std::vector<Relation> relations_;
  std::vector<ConstraintDraft> drafts_;
};

template <class T>
std::string join_ids(const std::set<T>& items) {
  std::string out = "[";
  bool first = true;
  for (const auto& x : items) {
    if (!first) out += ",";
    first = false;
    out += x.str();
  }
  return out + "]";
}

std::string join_prms(const std::set<Permission>& items) {
  std::string out = "[";
  bool first = true;
  for (const auto& p : items) {
    if (!first) out += ",";
    first = false;
    out += "(" + p.ob.str() + "," + p.op.str() + ")";
  }
  return out + "]";
}

}  // namespace

PolicyParse parse_policy(std::string_view text, std::string name) {
  return PolicyParser(text, std::move(name)).run();
}

std::string write_constraint(const Constraint& c) {
  std::string out = "constraint " + family_keyword(c) + " id=" + c.id + " roles=" +
                    join_ids(constraint_roles(c)) + " n=" + std::to_string(constraint_threshold(c));
  if (const auto* b = std::get_if<ScdItems>(&c.body)) {
    if (b->obs) out += b->obs->is_named() ? " obs=" + join_ids(b->obs->items()) : " obn=" + std::to_string(b->obs->min_count());
    if (b->ops) out += b->ops->is_named() ? " ops=" + join_ids(b->ops->items()) : " opn=" + std::to_string(b->ops->min_count());
    if (b->prms) out += b->prms->is_named() ? " prms=" + join_prms(b->prms->items()) : " prmn=" + std::to_string(b->prms->min_count());
  }
  return out;
}

std::string write_policy(const Policy& p) {
  std::ostringstream os;
  const RbacState& s = p.state;
  for (const auto& u : s.users) os << "user " << u << "\n";
  for (const auto& r : s.roles) os << "role " << r << "\n";
  for (const auto& o : s.objects) os << "object " << o << "\n";
  for (const auto& o : s.operations) os << "op " << o << "\n";
  for (const auto& [perm, r] : s.pa) os << "perm " << r << " " << perm.op << " " << perm.ob << "\n";
  for (const auto& [u, r] : s.ua) os << "assign " << u << " " << r << "\n";
  for (const auto& [senior, junior] : s.rh_edges) os << "inherit " << senior << " " << junior << "\n";
  for (const auto& [sid, rec] : s.sessions) os << "session " << sid << " " << rec.owner << "\n";
  for (const auto& [sid, rec] : s.sessions) {
    for (const auto& r : rec.active) os << "activate " << sid << " " << r << "\n";
  }
  for (const auto& c : p.constraints) os << write_constraint(c) << "\n";
  return os.str();
}

}  // namespace cdrbac
