#include "cdrbac/constraint.hpp"

#include <map>
#include <type_traits>

#include "cdrbac/detail/overloaded.hpp"

namespace cdrbac {
namespace {

using detail::overloaded;

std::string type_digit(CdType t) {
  switch (t) {
    case CdType::I: return "1";
    case CdType::II: return "2";
    case CdType::III: return "3";
  }
  return "?";
}

std::string kind_suffix(ItemKind k) {
  switch (k) {
    case ItemKind::Obs: return "ob";
    case ItemKind::Ops: return "op";
    case ItemKind::ObsOps: return "obop";
    case ItemKind::Prms: return "prms";
  }
  return "?";
}

std::map<std::string, ConstraintBody> build_keyword_table() {
  std::map<std::string, ConstraintBody> t;
  t["ssd"] = Ssd{{}, 2, RoleView::Direct};
  t["ssdh"] = Ssd{{}, 2, RoleView::Hierarchical};
  t["dsd"] = Dsd{};
  for (auto view : {RoleView::Direct, RoleView::Hierarchical}) {
    for (auto type : {CdType::I, CdType::II, CdType::III}) {
      Scd b;
      b.type = type;
      b.view = view;
      t[family_keyword(Constraint{"", b})] = b;
    }
    for (auto mode : {ItemMode::Common, ItemMode::Union}) {
      for (auto kind : {ItemKind::Obs, ItemKind::Ops, ItemKind::ObsOps, ItemKind::Prms}) {
        ScdItems b;
        b.mode = mode;
        b.kind = kind;
        b.view = view;
        t[family_keyword(Constraint{"", b})] = b;
      }
    }
  }
  for (auto scope : {Scope::Session, Scope::User}) {
    for (auto type : {CdType::I, CdType::II, CdType::III}) {
      Dcd b;
      b.scope = scope;
      b.type = type;
      t[family_keyword(Constraint{"", b})] = b;
    }
  }
  return t;
}

const std::map<std::string, ConstraintBody>& keyword_table() {
  static const auto table = build_keyword_table();
  return table;
}

Diagnostic error(std::string msg) {
  Diagnostic d;
  d.message = std::move(msg);
  return d;
}

template <class T, class Declared>
void check_requirement(const std::optional<ItemRequirement<T>>& req, const char* what,
                       const Declared& declared, Diagnostics& out) {
  if (!req) return;
  if (req->is_named()) {
    if (req->items().empty()) out.push_back(error(std::string(what) + " set must not be empty"));
    for (const auto& x : req->items()) {
      if constexpr (std::is_same_v<T, Permission>) {
        if (!declared.first.count(x.ob) || !declared.second.count(x.op))
          out.push_back(error("permission (" + x.ob.str() + "," + x.op.str() +
                              ") references undeclared object or operation"));
      } else {
        if (!declared.count(x))
          out.push_back(error(std::string(what) + " references undeclared '" + x.str() + "'"));
      }
    }
  } else if (req->min_count() == 0) {
    out.push_back(error(std::string(what) + " count must be at least 1"));
  }
}

}  // namespace

const std::set<RoleId>& constraint_roles(const Constraint& c) {
  return std::visit([](const auto& b) -> const std::set<RoleId>& { return b.roles; }, c.body);
}

std::size_t constraint_threshold(const Constraint& c) {
  return std::visit([](const auto& b) { return b.n; }, c.body);
}

std::string family_keyword(const Constraint& c) {
  return std::visit(
      overloaded{
          [](const Ssd& b) -> std::string {
            return b.view == RoleView::Hierarchical ? "ssdh" : "ssd";
          },
          [](const Dsd&) -> std::string { return "dsd"; },
          [](const Scd& b) {
            return std::string(b.view == RoleView::Hierarchical ? "scdh" : "scd") +
                   type_digit(b.type);
          },
          [](const ScdItems& b) {
            std::string k = b.view == RoleView::Hierarchical ? "scdh" : "scd";
            k += b.mode == ItemMode::Common ? "c" : "u";
            return k + kind_suffix(b.kind) + "1";
          },
          [](const Dcd& b) {
            return std::string(b.scope == Scope::Session ? "dcds" : "dcdu") + type_digit(b.type);
          },
      },
      c.body);
}

std::optional<ConstraintBody> body_for_keyword(const std::string& keyword) {
  const auto& t = keyword_table();
  if (auto it = t.find(keyword); it != t.end()) return it->second;
  return std::nullopt;
}

const std::vector<std::string>& all_family_keywords() {
  static const std::vector<std::string> keys = [] {
    // Grouped by family rather than alphabetically.
    std::vector<std::string> k{"ssd", "ssdh", "dsd"};
    for (const char* h : {"", "h"}) {
      for (const char* t : {"1", "2", "3"}) k.push_back(std::string("scd") + h + t);
    }
    for (const char* h : {"", "h"}) {
      for (const char* m : {"c", "u"}) {
        for (const char* s : {"ob", "op", "obop", "prms"})
          k.push_back(std::string("scd") + h + m + s + "1");
      }
    }
    for (const char* s : {"s", "u"}) {
      for (const char* t : {"1", "2", "3"}) k.push_back(std::string("dcd") + s + t);
    }
    return k;
  }();
  return keys;
}

Diagnostics validate_constraint(const Constraint& c, const RbacState& state) {
  Diagnostics out;
  if (c.id.empty()) out.push_back(error("constraint id must not be empty"));

  const auto& rs = constraint_roles(c);
  const std::size_t n = constraint_threshold(c);
  for (const auto& r : rs) {
    if (!state.roles.count(r)) out.push_back(error("constraint references undeclared role '" + r.str() + "'"));
  }

  const bool separation = std::holds_alternative<Ssd>(c.body) || std::holds_alternative<Dsd>(c.body);
  if (separation) {
    if (n < 2 || n > rs.size())
      out.push_back(error("SD requires 2 <= n <= |roles| (n=" + std::to_string(n) +
                          ", |roles|=" + std::to_string(rs.size()) + ")"));
  } else if (n < 1 || n >= rs.size()) {
    out.push_back(error("CD requires 1 <= n < |roles| (n=" + std::to_string(n) +
                        ", |roles|=" + std::to_string(rs.size()) + ")"));
  }

  if (const auto* b = std::get_if<ScdItems>(&c.body)) {
    const bool want_obs = b->kind == ItemKind::Obs || b->kind == ItemKind::ObsOps;
    const bool want_ops = b->kind == ItemKind::Ops || b->kind == ItemKind::ObsOps;
    const bool want_prms = b->kind == ItemKind::Prms;
    auto shape = [&](bool want, bool have, const char* name) {
      if (want && !have) out.push_back(error(std::string("missing required ") + name + " requirement"));
      if (!want && have) out.push_back(error(std::string("unexpected ") + name + " requirement for this kind"));
    };
    shape(want_obs, b->obs.has_value(), "object (obs/obn)");
    shape(want_ops, b->ops.has_value(), "operation (ops/opn)");
    shape(want_prms, b->prms.has_value(), "permission (prms/prmn)");
    check_requirement(b->obs, "obs", state.objects, out);
    check_requirement(b->ops, "ops", state.operations, out);
    check_requirement(b->prms, "prms", std::pair<const std::set<ObjectId>&, const std::set<OperationId>&>(state.objects, state.operations), out);
  }
  return out;
}

}  // namespace cdrbac
