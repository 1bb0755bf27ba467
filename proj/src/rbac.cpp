#include "cdrbac/rbac.hpp"

#include <algorithm>
#include <sstream>

#include "cdrbac/errors.hpp"

namespace cdrbac {
namespace {

Diagnostic state_error(std::string message) {
  Diagnostic d;
  d.message = std::move(message);
  return d;
}

// Returns a cycle as a role path r0 -> r1 -> ... -> r0, or empty if acyclic.
std::vector<RoleId> find_cycle(const std::set<RoleId>& roles,
                               const std::map<RoleId, std::vector<RoleId>>& adj) {
  enum class Mark { White, Grey, Black };
  std::map<RoleId, Mark> mark;
  std::vector<RoleId> stack;
  std::vector<RoleId> cycle;

  auto visit = [&](auto&& self, const RoleId& r) -> bool {
    mark[r] = Mark::Grey;
    stack.push_back(r);
    if (auto it = adj.find(r); it != adj.end()) {
      for (const auto& j : it->second) {
        Mark m = mark.count(j) ? mark[j] : Mark::White;
        if (m == Mark::Grey) {
          auto from = std::find(stack.begin(), stack.end(), j);
          cycle.assign(from, stack.end());
          cycle.push_back(j);
          return true;
        }
        if (m == Mark::White && self(self, j)) return true;
      }
    }
    stack.pop_back();
    mark[r] = Mark::Black;
    return false;
  };

  std::set<RoleId> nodes = roles;
  for (const auto& [r, js] : adj) {
    nodes.insert(r);
    nodes.insert(js.begin(), js.end());
  }
  for (const auto& r : nodes) {
    if (!mark.count(r) && visit(visit, r)) return cycle;
  }
  return {};
}

std::string join_path(const std::vector<RoleId>& path) {
  std::ostringstream os;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) os << " -> ";
    os << path[i];
  }
  return os.str();
}

std::map<RoleId, std::vector<RoleId>> adjacency(const RbacState& state) {
  std::map<RoleId, std::vector<RoleId>> adj;
  for (const auto& [senior, junior] : state.rh_edges) adj[senior].push_back(junior);
  return adj;
}

}  // namespace

Diagnostics validate_state(const RbacState& state) {
  Diagnostics out;
  for (const auto& [u, r] : state.ua) {
    if (!state.users.count(u))
      out.push_back(state_error("UA references undeclared user '" + u.str() + "'"));
    if (!state.roles.count(r))
      out.push_back(state_error("UA references undeclared role '" + r.str() + "'"));
  }
  for (const auto& [p, r] : state.pa) {
    if (!state.operations.count(p.op))
      out.push_back(state_error("PA references undeclared operation '" + p.op.str() + "'"));
    if (!state.objects.count(p.ob))
      out.push_back(state_error("PA references undeclared object '" + p.ob.str() + "'"));
    if (!state.roles.count(r))
      out.push_back(state_error("PA references undeclared role '" + r.str() + "'"));
  }
  bool edges_ok = true;
  for (const auto& [senior, junior] : state.rh_edges) {
    for (const auto& r : {senior, junior}) {
      if (!state.roles.count(r)) {
        edges_ok = false;
        out.push_back(state_error("RH references undeclared role '" + r.str() + "'"));
      }
    }
  }
  if (edges_ok) {
    if (auto cycle = find_cycle(state.roles, adjacency(state)); !cycle.empty())
      out.push_back(state_error("role hierarchy has a cycle: " + join_path(cycle)));
  }
  for (const auto& [s, rec] : state.sessions) {
    if (!state.users.count(rec.owner)) {
      out.push_back(state_error("session '" + s.str() + "' is owned by undeclared user '" +
                                rec.owner.str() + "'"));
      continue;
    }
    for (const auto& r : rec.active) {
      if (!state.ua.count({rec.owner, r}))
        out.push_back(state_error("session '" + s.str() + "' activates role '" + r.str() +
                                  "' not assigned to owner '" + rec.owner.str() +
                                  "' (SessionRoles must be a subset of AssignedRoles)"));
    }
  }
  return out;
}

RhClosure rh_closure(const RbacState& state) {
  auto adj = adjacency(state);
  if (auto cycle = find_cycle(state.roles, adj); !cycle.empty())
    throw StateError("role hierarchy has a cycle: " + join_path(cycle));

  RhClosure c;
  std::set<RoleId> nodes = state.roles;
  for (const auto& [senior, junior] : state.rh_edges) {
    nodes.insert(senior);
    nodes.insert(junior);
  }
  // Memoised DFS; acyclicity guarantees termination.
  auto down = [&](auto&& self, const RoleId& r) -> const std::set<RoleId>& {
    if (auto it = c.juniors_of.find(r); it != c.juniors_of.end()) return it->second;
    std::set<RoleId> acc{r};
    if (auto it = adj.find(r); it != adj.end()) {
      for (const auto& j : it->second) {
        const auto& sub = self(self, j);
        acc.insert(sub.begin(), sub.end());
      }
    }
    return c.juniors_of.emplace(r, std::move(acc)).first->second;
  };
  for (const auto& r : nodes) down(down, r);
  for (const auto& [senior, juniors] : c.juniors_of) {
    for (const auto& j : juniors) c.seniors_of[j].insert(senior);
  }
  return c;
}

RbacSnapshot::RbacSnapshot(RbacState state) : state_(std::move(state)) {
  if (auto diags = validate_state(state_); !diags.empty()) {
    std::string msg = "invalid RBAC state: " + diags.front().message;
    if (diags.size() > 1) msg += " (and " + std::to_string(diags.size() - 1) + " more)";
    throw StateError(msg);
  }
  closure_ = rh_closure(state_);

  for (const auto& u : state_.users) assigned_[u];
  for (const auto& [u, r] : state_.ua) assigned_[u].insert(r);

  for (const auto& r : state_.roles) direct_items_[r];
  for (const auto& [p, r] : state_.pa) {
    auto& items = direct_items_[r];
    items.prms.insert(p);
    items.obs.insert(p.ob);
    items.ops.insert(p.op);
  }
  for (const auto& r : state_.roles) {
    RoleItems& h = hier_items_[r];
    for (const auto& j : closure_.juniors_of.at(r)) {
      const RoleItems& d = direct_items_.at(j);
      h.prms.insert(d.prms.begin(), d.prms.end());
      h.obs.insert(d.obs.begin(), d.obs.end());
      h.ops.insert(d.ops.begin(), d.ops.end());
    }
  }
}

void RbacSnapshot::require_user(const UserId& u) const {
  if (!state_.users.count(u)) throw LookupError("unknown user '" + u.str() + "'");
}

void RbacSnapshot::require_role(const RoleId& r) const {
  if (!state_.roles.count(r)) throw LookupError("unknown role '" + r.str() + "'");
}

std::set<RoleId> RbacSnapshot::assigned_roles(const UserId& u) const {
  require_user(u);
  return assigned_.at(u);
}

std::set<RoleId> RbacSnapshot::authorized_roles(const UserId& u) const {
  require_user(u);
  std::set<RoleId> out;
  for (const auto& r : assigned_.at(u)) {
    const auto& js = closure_.juniors_of.at(r);
    out.insert(js.begin(), js.end());
  }
  return out;
}

std::set<RoleId> RbacSnapshot::user_roles(const UserId& u, RoleView view) const {
  return view == RoleView::Direct ? assigned_roles(u) : authorized_roles(u);
}

std::set<RoleId> RbacSnapshot::activated_roles(const UserId& u) const {
  require_user(u);
  std::set<RoleId> out;
  for (const auto& [s, rec] : state_.sessions) {
    if (rec.owner == u) out.insert(rec.active.begin(), rec.active.end());
  }
  return out;
}

const std::set<RoleId>& RbacSnapshot::session_roles(const SessionId& s) const {
  auto it = state_.sessions.find(s);
  if (it == state_.sessions.end()) throw LookupError("unknown session '" + s.str() + "'");
  return it->second.active;
}

std::vector<SessionId> RbacSnapshot::user_sessions(const UserId& u) const {
  require_user(u);
  std::vector<SessionId> out;
  for (const auto& [s, rec] : state_.sessions) {
    if (rec.owner == u) out.push_back(s);
  }
  return out;
}

const RoleItems& RbacSnapshot::role_items(const RoleId& r, RoleView view) const {
  require_role(r);
  return view == RoleView::Direct ? direct_items_.at(r) : hier_items_.at(r);
}

std::set<OperationId> RbacSnapshot::role_ops_on_ob(const RoleId& r, const ObjectId& ob,
                                                    RoleView view) const {
  const RoleItems& items = role_items(r, view);
  if (!state_.objects.count(ob)) throw LookupError("unknown object '" + ob.str() + "'");
  std::set<OperationId> out;
  for (const auto& p : items.prms) {
    if (p.ob == ob) out.insert(p.op);
  }
  return out;
}

}  // namespace cdrbac
