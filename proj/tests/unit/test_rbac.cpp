#include <doctest.h>

#include <algorithm>

#include "cdrbac/errors.hpp"
#include "cdrbac/rbac.hpp"
#include "policy_text.hpp"
#include "random_state.hpp"

using namespace cdrbac;
using cdrbac::testing::must_parse;

namespace {

std::set<RoleId> roles(std::initializer_list<const char*> names) {
  std::set<RoleId> out;
  for (auto n : names) out.insert(RoleId(n));
  return out;
}

// A small hierarchy: r3 is senior to r2.
const char* kHierarchyState = R"(
role r1
role r2
role r3
role r4
object ob1
object ob2
op op1
op op2
op op4
user u1
inherit r3 r2
perm r1 op1 ob1
perm r1 op1 ob2
perm r2 op1 ob1
perm r2 op2 ob2
perm r3 op4 ob1
perm r4 op2 ob1
assign u1 r1
assign u1 r3
)";

}  // namespace

TEST_CASE("validate_state accepts the empty state") {
  CHECK(validate_state(RbacState{}).empty());
}

TEST_CASE("validate_state flags a session role the owner is not assigned") {
  RbacState s;
  s.users.insert(UserId("u1"));
  s.roles.insert(RoleId("r1"));
  s.sessions[SessionId("s1")] = SessionRecord{UserId("u1"), roles({"r1"})};
  auto ds = validate_state(s);
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].message.find("s1") != std::string::npos);
  CHECK(ds[0].message.find("r1") != std::string::npos);
  CHECK_THROWS_AS(RbacSnapshot{s}, StateError);
}

TEST_CASE("validate_state flags hierarchy cycles and undeclared references") {
  RbacState s;
  s.roles = roles({"a", "b"});
  s.rh_edges = {{RoleId("a"), RoleId("b")}, {RoleId("b"), RoleId("a")}};
  auto ds = validate_state(s);
  REQUIRE(!ds.empty());
  CHECK(ds[0].message.find("cycle") != std::string::npos);
  CHECK_THROWS_AS(rh_closure(s), StateError);

  RbacState t;
  t.ua.emplace(UserId("ghost"), RoleId("r"));
  CHECK(!validate_state(t).empty());
}

TEST_CASE("rh_closure is reflexive and transitive") {
  RbacState s;
  s.roles = roles({"r1"});
  CHECK(rh_closure(s).juniors_of.at(RoleId("r1")) == roles({"r1"}));

  RbacState chain;
  chain.roles = roles({"a", "b", "c"});
  chain.rh_edges = {{RoleId("a"), RoleId("b")}, {RoleId("b"), RoleId("c")}};
  auto cl = rh_closure(chain);
  CHECK(cl.juniors_of.at(RoleId("a")) == roles({"a", "b", "c"}));
  CHECK(cl.seniors_of.at(RoleId("c")) == roles({"a", "b", "c"}));
  CHECK(cl.juniors_of.at(RoleId("c")) == roles({"c"}));
}

TEST_CASE("hierarchy example: closure, authorized roles and inherited items") {
  auto p = must_parse(kHierarchyState);
  RbacSnapshot snap(p.state);
  CHECK(snap.closure().juniors_of.at(RoleId("r3")) == roles({"r2", "r3"}));
  CHECK(snap.assigned_roles(UserId("u1")) == roles({"r1", "r3"}));
  CHECK(snap.authorized_roles(UserId("u1")) == roles({"r1", "r2", "r3"}));

  CHECK(snap.role_items(RoleId("r3"), RoleView::Direct).obs == std::set<ObjectId>{ObjectId("ob1")});
  CHECK(snap.role_items(RoleId("r3"), RoleView::Hierarchical).obs ==
        std::set<ObjectId>{ObjectId("ob1"), ObjectId("ob2")});
  CHECK(snap.role_items(RoleId("r3"), RoleView::Hierarchical).ops ==
        std::set<OperationId>{OperationId("op1"), OperationId("op2"), OperationId("op4")});
  CHECK(snap.role_ops_on_ob(RoleId("r3"), ObjectId("ob2"), RoleView::Direct).empty());
  CHECK(snap.role_ops_on_ob(RoleId("r3"), ObjectId("ob2"), RoleView::Hierarchical) ==
        std::set<OperationId>{OperationId("op2")});
  CHECK(snap.role_ops_on_ob(RoleId("r3"), ObjectId("ob1"), RoleView::Hierarchical) ==
        std::set<OperationId>{OperationId("op1"), OperationId("op4")});
  // Roles with no juniors look the same under both views.
  CHECK(snap.role_items(RoleId("r1"), RoleView::Direct) == snap.role_items(RoleId("r1"), RoleView::Hierarchical));
}

TEST_CASE("role items of the common-items example") {
  auto p = must_parse(R"(
role r1
object ob1
object ob2
op op1
op op2
perm r1 op1 ob1
perm r1 op2 ob1
perm r1 op1 ob2
perm r1 op2 ob2
role empty
)");
  RbacSnapshot snap(p.state);
  const auto& items = snap.role_items(RoleId("r1"), RoleView::Direct);
  CHECK(items.obs == std::set<ObjectId>{ObjectId("ob1"), ObjectId("ob2")});
  CHECK(items.ops == std::set<OperationId>{OperationId("op1"), OperationId("op2")});
  CHECK(items.prms.size() == 4);
  for (auto view : {RoleView::Direct, RoleView::Hierarchical}) {
    CHECK(snap.role_items(RoleId("empty"), view) == RoleItems{});
  }
}

TEST_CASE("user queries on assignments and sessions") {
  auto p = must_parse(R"(
role r1
role r2
role r3
role r5
user u1
user idle
user solo
assign u1 r1
assign u1 r2
assign u1 r3
assign solo r5
session s1 u1
session s2 u1
session s3 u1
session s4 u1
session t1 solo
activate s1 r1
activate s2 r2
activate s4 r2
activate s4 r3
activate t1 r5
)");
  RbacSnapshot snap(p.state);
  CHECK(snap.activated_roles(UserId("u1")) == roles({"r1", "r2", "r3"}));
  CHECK(snap.activated_roles(UserId("idle")).empty());
  CHECK(snap.activated_roles(UserId("solo")) == roles({"r5"}));
  CHECK(snap.assigned_roles(UserId("idle")).empty());
  CHECK(snap.authorized_roles(UserId("idle")).empty());
  CHECK(snap.user_sessions(UserId("u1")).size() == 4);
  CHECK(snap.session_roles(SessionId("s3")).empty());
}

TEST_CASE("queries reject undeclared ids") {
  RbacSnapshot snap(RbacState{});
  CHECK_THROWS_AS(snap.assigned_roles(UserId("nobody")), LookupError);
  CHECK_THROWS_AS(snap.authorized_roles(UserId("nobody")), LookupError);
  CHECK_THROWS_AS(snap.activated_roles(UserId("nobody")), LookupError);
  CHECK_THROWS_AS(snap.session_roles(SessionId("s")), LookupError);
  CHECK_THROWS_AS(snap.role_items(RoleId("r"), RoleView::Direct), LookupError);
  CHECK_THROWS_AS(snap.role_ops_on_ob(RoleId("r"), ObjectId("o"), RoleView::Direct), LookupError);
}

TEST_CASE("view properties hold on random states") {
  cdrbac::testing::RandomPolicy gen(7);
  for (int i = 0; i < 200; ++i) {
    RbacState s = gen.state();
    RbacSnapshot snap(s);
    RbacState flat = s;
    flat.rh_edges.clear();
    RbacSnapshot flat_snap(flat);
    for (const auto& u : s.users) {
      const auto assigned = snap.assigned_roles(u);
      const auto authorized = snap.authorized_roles(u);
      CHECK(std::includes(authorized.begin(), authorized.end(), assigned.begin(), assigned.end()));
      CHECK(flat_snap.authorized_roles(u) == assigned);
      const auto activated = snap.activated_roles(u);
      CHECK(std::includes(assigned.begin(), assigned.end(), activated.begin(), activated.end()));
    }
    for (const auto& r : s.roles) {
      const auto& d = snap.role_items(r, RoleView::Direct);
      const auto& h = snap.role_items(r, RoleView::Hierarchical);
      CHECK(std::includes(h.prms.begin(), h.prms.end(), d.prms.begin(), d.prms.end()));
      CHECK(flat_snap.role_items(r, RoleView::Hierarchical) == flat_snap.role_items(r, RoleView::Direct));
      for (auto view : {RoleView::Direct, RoleView::Hierarchical}) {
        std::set<ObjectId> obs;
        std::set<OperationId> ops;
        for (const auto& ob : s.objects) {
          auto on = snap.role_ops_on_ob(r, ob, view);
          if (!on.empty()) obs.insert(ob);
          ops.insert(on.begin(), on.end());
        }
        CHECK(snap.role_items(r, view).obs == obs);
        CHECK(snap.role_items(r, view).ops == ops);
      }
    }
  }
}
