#include <doctest.h>

#include <json.hpp>

#include "cdrbac/evaluate.hpp"
#include "cdrbac/report.hpp"
#include "policy_text.hpp"
#include "worked_fixtures.hpp"

using namespace cdrbac;
using cdrbac::testing::must_parse;

namespace {

Policy fixture(const std::string& name) {
  return must_parse(cdrbac::testing::read_text(cdrbac::testing::fixture_dir() + "/worked/" + name),
                    name.substr(0, name.find('.')));
}

std::vector<Verdict> verdicts_of(const Policy& p) {
  return evaluate_all(RbacSnapshot(p.state), p.constraints);
}

}  // namespace

TEST_CASE("json report for a violated constraint") {
  auto p = fixture("01_scd1.policy");
  auto j = nlohmann::json::parse(emit_report(verdicts_of(p), ReportFormat::Json, p.name));
  CHECK(j["policy"] == "01_scd1");
  REQUIRE(j["results"].size() == 1);
  const auto& r = j["results"][0];
  CHECK(r["constraint"] == "c1");
  CHECK(r["family"] == "scd1");
  CHECK(r["satisfied"] == false);
  CHECK_FALSE(r.contains("undecided"));
  REQUIRE(r["witnesses"].size() == 1);
  CHECK(r["witnesses"][0]["entity"] == "u3");
  CHECK(r["witnesses"][0]["matched_roles"] == nlohmann::json::array({"r1"}));
  CHECK(r["witnesses"][0]["detail"]["kind"] == "not_enough_roles");
  CHECK(j["summary"]["total"] == 1);
  CHECK(j["summary"]["violated"] == 1);
}

TEST_CASE("json report key order is fixed") {
  auto p = fixture("04a_scdcob1_named.policy");
  const std::string out = emit_report(verdicts_of(p), ReportFormat::Json, p.name);
  CHECK(out.find("\"policy\"") < out.find("\"results\""));
  CHECK(out.find("\"results\"") < out.find("\"summary\""));
  CHECK(out.find("\"constraint\"") < out.find("\"family\""));
  CHECK(out.find("\"family\"") < out.find("\"satisfied\""));
  CHECK(out.find("\"satisfied\"") < out.find("\"witnesses\""));
  auto j = nlohmann::json::parse(out);
  const auto& d = j["results"][0]["witnesses"][0]["detail"];
  CHECK(d["kind"] == "missing_common_items");
  CHECK(d["objects"] == nlohmann::json::array({"ob1"}));
  CHECK(d["missing_objects"] == nlohmann::json::array({"ob2"}));
}

TEST_CASE("empty and all-satisfied reports") {
  auto j = nlohmann::json::parse(emit_report({}, ReportFormat::Json, "none"));
  CHECK(j["results"].empty());
  CHECK(j["summary"]["total"] == 0);
  CHECK(j["summary"]["violated"] == 0);

  auto p = fixture("02_scd2.policy");
  auto k = nlohmann::json::parse(emit_report(verdicts_of(p), ReportFormat::Json, p.name));
  CHECK(k["summary"]["violated"] == 0);
}

TEST_CASE("reports are deterministic") {
  for (const auto& path : cdrbac::testing::worked_fixture_paths()) {
    auto p = must_parse(cdrbac::testing::read_text(path));
    for (auto fmt : {ReportFormat::Text, ReportFormat::Json}) {
      CHECK(emit_report(verdicts_of(p), fmt, "x") == emit_report(verdicts_of(p), fmt, "x"));
    }
  }
}

TEST_CASE("undecided verdicts carry their note") {
  Verdict v{"c", "scd3", false, true, "undecided: over capacity: too many", {}};
  auto j = nlohmann::json::parse(emit_report({v}, ReportFormat::Json, "p"));
  CHECK(j["results"][0]["undecided"] == true);
  CHECK(j["results"][0]["note"] == "undecided: over capacity: too many");
  CHECK(j["summary"]["violated"] == 0);
  CHECK(emit_report({v}, ReportFormat::Text, "p").find("undecided") != std::string::npos);
}

TEST_CASE("explain shows common objects against the requirement") {
  auto p = fixture("04a_scdcob1_named.policy");
  const std::string text = explain(p, "c1", true);
  CHECK(text.find("user u1: matched {r1, r2, r3} (3); common objects {ob1}, missing {ob2}") != std::string::npos);
  CHECK(text.find("oracle: agree") != std::string::npos);
  CHECK_THROWS(explain(p, "nope", false));
}

TEST_CASE("explain verifies against the oracle on every worked fixture") {
  for (const auto& path : cdrbac::testing::worked_fixture_paths()) {
    auto p = must_parse(cdrbac::testing::read_text(path));
    for (const auto& c : p.constraints) {
      CAPTURE(path);
      CHECK(explain(p, c.id, true).find("oracle: agree") != std::string::npos);
    }
  }
}

TEST_CASE("trace report lists outcomes") {
  auto p = must_parse("role a\nrole b\nrole c\nuser u\nconstraint scd1 roles=[a,b,c] n=2\n", "t");
  auto t = parse_trace("txn one { assign u a }", p.state);
  REQUIRE(t.ok());
  auto result = replay(p, *t.transactions, ReplayMode::Audit);
  auto j = nlohmann::json::parse(emit_trace_report(result, ReplayMode::Audit, ReportFormat::Json, p.name));
  CHECK(j["mode"] == "audit");
  CHECK(j["transactions"][0]["outcome"] == "committed_with_violations");
  CHECK(j["transactions"][0]["violations"].size() == 1);
  CHECK(emit_trace_report(result, ReplayMode::Audit, ReportFormat::Text, p.name).find("txn one") !=
        std::string::npos);
}
