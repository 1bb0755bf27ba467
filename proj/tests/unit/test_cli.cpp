#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "worked_fixtures.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cdrbac::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string worked(const std::string& name) { return cdrbac::testing::fixture_dir() + "/worked/" + name; }
std::string traces(const std::string& name) { return cdrbac::testing::fixture_dir() + "/traces/" + name; }

std::string temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("cdrbac_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

}  // namespace

TEST_CASE("check exit codes follow the verdicts") {
  auto violated = run({"check", worked("01_scd1.policy")});
  CHECK(violated.code == 1);
  CHECK(violated.out.find("user u3") != std::string::npos);
  CHECK(run({"check", worked("02_scd2.policy")}).code == 0);

  auto broken = run({"check", temp_file("broken.policy", "role r1\nconstraint scd1 roles=[r1] n=2\n")});
  CHECK(broken.code == 2);
  CHECK(broken.err.find(":2:12: error:") != std::string::npos);
  CHECK(broken.out.empty());

  CHECK(run({"check", "/nonexistent/policy"}).code == 2);
  CHECK(run({"check"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("json output names the policy after the file") {
  auto r = run({"check", worked("01_scd1.policy"), "--format", "json"});
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["policy"] == "01_scd1");
  CHECK(run({"check", worked("01_scd1.policy"), "--format", "yaml"}).code == 2);
}

TEST_CASE("undecided results exit 2") {
  std::string text = "role a\nrole b\nrole c\n";
  for (int i = 0; i < 4; ++i) text += "user u" + std::to_string(i) + "\nassign u" + std::to_string(i) + " a\n";
  text += "constraint scd3 roles=[a,b,c] n=1\n";
  auto path = temp_file("wide.policy", text);
  CHECK(run({"check", path, "--max-entities", "3"}).code == 2);
  CHECK(run({"check", path}).code == 1);
  CHECK(run({"check", path, "--max-entities", "0"}).code == 2);
  CHECK(run({"check", path, "--max-entities", "65"}).code == 2);
}

TEST_CASE("trace subcommand") {
  CHECK(run({"trace", worked("08_dcdu1_base.policy"), worked("08_dcdu1.trace")}).code == 0);
  auto enforce = run({"trace", traces("one_of_three.policy"), traces("one_of_three.trace")});
  CHECK(enforce.code == 1);
  CHECK(enforce.out.find("rolled_back") != std::string::npos);
  auto audit = run({"trace", traces("one_of_three.policy"), traces("one_of_three.trace"), "--mode", "audit"});
  CHECK(audit.code == 1);
  CHECK(audit.out.find("committed_with_violations") != std::string::npos);
  CHECK(run({"trace", traces("one_of_three.policy"), traces("all_three.trace")}).code == 0);
  auto bad = temp_file("bad.trace", "txn t {\n  activate nowhere r1\n}\n");
  auto r = run({"trace", traces("one_of_three.policy"), bad});
  CHECK(r.code == 2);
  CHECK(r.err.find(":2:3: error:") != std::string::npos);
}

TEST_CASE("explain subcommand") {
  auto r = run({"explain", worked("04a_scdcob1_named.policy"), "c1", "--verify"});
  CHECK(r.code == 1);
  CHECK(r.out.find("common objects {ob1}, missing {ob2}") != std::string::npos);
  CHECK(r.out.find("oracle: agree") != std::string::npos);
  CHECK(run({"explain", worked("02_scd2.policy"), "c1"}).code == 0);
  CHECK(run({"explain", worked("01_scd1.policy"), "missing"}).code == 2);
}
