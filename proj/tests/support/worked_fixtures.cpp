#include "worked_fixtures.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cdrbac/evaluate.hpp"
#include "cdrbac/policy_io.hpp"

namespace cdrbac::testing {

std::string fixture_dir() { return CDRBAC_FIXTURE_DIR; }

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> worked_fixture_paths() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(fixture_dir() + "/worked")) {
    if (e.path().extension() == ".policy") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

FixtureCheck check_worked_fixture(const std::string& path) {
  FixtureCheck out;
  out.name = std::filesystem::path(path).stem().string();
  const std::string text = read_text(path);
  auto parsed = parse_policy(text, out.name);
  if (!parsed.ok()) {
    out.failures.push_back("does not parse: " + parsed.diagnostics.front().message);
    return out;
  }
  std::map<std::string, Verdict> verdicts;
  for (auto& v : evaluate_all(RbacSnapshot(parsed.policy->state), parsed.policy->constraints))
    verdicts.emplace(v.constraint_id, std::move(v));

  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    if (line.rfind("# expect ", 0) != 0) continue;
    std::istringstream words(line.substr(9));
    std::string id, what;
    words >> id >> what;
    std::vector<std::string> entities;
    bool by = false;
    for (std::string w; words >> w;) {
      if (w == "by" && entities.empty() && !by) {
        by = true;
        continue;
      }
      entities.push_back(w);
    }
    auto it = verdicts.find(id);
    if (it == verdicts.end()) {
      out.failures.push_back("no constraint '" + id + "'");
      continue;
    }
    const Verdict& v = it->second;
    std::set<std::string> flagged;
    for (const auto& w : v.witnesses) {
      if (w.entity && !v.satisfied) flagged.insert(w.entity->id);
    }
    auto fail = [&](const std::string& msg) { out.failures.push_back(id + ": " + msg); };

    if (what == "satisfied" || what == "violated") {
      const bool want = what == "satisfied";
      ++out.assertions;
      if (v.satisfied != want || v.undecided) fail("expected " + what);
      if (by) {
        for (const auto& e : entities) {
          ++out.assertions;
          if (!flagged.count(e)) fail("expected " + e + " to be flagged");
        }
        if (flagged.size() != entities.size()) fail("unexpected extra flagged entities");
      }
    } else if (what == "clear") {
      for (const auto& e : entities) {
        ++out.assertions;
        if (flagged.count(e)) fail("expected " + e + " not to be flagged");
      }
    } else {
      fail("unknown expectation '" + what + "'");
    }
  }
  return out;
}

}  // namespace cdrbac::testing
