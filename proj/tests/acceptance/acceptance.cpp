// One line per acceptance criterion: "PASS name: detail" or "FAIL name: detail".
// Exits nonzero when any criterion fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "cdrbac/policy_io.hpp"
#include "cdrbac/subset_solver.hpp"
#include "cdrbac/trace.hpp"
#include "cli.hpp"
#include "policy_text.hpp"
#include "properties.hpp"
#include "worked_fixtures.hpp"

namespace fs = std::filesystem;
using namespace cdrbac;
using namespace cdrbac::testing;

namespace {

constexpr std::size_t kMinWorkedAssertions = 25;
constexpr double kWorkedSeconds = 1.0;
constexpr std::size_t kRandomStates = 1000;
constexpr double kDifferentialSeconds = 60.0;
constexpr std::size_t kMaxSolverEntitiesBrute = 8;
constexpr std::size_t kSolverRounds = 2000;
constexpr double kSolverSeconds = 1.0;
constexpr std::size_t kMalformedInputs = 10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Result {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const Result& r) {
  std::cout << (r.pass ? "PASS " : "FAIL ") << name << ": " << r.detail << "\n";
  if (!r.pass) ++failures;
}

std::string first_failure(const Tally& t) { return t.failures.empty() ? "" : " (first: " + t.failures.front() + ")"; }

Result worked_examples() {
  const auto t0 = Clock::now();
  std::size_t assertions = 0, failed = 0;
  std::string first;
  for (const auto& path : worked_fixture_paths()) {
    auto check = check_worked_fixture(path);
    assertions += check.assertions;
    failed += check.failures.size();
    if (first.empty() && !check.failures.empty()) first = check.name + ": " + check.failures.front();
  }
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << assertions << " assertions, " << failed << " failed, " << secs << " s";
  if (!first.empty()) os << " (first: " << first << ")";
  return {failed == 0 && assertions >= kMinWorkedAssertions && secs < kWorkedSeconds, os.str()};
}

Result differential_run(const DifferentialTally& d, double secs) {
  std::ostringstream os;
  os << kRandomStates << " states x " << all_family_keywords().size() << " families, " << d.agreement.checks
     << " comparisons, " << d.agreement.failed << " mismatches, " << secs << " s" << first_failure(d.agreement);
  return {d.agreement.ok() && secs < kDifferentialSeconds, os.str()};
}

Result implication_run() {
  const Tally t = implications(2, kRandomStates);
  std::ostringstream os;
  os << t.checks << " implication checks, " << t.failed << " violated" << first_failure(t);
  return {t.ok(), os.str()};
}

Result witness_run(const DifferentialTally& d) {
  const Tally parts = partitions_vs_enumeration(3, kSolverRounds, kMaxSolverEntitiesBrute);
  std::ostringstream os;
  os << d.witnesses.checks << " witnesses, " << d.witnesses.failed << " rejected; " << parts.checks
     << " partition searches, " << parts.failed << " refuted" << first_failure(d.witnesses) << first_failure(parts);
  return {d.witnesses.ok() && parts.ok(), os.str()};
}

ContributionVector random_masks(std::mt19937_64& rng, std::size_t entities, std::size_t roles, double density) {
  std::vector<std::string> names;
  std::vector<RoleMask> masks;
  for (std::size_t i = 0; i < entities; ++i) {
    names.push_back("e" + std::to_string(i));
    RoleMask m = 0;
    for (std::size_t r = 0; r < roles; ++r) {
      if (std::bernoulli_distribution(density)(rng)) m |= RoleMask{1} << r;
    }
    masks.push_back(m);
  }
  return ContributionVector::from_masks(names, masks, roles);
}

Result solver_speed() {
  std::mt19937_64 rng(5);
  double worst_partition = 0, worst_unions = 0;
  std::size_t sat = 0, unsat = 0;
  for (std::size_t round = 0; round < 20; ++round) {
    const auto cv = random_masks(rng, 15, 12, 0.15 + 0.02 * static_cast<double>(round % 10));
    const std::size_t n = 1 + round % 6;
    const auto t0 = Clock::now();
    const auto got = find_partition(cv, n);
    worst_partition = std::max(worst_partition, seconds_since(t0));
    ++(got.witness ? sat : unsat);
  }
  // Adversarial shapes: one distinct role per entity, so no union crosses n
  // early and no two entities can stand in for each other.
  std::vector<std::string> names;
  std::vector<RoleMask> singletons;
  for (std::size_t i = 0; i < 20; ++i) {
    names.push_back("e" + std::to_string(i));
    singletons.push_back(RoleMask{1} << i);
  }
  std::vector<RoleMask> wrapped(15);
  for (std::size_t i = 0; i < 15; ++i) wrapped[i] = RoleMask{1} << (i % 12);
  const auto wrapped_cv =
      ContributionVector::from_masks(std::vector<std::string>(names.begin(), names.begin() + 15), wrapped, 12);
  for (std::size_t n : {1, 2, 3, 5, 6}) {
    const auto t0 = Clock::now();
    const auto got = find_partition(wrapped_cv, n);
    worst_partition = std::max(worst_partition, seconds_since(t0));
    ++(got.witness ? sat : unsat);
  }
  {
    const auto cv = ContributionVector::from_masks(names, singletons, 20);
    const auto t0 = Clock::now();
    (void)reachable_unions(cv, std::nullopt, 10);
    worst_unions = std::max(worst_unions, seconds_since(t0));
  }
  for (std::size_t round = 0; round < 5; ++round) {
    const auto cv = random_masks(rng, 20, 20, 0.1 + 0.05 * static_cast<double>(round));
    const auto t0 = Clock::now();
    (void)reachable_unions(cv, std::nullopt, 10);
    worst_unions = std::max(worst_unions, seconds_since(t0));
  }
  std::ostringstream os;
  os << "worst find_partition(15 entities, 12 roles) " << worst_partition << " s over " << sat << " sat / "
     << unsat << " unsat; worst reachable_unions(20 entities, 20 roles, cap 10) " << worst_unions << " s";
  return {worst_partition < kSolverSeconds && worst_unions < kSolverSeconds, os.str()};
}

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Result io_round_trip() {
  std::size_t fixpoints = 0, total = 0;
  std::vector<std::string> problems;
  for (const auto& path : worked_fixture_paths()) {
    ++total;
    const Policy p = must_parse(read_text(path));
    const std::string once = write_policy(p);
    const auto again = parse_policy(once);
    if (again.ok() && again.policy->state == p.state && again.policy->constraints == p.constraints &&
        write_policy(*again.policy) == once)
      ++fixpoints;
    else
      problems.push_back("round trip " + path);
  }

  // Each bad line lands at a seeded position of a valid policy and must be
  // the only line blamed.
  const std::vector<std::string> bad_lines = {
      "frobnicate r1",
      "role 9lives",
      "assign ghost r1",
      "constraint scd1 roles=[r1,r2 n=1",
      "constraint scd9 roles=[r1,r2] n=1",
      "constraint scd1 roles=[nope1,nope2] n=1",
      "perm r1 op1",
      "object ob@",
      "constraint scdcob1 roles=[r1,r2] n=1 obs=[ob1] obn=1",
      "user",
  };
  const std::string base_path = fixture_dir() + "/worked/04a_scdcob1_named.policy";
  std::vector<std::string> lines;
  {
    std::istringstream in(read_text(base_path));
    for (std::string l; std::getline(in, l);) lines.push_back(l);
  }
  std::size_t located = 0;
  for (std::size_t k = 0; k < kMalformedInputs; ++k) {
    std::mt19937_64 rng(100 + k);
    const std::size_t at = std::uniform_int_distribution<std::size_t>(0, lines.size())(rng);
    std::string text;
    for (std::size_t i = 0; i <= lines.size(); ++i) {
      if (i == at) text += bad_lines[k] + "\n";
      if (i < lines.size()) text += lines[i] + "\n";
    }
    const fs::path file = fs::temp_directory_path() / ("cdrbac_malformed_" + std::to_string(k) + ".policy");
    std::ofstream(file) << text;
    const CliRun r = cli_run({"check", file.string()});
    fs::remove(file);
    const std::string want = ":" + std::to_string(at + 1) + ":";
    bool only_that_line = r.code == 2 && r.out.empty();
    std::size_t errors = 0;
    std::istringstream err(r.err);
    for (std::string l; std::getline(err, l);) {
      if (l.find(": error:") == std::string::npos) continue;
      ++errors;
      only_that_line = only_that_line && l.find(want) != std::string::npos;
    }
    if (only_that_line && errors > 0)
      ++located;
    else
      problems.push_back("malformed '" + bad_lines[k] + "' at line " + std::to_string(at + 1) + " got exit " +
                         std::to_string(r.code) + ": " + r.err);
  }

  std::size_t stable = 0, reports = 0;
  auto twice = [&](const std::vector<std::string>& args) {
    ++reports;
    const CliRun a = cli_run(args), b = cli_run(args);
    if (a.out == b.out && !a.out.empty())
      ++stable;
    else
      problems.push_back("unstable json for " + args[1]);
  };
  for (const auto& path : worked_fixture_paths()) twice({"check", path, "--format", "json"});
  const std::string traces = fixture_dir() + "/traces/";
  twice({"trace", traces + "one_of_three.policy", traces + "one_of_three.trace", "--format", "json"});

  std::ostringstream os;
  os << fixpoints << "/" << total << " round-trip fixpoints, " << located << "/" << kMalformedInputs
     << " malformed inputs located with exit 2, " << stable << "/" << reports << " json reports byte-identical";
  if (!problems.empty()) os << " (first: " << problems.front() << ")";
  return {problems.empty(), os.str()};
}

Result trace_modes() {
  const std::string dir = fixture_dir() + "/traces/";
  const Policy p = must_parse(read_text(dir + "one_of_three.policy"));
  const auto t = parse_trace(read_text(dir + "one_of_three.trace"), p.state);
  if (!t.ok()) return {false, "trace fixture does not parse"};
  const auto enforce = replay(p, *t.transactions, ReplayMode::Enforce);
  const auto audit = replay(p, *t.transactions, ReplayMode::Audit);
  std::size_t logged = 0;
  for (const auto& txn : audit.transactions) {
    for (const auto& v : txn.violations) logged += v.witnesses.size();
  }
  const bool rolled_back = enforce.final_state == p.state && enforce.transactions.size() == 1 &&
                           enforce.transactions[0].outcome == TxnOutcome::RolledBack;
  const bool kept = audit.transactions.size() == 1 &&
                    audit.transactions[0].outcome == TxnOutcome::CommittedWithViolations &&
                    !(audit.final_state == p.state);
  std::ostringstream os;
  os << "enforce " << (rolled_back ? "restored the base state" : "did not restore the base state") << "; audit "
     << (kept ? "kept the transaction" : "did not keep the transaction") << " and logged " << logged
     << " violation(s)";
  return {rolled_back && kept && logged == 1, os.str()};
}

}  // namespace

int main() {
  try {
    report("worked-examples", worked_examples());

    const auto t0 = Clock::now();
    const DifferentialTally diff = differential(1, kRandomStates);
    const double diff_secs = seconds_since(t0);
    report("oracle-differential", differential_run(diff, diff_secs));
    report("implications", implication_run());
    report("witness-soundness", witness_run(diff));
    report("solver-performance", solver_speed());
    report("policy-io", io_round_trip());
    report("trace-enforcement", trace_modes());
  } catch (const std::exception& e) {
    std::cout << "FAIL acceptance run aborted: " << e.what() << "\n";
    return 1;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
