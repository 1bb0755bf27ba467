#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cdrbac/errors.hpp"
#include "cdrbac/evaluate.hpp"
#include "cdrbac/policy_io.hpp"
#include "cdrbac/report.hpp"
#include "cdrbac/trace.hpp"

namespace cdrbac::cli {
namespace {

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kFailed = 2;

std::optional<std::string> read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << path << ": error: cannot read file\n";
    return std::nullopt;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_diagnostics(const Diagnostics& ds, const std::string& path, std::ostream& err) {
  for (const auto& d : ds) err << format_diagnostic(d, path);
}

std::optional<Policy> load_policy(const std::string& path, std::ostream& err) {
  auto text = read_file(path, err);
  if (!text) return std::nullopt;
  auto parsed = parse_policy(*text, std::filesystem::path(path).stem().string());
  print_diagnostics(parsed.diagnostics, path, err);
  return std::move(parsed.policy);
}

int verdict_code(const std::vector<Verdict>& vs) {
  int code = kOk;
  for (const auto& v : vs) {
    if (v.undecided) return kFailed;
    if (!v.satisfied) code = kViolated;
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evaluate separation- and combination-of-duty constraints over RBAC policies", "cdrbac"};
  app.require_subcommand(1);

  std::string policy_path, trace_path, constraint_id;
  std::string format = "text";
  std::string mode = "enforce";
  std::size_t max_entities = kDefaultMaxEntities;
  bool verify = false;
  const std::map<std::string, int> formats{{"text", 0}, {"json", 1}};

  auto* check = app.add_subcommand("check", "evaluate every constraint of a policy");
  check->add_option("policy", policy_path, "policy file")->required();
  auto* trace = app.add_subcommand("trace", "replay transactions against a policy");
  trace->add_option("policy", policy_path, "policy file")->required();
  trace->add_option("trace", trace_path, "trace file")->required();
  trace->add_option("--mode", mode, "enforce (roll back violating transactions) or audit")
      ->check(CLI::IsMember({"enforce", "audit"}));
  auto* expl = app.add_subcommand("explain", "show how one constraint is evaluated");
  expl->add_option("policy", policy_path, "policy file")->required();
  expl->add_option("constraint", constraint_id, "constraint id")->required();
  expl->add_flag("--verify", verify, "cross-check against the brute-force reference");

  for (auto* sub : {check, trace}) {
    sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  }
  for (auto* sub : {check, trace, expl}) {
    sub->add_option("--max-entities", max_entities, "exact grouping search limit")
        ->check(CLI::Range(std::size_t{1}, kMaxEntitiesCeiling));
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFailed;
  }

  const SolverLimits limits{max_entities};
  const ReportFormat fmt = format == "json" ? ReportFormat::Json : ReportFormat::Text;

  auto policy = load_policy(policy_path, err);
  if (!policy) return kFailed;

  try {
    if (check->parsed()) {
      const auto verdicts = evaluate_all(RbacSnapshot(policy->state), policy->constraints, limits);
      out << emit_report(verdicts, fmt, policy->name);
      return verdict_code(verdicts);
    }
    if (trace->parsed()) {
      auto text = read_file(trace_path, err);
      if (!text) return kFailed;
      auto parsed = parse_trace(*text, policy->state);
      print_diagnostics(parsed.diagnostics, trace_path, err);
      if (!parsed.ok()) return kFailed;
      const ReplayMode rm = mode == "audit" ? ReplayMode::Audit : ReplayMode::Enforce;
      const auto result = replay(*policy, *parsed.transactions, rm, limits);
      out << emit_trace_report(result, rm, fmt, policy->name);
      if (result.any_undecided()) return kFailed;
      return result.any_violation() ? kViolated : kOk;
    }
    const auto it = std::find_if(policy->constraints.begin(), policy->constraints.end(),
                                 [&](const Constraint& c) { return c.id == constraint_id; });
    if (it == policy->constraints.end()) {
      err << policy_path << ": error: no constraint with id '" << constraint_id << "'\n";
      return kFailed;
    }
    out << explain(*policy, constraint_id, verify, limits);
    return verdict_code({evaluate(RbacSnapshot(policy->state), *it, limits)});
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
}

}  // namespace cdrbac::cli
