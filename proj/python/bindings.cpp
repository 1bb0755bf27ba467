#include <pybind11/pybind11.h>

#include <stdexcept>
#include <string>

#include "cdrbac/errors.hpp"
#include "cdrbac/evaluate.hpp"
#include "cdrbac/policy_io.hpp"
#include "cdrbac/report.hpp"
#include "cdrbac/trace.hpp"

namespace py = pybind11;
using namespace cdrbac;

namespace {

// Carries the formatted diagnostics of input that failed to parse.
class ParseFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string render(const Diagnostics& ds, const std::string& source) {
  std::string out;
  for (const auto& d : ds) out += format_diagnostic(d, source);
  return out;
}

Policy load(const std::string& text, const std::string& name) {
  auto parsed = parse_policy(text, name);
  if (!parsed.ok()) throw ParseFailure(render(parsed.diagnostics, name));
  return std::move(*parsed.policy);
}

SolverLimits limits_for(std::size_t max_entities) {
  if (max_entities < 1 || max_entities > kMaxEntitiesCeiling)
    throw std::invalid_argument("max_entities must be in 1.." + std::to_string(kMaxEntitiesCeiling));
  return SolverLimits{max_entities};
}

ReportFormat format_for(const std::string& f) {
  if (f == "json") return ReportFormat::Json;
  if (f == "text") return ReportFormat::Text;
  throw std::invalid_argument("format must be 'text' or 'json'");
}

std::string check(const std::string& text, const std::string& name, const std::string& format,
                  std::size_t max_entities) {
  const Policy p = load(text, name);
  const auto verdicts = evaluate_all(RbacSnapshot(p.state), p.constraints, limits_for(max_entities));
  return emit_report(verdicts, format_for(format), p.name);
}

std::string trace(const std::string& policy_text, const std::string& trace_text, const std::string& mode,
                  const std::string& name, const std::string& format, std::size_t max_entities) {
  ReplayMode rm;
  if (mode == "enforce")
    rm = ReplayMode::Enforce;
  else if (mode == "audit")
    rm = ReplayMode::Audit;
  else
    throw std::invalid_argument("mode must be 'enforce' or 'audit'");
  const Policy p = load(policy_text, name);
  auto parsed = parse_trace(trace_text, p.state);
  if (!parsed.ok()) throw ParseFailure(render(parsed.diagnostics, name + ".trace"));
  const auto result = replay(p, *parsed.transactions, rm, limits_for(max_entities));
  return emit_trace_report(result, rm, format_for(format), p.name);
}

std::string explain_constraint(const std::string& text, const std::string& id, bool verify,
                               const std::string& name, std::size_t max_entities) {
  return explain(load(text, name), id, verify, limits_for(max_entities));
}

std::string canonical(const std::string& text, const std::string& name) { return write_policy(load(text, name)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Separation and combination of duty checks for RBAC policies.";

  py::register_exception<ParseFailure>(m, "ParseError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const LookupError& e) {
      PyErr_SetString(PyExc_KeyError, e.what());
    } catch (const CapacityError& e) {
      PyErr_SetString(PyExc_OverflowError, e.what());
    }
  });

  m.def("check", &check, py::arg("policy"), py::arg("name") = "policy", py::arg("format") = "json",
        py::arg("max_entities") = kDefaultMaxEntities,
        "Evaluate every constraint of a policy text and return the report.");
  m.def("trace", &trace, py::arg("policy"), py::arg("trace"), py::arg("mode") = "enforce",
        py::arg("name") = "policy", py::arg("format") = "json", py::arg("max_entities") = kDefaultMaxEntities,
        "Replay a trace against a policy and return the replay report.");
  m.def("explain", &explain_constraint, py::arg("policy"), py::arg("constraint_id"), py::arg("verify") = false,
        py::arg("name") = "policy", py::arg("max_entities") = kDefaultMaxEntities,
        "Describe how one constraint is decided.");
  m.def("canonical", &canonical, py::arg("policy"), py::arg("name") = "policy",
        "Rewrite a policy text in canonical form.");
  m.attr("DEFAULT_MAX_ENTITIES") = kDefaultMaxEntities;
}
