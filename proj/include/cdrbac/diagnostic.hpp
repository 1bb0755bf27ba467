#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cdrbac {

enum class Severity { Error, Warning };

/// A problem found in a policy, trace or state. line/column are 1-based;
/// 0 means the diagnostic has no source location (e.g. from validate_state).
struct Diagnostic {
  Severity severity = Severity::Error;
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;
  std::string snippet;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

using Diagnostics = std::vector<Diagnostic>;

/// "file:3:7: error: message" followed by the snippet and a caret line.
std::string format_diagnostic(const Diagnostic& d, const std::string& source_name);

}  // namespace cdrbac
