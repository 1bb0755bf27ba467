#include "cdrbac/diagnostic.hpp"

namespace cdrbac {

std::string format_diagnostic(const Diagnostic& d, const std::string& source_name) {
  std::string out = source_name;
  if (d.line > 0) {
    out += ":" + std::to_string(d.line);
    if (d.column > 0) out += ":" + std::to_string(d.column);
  }
  out += d.severity == Severity::Error ? ": error: " : ": warning: ";
  out += d.message;
  out += "\n";
  if (!d.snippet.empty()) {
    out += "  " + d.snippet + "\n";
    if (d.column > 0) {
      std::string pad;
      // Keep tabs so the caret lines up with the snippet.
      for (std::size_t i = 0; i + 1 < d.column && i < d.snippet.size(); ++i)
        pad += d.snippet[i] == '\t' ? '\t' : ' ';
      out += "  " + pad + "^\n";
    }
  }
  return out;
}

}  // namespace cdrbac
