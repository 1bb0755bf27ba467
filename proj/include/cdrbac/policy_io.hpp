#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdrbac/constraint.hpp"
#include "cdrbac/diagnostic.hpp"
#include "cdrbac/rbac.hpp"

namespace cdrbac {

struct Policy {
  std::string name;
  RbacState state;
  std::vector<Constraint> constraints;

  friend bool operator==(const Policy&, const Policy&) = default;
};

struct PolicyParse {
  std::optional<Policy> policy;
  /// Errors and warnings in source order. `policy` is set iff there are no errors.
  Diagnostics diagnostics;

  bool ok() const noexcept { return policy.has_value(); }
};

/// Parses the line-oriented policy format:
///
///   user ID | role ID | object ID | op ID
///   perm ROLE OP OB | assign USER ROLE | inherit SENIOR JUNIOR
///   session SID USER | activate SID ROLE
///   constraint KIND [id=ID] roles=[R,...] n=K [obs=[..]|obn=K] [ops=[..]|opn=K]
///                   [prms=[(OB,OP),...]|prmn=K]
///
/// `#` starts a comment. Declarations may appear in any order. Constraints
/// without an id are labelled c1, c2, ... by position. Every line is checked
/// so one run reports all errors.
PolicyParse parse_policy(std::string_view text, std::string name = "policy");

/// Canonical text form. parse_policy(write_policy(p)) reproduces p's state
/// and constraints exactly.
std::string write_policy(const Policy& p);

/// One `constraint ...` statement with every key explicit, no newline.
std::string write_constraint(const Constraint& c);

}  // namespace cdrbac
