#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cdrbac/diagnostic.hpp"
#include "cdrbac/rbac.hpp"

namespace cdrbac {

/// Either a named, nonempty set of items that must be present, or a minimum
/// number of items. Exactly one alternative is ever chosen.
template <class T>
class ItemRequirement {
 public:
  struct AtLeast {
    std::size_t n = 1;
    friend bool operator==(const AtLeast&, const AtLeast&) = default;
  };

  static ItemRequirement named(std::set<T> items) { return ItemRequirement(std::move(items)); }
  static ItemRequirement count(std::size_t n) { return ItemRequirement(AtLeast{n}); }

  bool is_named() const noexcept { return std::holds_alternative<std::set<T>>(value_); }
  const std::set<T>& items() const { return std::get<std::set<T>>(value_); }
  std::size_t min_count() const { return std::get<AtLeast>(value_).n; }

  /// Whether `available` meets the requirement.
  bool met_by(const std::set<T>& available) const {
    if (!is_named()) return available.size() >= min_count();
    for (const auto& x : items()) {
      if (!available.count(x)) return false;
    }
    return true;
  }

  friend bool operator==(const ItemRequirement&, const ItemRequirement&) = default;

 private:
  explicit ItemRequirement(std::set<T> items) : value_(std::move(items)) {}
  explicit ItemRequirement(AtLeast n) : value_(n) {}

  std::variant<std::set<T>, AtLeast> value_;
};

using ObjectRequirement = ItemRequirement<ObjectId>;
using OperationRequirement = ItemRequirement<OperationId>;
using PermissionRequirement = ItemRequirement<Permission>;

enum class CdType { I, II, III };
enum class Scope { Session, User };
enum class ItemMode { Common, Union };
enum class ItemKind { Obs, Ops, ObsOps, Prms };

/// Static separation of duty; view Hierarchical is SSDH.
struct Ssd {
  std::set<RoleId> roles;
  std::size_t n = 2;
  RoleView view = RoleView::Direct;
  friend bool operator==(const Ssd&, const Ssd&) = default;
};

struct Dsd {
  std::set<RoleId> roles;
  std::size_t n = 2;
  friend bool operator==(const Dsd&, const Dsd&) = default;
};

/// Static combination of duty, types I-III.
struct Scd {
  CdType type = CdType::I;
  std::set<RoleId> roles;
  std::size_t n = 1;
  RoleView view = RoleView::Direct;
  friend bool operator==(const Scd&, const Scd&) = default;
};

/// Type I static combination of duty with common or union items.
struct ScdItems {
  ItemMode mode = ItemMode::Common;
  ItemKind kind = ItemKind::Obs;
  std::set<RoleId> roles;
  std::size_t n = 1;
  std::optional<ObjectRequirement> obs;
  std::optional<OperationRequirement> ops;
  std::optional<PermissionRequirement> prms;
  RoleView view = RoleView::Direct;
  friend bool operator==(const ScdItems&, const ScdItems&) = default;
};

/// Dynamic combination of duty, per session or per user.
struct Dcd {
  Scope scope = Scope::Session;
  CdType type = CdType::I;
  std::set<RoleId> roles;
  std::size_t n = 1;
  friend bool operator==(const Dcd&, const Dcd&) = default;
};

using ConstraintBody = std::variant<Ssd, Dsd, Scd, ScdItems, Dcd>;

struct Constraint {
  std::string id;
  ConstraintBody body;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// The dependent/conflicting role set of any constraint.
const std::set<RoleId>& constraint_roles(const Constraint& c);
std::size_t constraint_threshold(const Constraint& c);

/// Policy keyword for the constraint, e.g. "scdhuobop1" or "dcds3".
std::string family_keyword(const Constraint& c);

/// Inverse of family_keyword: fills in every field the keyword fixes
/// (family, type, mode, kind, scope, view). nullopt for unknown keywords.
std::optional<ConstraintBody> body_for_keyword(const std::string& keyword);

/// All keywords accepted in policy files, in a stable order.
const std::vector<std::string>& all_family_keywords();

/// Empty iff the bounds, requirement shape and role references are valid.
Diagnostics validate_constraint(const Constraint& c, const RbacState& state);

}  // namespace cdrbac
