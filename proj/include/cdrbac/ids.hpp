#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace cdrbac {

/// Identifier tagged with the entity kind it names, so a user id cannot be
/// passed where a role id is expected.
template <class Tag>
class Id {
 public:
  Id() = default;
  explicit Id(std::string value) : value_(std::move(value)) {}
  explicit Id(std::string_view value) : value_(value) {}
  explicit Id(const char* value) : value_(value) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend bool operator==(const Id&, const Id&) = default;
  friend std::strong_ordering operator<=>(const Id& a, const Id& b) {
    return a.value_.compare(b.value_) <=> 0;
  }
  friend std::ostream& operator<<(std::ostream& os, const Id& id) {
    return os << id.value_;
  }

 private:
  std::string value_;
};

using UserId = Id<struct UserTag>;
using RoleId = Id<struct RoleTag>;
using ObjectId = Id<struct ObjectTag>;
using OperationId = Id<struct OperationTag>;
using SessionId = Id<struct SessionTag>;

/// An approval to perform one operation on one object.
struct Permission {
  OperationId op;
  ObjectId ob;

  friend bool operator==(const Permission&, const Permission&) = default;
  friend auto operator<=>(const Permission& a, const Permission& b) {
    // Objects first, matching the (ob, op) notation used in policy files.
    if (auto c = a.ob <=> b.ob; c != 0) return c;
    return a.op <=> b.op;
  }
};

}  // namespace cdrbac

template <class Tag>
struct std::hash<cdrbac::Id<Tag>> {
  std::size_t operator()(const cdrbac::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
