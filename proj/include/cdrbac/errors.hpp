#pragma once

#include <stdexcept>
#include <string>

namespace cdrbac {

/// A query named an entity the state does not declare.
class LookupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The state breaks one of its structural invariants (a hierarchy cycle, a session role its owner is not assigned).
class StateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An instance is larger than the exact solvers are configured to decide.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An API was called with arguments that do not belong together.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cdrbac
