#pragma once

#include <cstddef>

#include "cdrbac/constraint.hpp"
#include "cdrbac/rbac.hpp"
#include "cdrbac/verdict.hpp"

namespace cdrbac::oracle {

// Brute-force evaluation of every constraint family straight from the
// defining quantifiers: power sets for helper sets, all set partitions for
// Type III, all witness subsets for count-form object/operation checks. It
// shares no code with the engine beyond the data types, and works on the raw
// RbacState with its own hierarchy closure.
//
// Interpretations shared with the engine (and nowhere else):
//   * Type III blocks may contribute zero dependent roles (also for SCD).
//   * Count-form ObsOps: some set of at least obn combined objects each
//     carries the required operations.

inline constexpr std::size_t kMaxPopulation = 10;
inline constexpr std::size_t kMaxRoles = 10;
inline constexpr std::size_t kMaxWitnessObjects = 16;

/// Throws CapacityError when the constraint's population (users or sessions)
/// or |rs| exceeds the enumeration bounds above.
Verdict oracle_eval(const RbacState& state, const Constraint& c);

/// Whether the witness substitutes into c's defining formula as claimed: a
/// per-entity witness really violates, NoValidPartition really has no
/// partition, and SatisfyingPartition really is a valid partition. Throws
/// UsageError if the witness belongs to another constraint or its kind does
/// not fit c's family.
bool verify_witness(const RbacState& state, const Constraint& c, const Witness& w);

/// Number of set partitions enumerated by the last Type III evaluation in
/// this thread; exposed for tests of the enumeration itself.
std::size_t last_partition_count();

}  // namespace cdrbac::oracle
