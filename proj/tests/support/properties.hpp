#pragma once

// Randomised whole-engine checks shared by the unit and acceptance suites.
// Each returns a tally; an empty `failures` list means every check held.

#include <cstdint>
#include <string>
#include <vector>

namespace cdrbac::testing {

struct Tally {
  std::size_t checks = 0;
  std::size_t failed = 0;
  /// The first few failure descriptions, enough to reproduce them.
  std::vector<std::string> failures;

  void record(bool ok, const std::string& what);
  bool ok() const noexcept { return failed == 0; }
};

struct DifferentialTally {
  /// Engine verdict and flagged entities against the oracle.
  Tally agreement;
  /// Every engine witness substituted back into the defining formula.
  Tally witnesses;
};

/// `states` random states, each checked against every family keyword.
DifferentialTally differential(std::uint64_t seed, std::size_t states);

/// Common => Union, ObsOps => Obs, I => II, III => II, I => III, and
/// Hierarchical == Direct once the hierarchy is empty.
Tally implications(std::uint64_t seed, std::size_t states);

/// find_partition on random masks over at most `max_entities` entities
/// against exhaustive partition enumeration. Unsat answers are the point.
Tally partitions_vs_enumeration(std::uint64_t seed, std::size_t rounds, std::size_t max_entities);

}  // namespace cdrbac::testing
