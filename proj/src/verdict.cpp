#include "cdrbac/verdict.hpp"

#include "cdrbac/detail/overloaded.hpp"

namespace cdrbac {

std::string detail_name(const WitnessDetail& d) {
  return std::visit(
      detail::overloaded{
          [](const TooManyRoles&) -> std::string { return "too_many_roles"; },
          [](const NotEnoughRoles&) -> std::string { return "not_enough_roles"; },
          [](const MissingItems& m) -> std::string {
            return m.items.mode == ItemMode::Common ? "missing_common_items" : "missing_union_items";
          },
          [](const NoHelperSet&) -> std::string { return "no_helper_set"; },
          [](const NoValidPartition&) -> std::string { return "no_valid_partition"; },
          [](const SatisfyingPartition&) -> std::string { return "satisfying_partition"; },
      },
      d);
}

}  // namespace cdrbac
