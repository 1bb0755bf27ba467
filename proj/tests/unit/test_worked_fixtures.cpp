#include <doctest.h>

#include "worked_fixtures.hpp"

TEST_CASE("worked fixtures reproduce their stated verdicts") {
  const auto paths = cdrbac::testing::worked_fixture_paths();
  REQUIRE(paths.size() >= 25);
  std::size_t assertions = 0;
  for (const auto& path : paths) {
    auto check = cdrbac::testing::check_worked_fixture(path);
    CAPTURE(check.name);
    for (const auto& f : check.failures) FAIL_CHECK(f);
    assertions += check.assertions;
  }
  CHECK(assertions >= 25);
}
