#include <cmath>

#include "catch_amalgamated.hpp"
#include "support/fixtures.hpp"

using namespace hoplite;
using Catch::Approx;

TEST_CASE("generation is deterministic per seed") {
  CHECK(generateInstance(42) == generateInstance(42));
  CHECK_FALSE(generateInstance(42) == generateInstance(43));
}

TEST_CASE("generated instances respect the requested scale") {
  const GeneratorScale scale;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto b = generateInstance(seed, scale);
    CHECK(b.catalog.typeCount() == 21);
    CHECK(b.config.wards.size() == 30);
    CHECK(b.config.icuBeds == 20);
    CHECK(b.config.theatres == 21);
    for (const auto& w : b.config.wards) {
      CHECK(w.beds >= 4);
      CHECK(w.beds <= 24);
    }
    for (const auto& t : b.catalog.types) {
      CHECK(t.subTypes.size() >= 2);
      CHECK(t.subTypes.size() <= 51);
      for (const auto& s : t.subTypes) {
        CHECK(s.profile.tSurgery >= 1.0);
        CHECK(s.profile.tSurgery <= 8.0);
        CHECK_FALSE(s.wardOptions.empty());
        CHECK(s.wardOptions.size() <= 3);
      }
    }
    REQUIRE_NOTHROW(b.catalog.validate(b.config));
    REQUIRE_NOTHROW(validateMix(*b.mix, b.catalog, true, true));
    REQUIRE_NOTHROW(b.targets->validate(b.catalog));
    CHECK(b.targets->consistent() == *b.targets);
    CHECK(b.sessions->unassigned(computeSessions(fixtures::weekly(1, b.config.theatres))) == 0.0);
  }
}

TEST_CASE("unrounded generation keeps exact mixes") {
  GeneratorScale scale;
  scale.roundValues = false;
  scale.subsMax = 5;
  const auto b = generateInstance(5, scale);
  REQUIRE_NOTHROW(validateMix(*b.mix, b.catalog, true, true));
}

TEST_CASE("scale is validated") {
  GeneratorScale scale;
  scale.subsMin = 4;
  scale.subsMax = 3;
  CHECK_THROWS_AS(generateInstance(1, scale), ValidationError);
  scale = {};
  scale.types = 0;
  CHECK_THROWS_AS(generateInstance(1, scale), ValidationError);
}

TEST_CASE("full-size instances solve") {
  const auto b = generateInstance(7);
  AssessmentSpec s;
  s.mss = fixtures::weekly(1, b.config.theatres);
  s.mix = *b.mix;
  const auto c = assessCapacity(b.config, b.catalog, s);
  CHECK(c.total > 0);
  for (const auto& r : c.report.rows) CHECK(r.usedHours <= r.availableHours + 1e-7 * (1 + r.availableHours));
}
