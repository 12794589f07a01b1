#include <cmath>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"
#include "support/cohorts.hpp"

using namespace hoplite;
using namespace cohorts;
using Catch::Approx;

TEST_CASE("distance matches a direct computation") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 100; ++k) {
    const auto pr = randomPair(rng, false, false);
    double one = 0.0, two = 0.0;
    for (std::size_t g = 0; g < pr.a.subCounts.size(); ++g)
      for (std::size_t p = 0; p < pr.a.subCounts[g].size(); ++p) {
        const double d = pr.a.subCounts[g][p] - pr.b.subCounts[g][p];
        one += pr.weights[g] * std::abs(d);
        two += pr.weights[g] * d * d;
      }
    CHECK(normDistance(pr.a, pr.b, CohortLevel::SubType, Norm::One, pr.weights) == Approx(one).epsilon(1e-12));
    CHECK(normDistance(pr.a, pr.b, CohortLevel::SubType, Norm::Two, pr.weights) ==
          Approx(std::sqrt(two)).epsilon(1e-12));
  }
}

TEST_CASE("1-norm at both levels agrees when sub-type shifts share a sign") {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 1000; ++k) {
    const auto pr = randomPair(rng, true, false);
    const double type = normDistance(pr.a, pr.b, CohortLevel::Type, Norm::One, pr.weights);
    const double sub = normDistance(pr.a, pr.b, CohortLevel::SubType, Norm::One, pr.weights);
    CHECK(std::abs(type - sub) <= 1e-9 * (1.0 + sub));
  }
}

TEST_CASE("1-norm at the type level never exceeds the sub-type level") {
  std::mt19937_64 rng(3);
  int strict = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto pr = randomPair(rng, false, false);
    const double type = normDistance(pr.a, pr.b, CohortLevel::Type, Norm::One, pr.weights);
    const double sub = normDistance(pr.a, pr.b, CohortLevel::SubType, Norm::One, pr.weights);
    CHECK(type <= sub + 1e-9 * (1.0 + sub));
    if (type < sub - 1e-6) ++strict;
  }
  CHECK(strict > 100);
}

TEST_CASE("2-norm at the sub-type level is bounded by the type level under a shared mix") {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 1000; ++k) {
    const auto pr = randomPair(rng, false, true);
    const double type = normDistance(pr.a, pr.b, CohortLevel::Type, Norm::Two, pr.weights);
    const double sub = normDistance(pr.a, pr.b, CohortLevel::SubType, Norm::Two, pr.weights);
    CHECK(sub <= type + 1e-9 * (1.0 + type));
  }
}

TEST_CASE("distance rejects cohorts of different shape") {
  CohortResult a, b;
  a.typeCounts = {1, 2};
  b.typeCounts = {1};
  CHECK_THROWS_AS(normDistance(a, b, CohortLevel::Type, Norm::One), ValidationError);
}
