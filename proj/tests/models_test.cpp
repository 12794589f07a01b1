#include <chrono>
#include <cmath>
#include <vector>

#include "catch_amalgamated.hpp"
#include "support/fixtures.hpp"

using namespace hoplite;
using Catch::Approx;

namespace {

AssessmentSpec specFor(const ProjectBundle& b, CaseMixViewpoint view, int weeks = 1,
                       WardOptionPolicy policy = WardOptionPolicy::All) {
  AssessmentSpec s;
  s.viewpoint = view;
  s.wardOptions = policy;
  s.mss = fixtures::weekly(weeks, b.config.theatres);
  s.mix = *b.mix;
  return s;
}

GeneratorScale smallScale() {
  GeneratorScale s;
  s.types = 4;
  s.subsMin = 1;
  s.subsMax = 4;
  s.wards = 5;
  s.bedsMin = 1;
  s.bedsMax = 8;
  s.icuBeds = 3;
  s.theatres = 3;
  return s;
}

void checkCohortInvariants(const CohortResult& c, const ProjectBundle& b) {
  // Sub-type counts equal their allocations; no resource is over-used.
  const auto counted = countsOf(b.catalog, c.allocation);
  for (std::size_t g = 0; g < c.subCounts.size(); ++g)
    for (std::size_t p = 0; p < c.subCounts[g].size(); ++p)
      if (!b.catalog.types[g].subTypes[p].wardOptions.empty())
        CHECK(std::abs(c.subCounts[g][p] - counted[g][p]) <= 1e-7 * (1 + counted[g][p]));
  for (const auto& r : c.report.rows) CHECK(r.usedHours <= r.availableHours + 1e-7 * (1 + r.availableHours));
}

}  // namespace

TEST_CASE("whole-cohort capacity of the scenario") {
  const auto b = fixtures::scenario();
  const auto start = std::chrono::steady_clock::now();
  const auto c = assessCapacity(b.config, b.catalog, specFor(b, CaseMixViewpoint::WholeCohort));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(seconds < 1.0);
  CHECK(c.total == Approx(113.5277).margin(1e-3));
  const std::vector<double> expected{5.676, 48.817, 20.435, 10.217, 28.382};
  for (std::size_t g = 0; g < 5; ++g) CHECK(c.typeCounts[g] == Approx(expected[g]).margin(1e-2));
  CHECK(c.report.find("Ward 2")->percentUsed == Approx(100.0).margin(1e-4));
  CHECK(c.report.theatre().bottleneck);
  // Case mix holds at the optimum.
  for (std::size_t g = 0; g < 5; ++g) CHECK(c.typeCounts[g] >= b.mix->caseMix[g] / 100.0 * c.total - 1e-7);
  for (std::size_t p = 0; p < 3; ++p)
    CHECK(c.subCounts[2][p] >= b.mix->subMix[2][p] / 100.0 * c.typeCounts[2] - 1e-7);
  checkCohortInvariants(c, b);
}

TEST_CASE("session-partitioned capacity of the scenario") {
  const auto b = fixtures::scenario();
  const auto start = std::chrono::steady_clock::now();
  const auto c = assessCapacity(b.config, b.catalog, specFor(b, CaseMixViewpoint::SessionPartition));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(seconds < 1.0);
  CHECK(c.total == Approx(134.8919).margin(1e-3));
  REQUIRE(c.groups.size() == 5);
  const std::vector<double> hours{20, 172, 72, 36, 100};
  for (std::size_t g = 0; g < 5; ++g) {
    CHECK(c.groups[g].availableHours == Approx(hours[g]));
    CHECK(c.groups[g].percentUsed == Approx(100.0).margin(1e-4));
  }
  checkCohortInvariants(c, b);
}

TEST_CASE("partitioned optimum exceeds the whole-cohort optimum on the scenario") {
  const auto b = fixtures::scenario();
  const auto whole = assessCapacity(b.config, b.catalog, specFor(b, CaseMixViewpoint::WholeCohort));
  const auto part = assessCapacity(b.config, b.catalog, specFor(b, CaseMixViewpoint::SessionPartition));
  CHECK(part.total >= whole.total);
}

TEST_CASE("partitioned optimum can fall below the whole-cohort optimum") {
  // A theatre-heavy type forced up by the count mix while the other type is
  // ward-limited: the per-type theatre cap then costs patients.
  HospitalConfig cfg{0, 1, {{1, "WA", 100}, {2, "WB", 1}}};
  PatientCatalog cat;
  cat.types.push_back({1, "A", {{1, "A-1", {10.0, 0.0, 0.0}, {"WA"}, {}}}});
  cat.types.push_back({2, "B", {{1, "B-1", {1.0, 167.0, 0.0}, {"WB"}, {}}}});
  AssessmentSpec s;
  s.mss = {1, 5, 2, 6.0, 1};  // 60 theatre hours
  s.mix = {{50, 50}, {{100}, {100}}};
  s.viewpoint = CaseMixViewpoint::WholeCohort;
  const auto whole = assessCapacity(cfg, cat, s);
  s.viewpoint = CaseMixViewpoint::SessionPartition;
  const auto part = assessCapacity(cfg, cat, s);
  CHECK(whole.total == Approx(2.0));
  CHECK(part.total == Approx(4.0));
  // B is limited to one patient by its ward. With 12 theatre hours A's half
  // admits 0.6 patients while the whole cohort reaches the ward limit N/2 = 1.
  s.mss.sessionHours = 1.2;
  s.viewpoint = CaseMixViewpoint::WholeCohort;
  const auto wholeTight = assessCapacity(cfg, cat, s);
  s.viewpoint = CaseMixViewpoint::SessionPartition;
  const auto partTight = assessCapacity(cfg, cat, s);
  CHECK(wholeTight.total == Approx(2.0));
  CHECK(partTight.total == Approx(1.0 + 0.6));
  CHECK(partTight.total < wholeTight.total);
}

TEST_CASE("restricting ward options never helps") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto b = generateInstance(seed, smallScale());
    const auto all = assessCapacity(b.config, b.catalog, specFor(b, CaseMixViewpoint::WholeCohort));
    const auto first =
        assessCapacity(b.config, b.catalog, specFor(b, CaseMixViewpoint::WholeCohort, 1, WardOptionPolicy::FirstOnly));
    CHECK(first.total <= all.total + 1e-7);
    checkCohortInvariants(all, b);
    checkCohortInvariants(first, b);
  }
}

TEST_CASE("adding beds never lowers capacity") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto b = generateInstance(seed, smallScale());
    double previous = assessCapacity(b.config, b.catalog, specFor(b, CaseMixViewpoint::WholeCohort)).total;
    for (std::size_t w = 0; w < b.config.wards.size(); ++w) {
      b.config.wards[w].beds += 2;
      const double now = assessCapacity(b.config, b.catalog, specFor(b, CaseMixViewpoint::WholeCohort)).total;
      CHECK(now >= previous - 1e-7);
      previous = now;
    }
  }
}

TEST_CASE("doubling weeks doubles whole-cohort capacity") {
  for (std::uint64_t seed = 100; seed < 150; ++seed) {
    const auto b = generateInstance(seed, smallScale());
    const auto one = assessCapacity(b.config, b.catalog, specFor(b, CaseMixViewpoint::WholeCohort, 1));
    const auto two = assessCapacity(b.config, b.catalog, specFor(b, CaseMixViewpoint::WholeCohort, 2));
    INFO("seed " << seed);
    CHECK(std::abs(two.total - 2.0 * one.total) <= 1e-6);
  }
}

TEST_CASE("minimum counts in the partitioned model") {
  const auto b = fixtures::scenario();
  auto s = specFor(b, CaseMixViewpoint::SessionPartition);
  s.minimums = {0, 0, 0, 0, 20};
  const auto c = assessCapacity(b.config, b.catalog, s);
  CHECK(c.typeCounts[4] >= 20 - 1e-7);
  s.minimums = {0, 0, 0, 0, 1000};
  CHECK_THROWS_AS(assessCapacity(b.config, b.catalog, s), SolveFailure);
}

TEST_CASE("capacity model requires a complete mix") {
  auto b = fixtures::scenario();
  auto s = specFor(b, CaseMixViewpoint::WholeCohort);
  s.mix.subMix[2] = {25, 40, 30};
  CHECK_THROWS_AS(assessCapacity(b.config, b.catalog, s), ValidationError);
}

TEST_CASE("unlimited sub-type makes the model unbounded") {
  HospitalConfig cfg{1, 1, {{1, "W", 1}}};
  PatientCatalog cat;
  cat.types.push_back({1, "Free", {{1, "Free-1", {0.0, 0.0, 0.0}, {}, {}}}});
  AssessmentSpec s;
  s.mss = {1, 5, 2, 4.0, 1};
  s.mix = {{100}, {{100}}};
  try {
    assessCapacity(cfg, cat, s);
    FAIL("expected an unbounded model");
  } catch (const SolveFailure& e) {
    CHECK(e.status() == lp::Status::Unbounded);
    CHECK(std::string(e.what()).find("type 1 (Free) is not limited by any resource") != std::string::npos);
  }
}

TEST_CASE("model dump lists resource rows") {
  const auto b = fixtures::scenario();
  const auto m = buildAdvancedModel(b.config, b.catalog, specFor(b, CaseMixViewpoint::WholeCohort));
  const auto text = m.lp.dump();
  CHECK(text.find("OT: ") != std::string::npos);
  CHECK(text.find("Ward 5: ") != std::string::npos);
  CHECK(text.find("ALL WARDS: ") != std::string::npos);
  CHECK(text.find("casemix[2]: ") != std::string::npos);
}

TEST_CASE("scenario allocation is infeasible in theatre and ward 5") {
  const auto b = fixtures::scenario();
  const auto v = checkFeasibility(b.config, b.catalog, fixtures::weekly(), nullptr, &*b.allocation);
  CHECK_FALSE(v.feasible);
  REQUIRE(v.violations.size() == 2);
  CHECK(v.violations[0].resource == "OT");
  CHECK(v.violations[0].excessHours == Approx(33.3812).margin(1e-4));
  CHECK(v.violations[1].resource == "Ward 5");
  CHECK(v.violations[1].excessHours == Approx(18.7574).margin(1e-4));
}

TEST_CASE("scenario sub-type targets exceed theatre capacity") {
  auto b = fixtures::scenario();
  TargetSet subs;
  subs.subTargets = b.targets->subTargets;
  const auto v = checkFeasibility(b.config, b.catalog, fixtures::weekly(), &subs, nullptr);
  CHECK_FALSE(v.feasible);
  REQUIRE_FALSE(v.violations.empty());
  CHECK(v.violations[0].resource == "OT");
  // Theatre hours the targets need beyond the 400 available.
  const double need = 5 * 1.2 + 5 * 1.25 + 55 * 2.4 + 16 * 6.5 + 20 * 4.56 + 29 * 7.6 + 35 * 3.4 + 53 * 4.1;
  CHECK(v.violations[0].excessHours == Approx(need - 400.0));
}

TEST_CASE("half the optimum is a feasible target") {
  const auto b = fixtures::scenario();
  const auto c = assessCapacity(b.config, b.catalog, specFor(b, CaseMixViewpoint::WholeCohort));
  TargetSet t;
  for (double n : c.typeCounts) t.typeTargets.push_back(n / 2);
  const auto v = checkFeasibility(b.config, b.catalog, fixtures::weekly(), &t, nullptr);
  CHECK(v.feasible);
  REQUIRE(v.cohort);
  for (std::size_t g = 0; g < 5; ++g) CHECK(v.cohort->typeCounts[g] == Approx(t.typeTargets[g]));
}

TEST_CASE("inconsistent type and sub-type pins are rejected") {
  const auto b = fixtures::scenario();
  TargetSet t = *b.targets;
  t.typeTargets[0] = 11;
  CHECK_THROWS_AS(checkFeasibility(b.config, b.catalog, fixtures::weekly(), &t, nullptr), ValidationError);
}

TEST_CASE("allocation checked against pins reports mismatches") {
  const auto b = fixtures::scenario();
  const auto v = checkFeasibility(b.config, b.catalog, fixtures::weekly(), &*b.targets, &*b.allocation);
  CHECK_FALSE(v.feasible);
  CHECK_FALSE(v.mismatches.empty());
  CHECK(v.mismatches[0].rfind("type 1: allocated 7.68, target 10", 0) == 0);
}

TEST_CASE("best fit of sub-type targets matches an independent formulation") {
  const auto b = fixtures::scenario();
  TargetFitSpec spec;
  spec.option = TargetOption::TO2;
  const auto r = bestFitCaseMix(b.config, b.catalog, fixtures::weekly(), *b.targets, spec);
  const double oracleValue = oracle::bestFitOneNorm(b.config, b.catalog, fixtures::weekly(), *b.targets, false);
  CHECK(r.objective > 0);
  CHECK(std::abs(r.objective - oracleValue) <= 1e-5);
  CHECK(r.totalUnmet == Approx(r.objective).margin(1e-7));
  CHECK_FALSE(r.allTargetsMet);
  for (std::size_t g = 0; g < 5; ++g)
    for (std::size_t p = 0; p < r.subUnmet[g].size(); ++p) CHECK(r.subUnmet[g][p] >= -1e-7);
}

TEST_CASE("best fit of type targets matches an independent formulation") {
  const auto b = fixtures::scenario();
  for (int weeks = 1; weeks <= 3; ++weeks) {
    const auto mss = fixtures::weekly(weeks);
    const auto r = bestFitCaseMix(b.config, b.catalog, mss, *b.targets, {});
    const double oracleValue = oracle::bestFitOneNorm(b.config, b.catalog, mss, *b.targets, true);
    INFO("weeks " << weeks);
    CHECK(std::abs(r.objective - oracleValue) <= 1e-5);
  }
}

TEST_CASE("best fit against generated instances matches an independent formulation") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto b = generateInstance(seed, smallScale());
    for (auto option : {TargetOption::TO1, TargetOption::TO2}) {
      TargetFitSpec spec;
      spec.option = option;
      const auto r = bestFitCaseMix(b.config, b.catalog, fixtures::weekly(1, 3), *b.targets, spec);
      const double o =
          oracle::bestFitOneNorm(b.config, b.catalog, fixtures::weekly(1, 3), *b.targets, option == TargetOption::TO1);
      INFO("seed " << seed);
      CHECK(std::abs(r.objective - o) <= 1e-5 * (1 + o));
    }
  }
}

TEST_CASE("targets at a solved optimum are met exactly") {
  const auto b = fixtures::scenario();
  for (auto view : {CaseMixViewpoint::WholeCohort, CaseMixViewpoint::SessionPartition}) {
    const auto c = assessCapacity(b.config, b.catalog, specFor(b, view));
    TargetSet t{c.typeCounts, c.subCounts, {}};
    for (auto option : {TargetOption::TO1, TargetOption::TO2}) {
      TargetFitSpec spec;
      spec.option = option;
      const auto r = bestFitCaseMix(b.config, b.catalog, fixtures::weekly(), t, spec);
      CHECK(std::abs(r.objective) <= 1e-6);
      CHECK(r.totalUnmet <= 1e-6);
      CHECK(r.allTargetsMet);
    }
  }
}

TEST_CASE("zero deviation exactly when the targets are feasible") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto b = generateInstance(seed, smallScale());
    for (double scale : {0.05, 0.5, 5.0}) {
      TargetSet t;
      for (double x : b.targets->typeTargets) t.typeTargets.push_back(x * scale);
      const auto r = bestFitCaseMix(b.config, b.catalog, fixtures::weekly(1, 3), t, {});
      const auto v = checkFeasibility(b.config, b.catalog, fixtures::weekly(1, 3), &t, nullptr);
      INFO("seed " << seed << " scale " << scale);
      CHECK((std::abs(r.objective) <= 1e-6) == v.feasible);
    }
  }
}

TEST_CASE("post-optimization raises throughput past met targets") {
  const auto b = fixtures::scenario();
  TargetSet t;
  t.typeTargets = {2, 10, 5, 3, 5};
  TargetFitSpec spec;
  spec.postOptimizeThroughput = true;
  const auto r = bestFitCaseMix(b.config, b.catalog, fixtures::weekly(), t, spec);
  CHECK(r.allTargetsMet);
  CHECK(r.postOptimized);
  for (std::size_t g = 0; g < 5; ++g) CHECK(r.cohort.typeCounts[g] >= t.typeTargets[g] - 1e-7);
  CHECK(r.cohort.total > 25.0 + 1.0);
}

TEST_CASE("consistency update for both target levels") {
  const auto b = fixtures::scenario();
  TargetSet t = *b.targets;
  t.typeTargets[2] = 10;  // below the sub-type sum 65
  TargetFitSpec spec;
  spec.option = TargetOption::TO3;
  const auto r = bestFitCaseMix(b.config, b.catalog, fixtures::weekly(), t, spec);
  CHECK(r.targets.typeTargets[2] == 65);
  CHECK(r.totalUnmet > 0);
}

TEST_CASE("relative weighting divides by the target") {
  const auto b = fixtures::scenario();
  TargetFitSpec spec;
  spec.relative = true;
  const auto r = bestFitCaseMix(b.config, b.catalog, fixtures::weekly(), *b.targets, spec);
  double expected = 0.0;
  for (std::size_t g = 0; g < 5; ++g) expected += r.typeUnmet[g] / b.targets->typeTargets[g];
  CHECK(r.objective == Approx(expected).margin(1e-7));
}

TEST_CASE("2-norm fits refine with more segments within the chord bound") {
  const auto b = fixtures::scenario();
  TargetFitSpec spec;
  spec.option = TargetOption::TO2;
  spec.norm = Norm::Two;
  spec.segments = 16;
  const auto coarse = bestFitCaseMix(b.config, b.catalog, fixtures::weekly(), *b.targets, spec);
  spec.segments = 64;
  const auto fine = bestFitCaseMix(b.config, b.catalog, fixtures::weekly(), *b.targets, spec);
  CHECK(coarse.errorBound > fine.errorBound);
  CHECK(coarse.objective >= fine.objective - 1e-7);
  CHECK(coarse.objective - fine.objective <= coarse.errorBound + 1e-7);
  // The chord objective over-estimates the true sum of squares by at most the bound.
  double squares = 0.0;
  for (std::size_t g = 0; g < 5; ++g)
    for (double d : fine.subUnmet[g]) squares += d * d;
  CHECK(fine.objective >= squares - 1e-6);
  CHECK(fine.objective <= squares + fine.errorBound + 1e-6);
}

TEST_CASE("2-norm spreads shortfall more evenly than the 1-norm") {
  const auto b = fixtures::scenario();
  TargetFitSpec one, two;
  two.norm = Norm::Two;
  two.segments = 64;
  const auto r1 = bestFitCaseMix(b.config, b.catalog, fixtures::weekly(), *b.targets, one);
  const auto r2 = bestFitCaseMix(b.config, b.catalog, fixtures::weekly(), *b.targets, two);
  auto worst = [](const std::vector<double>& xs) {
    double w = 0.0;
    for (double x : xs) w = std::max(w, x);
    return w;
  };
  CHECK(worst(r2.typeUnmet) <= worst(r1.typeUnmet) + 1e-6);
}
