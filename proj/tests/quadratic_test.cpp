#include <cmath>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"
#include "hoplite/quadratic.hpp"
#include "hoplite/simplex.hpp"
#include "support/pwl_grid.hpp"

using namespace hoplite;
using Catch::Approx;

TEST_CASE("type-level expansion of the squared deviation") {
  const std::vector<double> targets{10, 40, 20};
  const auto q = expandQuadratic(targets);
  CHECK(q.phi == std::vector<double>{20, 80, 40});
  CHECK(q.hessianDiag == std::vector<double>{2, 2, 2});
  CHECK(q.constant == 2100.0);
}

TEST_CASE("sub-type expansion per patient type") {
  const std::vector<double> first{10, 5}, second{7};
  const auto q1 = expandQuadratic(first);
  const auto q2 = expandQuadratic(second);
  CHECK(q1.phi == std::vector<double>{20, 10});
  CHECK(q1.constant == 125.0);
  CHECK(q2.phi == std::vector<double>{14});
  CHECK(q2.constant == 49.0);
}

TEST_CASE("expanded form equals the weighted sum of squares") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 50.0), w(0.1, 4.0);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + rng() % 6;
    std::vector<double> t(n), x(n), wt(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = u(rng);
      x[i] = u(rng);
      wt[i] = w(rng);
    }
    const auto q = expandQuadratic(t, wt);
    CHECK(q.evaluate(x) == Approx(weightedSquares(x, t, wt)).epsilon(1e-12).margin(1e-9));
  }
}

TEST_CASE("expansion rejects bad weights") {
  const std::vector<double> t{1, 2};
  CHECK_THROWS_AS(expandQuadratic(t, std::vector<double>{1}), ValidationError);
  CHECK_THROWS_AS(expandQuadratic(t, std::vector<double>{1, 0}), ValidationError);
}

TEST_CASE("chord interpolant stays within its error bound") {
  lp::Model m;
  const auto x = m.addVariable("x");
  const auto term = piecewiseLinearize(m, "t", lp::LinearExpr(x), 7.3, 2.0, 12.0, 8);
  CHECK(term.breakpoints.size() == 9);
  CHECK(term.errorBound == Approx(2.0 * 1.5 * 1.5 / 4.0));
  double worst = 0.0;
  for (int i = 0; i <= 12000; ++i) {
    const double v = i * 0.001;
    const double gap = chordValue(v, 7.3, 2.0, 12.0, 8) - 2.0 * (v - 7.3) * (v - 7.3);
    CHECK(gap >= -1e-9);
    worst = std::max(worst, gap);
  }
  CHECK(worst <= term.errorBound + 1e-9);
  CHECK(worst >= 0.99 * term.errorBound);
}

TEST_CASE("epigraph minimization reproduces the chord value") {
  for (double fixed : {0.0, 2.5, 7.3, 11.0}) {
    lp::Model m;
    const auto x = m.addVariable("x", fixed, fixed);
    const auto term = piecewiseLinearize(m, "t", lp::LinearExpr(x), 7.3, 2.0, 12.0, 8);
    m.setObjective(lp::Sense::Minimize, term.objective, term.constant);
    const auto s = lp::solveLp(m);
    REQUIRE(s.optimal());
    CHECK(s.objective == Approx(chordValue(fixed, 7.3, 2.0, 12.0, 8)).margin(1e-9));
  }
}

TEST_CASE("zero upper bound pins the expression and keeps the constant") {
  lp::Model m;
  const auto x = m.addVariable("x");
  const auto term = piecewiseLinearize(m, "t", lp::LinearExpr(x), 3.0, 2.0, 0.0);
  CHECK(term.degenerate);
  CHECK(term.constant == 18.0);
  m.setObjective(lp::Sense::Minimize, term.objective, term.constant);
  const auto s = lp::solveLp(m);
  REQUIRE(s.optimal());
  CHECK(s.values[x] == 0.0);
  CHECK(s.objective == 18.0);
}

TEST_CASE("piecewise optimum brackets the grid minimum of the true quadratic") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const auto c = pwl_grid::compare(rng, 2 + k % 2);
    INFO("instance " << k);
    REQUIRE(c.solved);
    CHECK(c.pwl - c.grid >= -c.gridSlack - 1e-7);
    CHECK(c.pwl - c.grid <= c.bound + 1e-7);
  }
}
