#pragma once

// Weighted sum-of-squares targeting terms: the expanded quadratic form and a
// chord-based piecewise-linear epigraph that an LP can minimize directly.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hoplite/error.hpp"
#include "hoplite/lp_model.hpp"

namespace hoplite {

// Z(x) = 1/2 x'Hx - phi'x + c with diagonal H.
struct QuadraticForm {
  std::vector<double> hessianDiag;
  std::vector<double> phi;
  double constant = 0.0;

  double evaluate(std::span<const double> x) const {
    if (x.size() != phi.size()) throw Error("quadratic form: dimension mismatch");
    double z = constant;
    for (std::size_t i = 0; i < x.size(); ++i) z += 0.5 * hessianDiag[i] * x[i] * x[i] - phi[i] * x[i];
    return z;
  }
};

// Expansion of sum_i w_i (x_i - t_i)^2. Empty weights mean all ones.
inline QuadraticForm expandQuadratic(std::span<const double> targets, std::span<const double> weights = {}) {
  if (!weights.empty() && weights.size() != targets.size())
    throw ValidationError("weights", "expected " + std::to_string(targets.size()) + " entries");
  QuadraticForm q;
  q.hessianDiag.resize(targets.size());
  q.phi.resize(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (!(w > 0)) throw ValidationError("weights", "weights must be > 0");
    q.hessianDiag[i] = 2.0 * w;
    q.phi[i] = 2.0 * w * targets[i];
    q.constant += w * targets[i] * targets[i];
  }
  return q;
}

inline double weightedSquares(std::span<const double> x, std::span<const double> targets,
                              std::span<const double> weights = {}) {
  double z = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    z += w * (x[i] - targets[i]) * (x[i] - targets[i]);
  }
  return z;
}

inline constexpr int kDefaultSegments = 16;

struct PwlTerm {
  lp::LinearExpr objective;  // add to a minimization objective
  double constant = 0.0;     // add to the objective constant
  double errorBound = 0.0;   // max gap between the chords and the quadratic
  std::vector<double> breakpoints;
  bool degenerate = false;
};

// Value of the chord interpolant of w(x - t)^2 on uniform breakpoints.
inline double chordValue(double x, double target, double weight, double upper, int segments) {
  const double h = upper / segments;
  int k = static_cast<int>(std::floor(x / h));
  if (k < 0) k = 0;
  if (k >= segments) k = segments - 1;
  const double x0 = k * h, x1 = (k + 1) * h;
  const double f0 = weight * (x0 - target) * (x0 - target);
  const double f1 = weight * (x1 - target) * (x1 - target);
  return f0 + (f1 - f0) * (x - x0) / h;
}

// Adds an epigraph variable z >= every chord of w(expr - t)^2 over [0, upper]
// plus expr <= upper. Minimizing z reproduces the chord interpolant.
inline PwlTerm piecewiseLinearize(lp::Model& model, const std::string& name, const lp::LinearExpr& expr,
                                  double target, double weight, double upper, int segments = kDefaultSegments) {
  if (segments < 2) throw ValidationError("segments", "at least 2 segments are required");
  if (!(weight > 0)) throw ValidationError("weights", "weights must be > 0");
  if (!std::isfinite(upper)) throw ModelError(name + ": piecewise term needs a finite upper bound");
  PwlTerm term;
  if (upper <= 0.0) {
    model.addConstraint(name + "_fix", expr, lp::Relation::LessEqual, 0.0);
    term.constant = weight * target * target;
    term.degenerate = true;
    return term;
  }
  const double h = upper / segments;
  for (int k = 0; k <= segments; ++k) term.breakpoints.push_back(k * h);
  const lp::VarId z = model.addVariable(name + "_z");
  for (int k = 0; k < segments; ++k) {
    const double x0 = term.breakpoints[k], x1 = term.breakpoints[k + 1];
    const double slope = weight * (x0 + x1 - 2.0 * target);
    const double f0 = weight * (x0 - target) * (x0 - target);
    lp::LinearExpr row(z, 1.0);
    row.add(expr, -slope);
    model.addConstraint(name + "_seg" + std::to_string(k + 1), row, lp::Relation::GreaterEqual, f0 - slope * x0);
  }
  model.addConstraint(name + "_ub", expr, lp::Relation::LessEqual, upper);
  term.objective.add(z, 1.0);
  term.errorBound = weight * h * h / 4.0;
  return term;
}

}  // namespace hoplite
