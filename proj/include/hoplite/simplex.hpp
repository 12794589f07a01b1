#pragma once

// Bounded-variable primal simplex on a dense tableau.
//
// Rows are brought to equality form a.x + s = b with one slack per row
// (s in [0,inf) for <=, (-inf,0] for >=, [0,0] for =). Rows whose slack
// cannot absorb the initial residual get an artificial column; phase 1
// minimizes the artificials, phase 2 the real objective. Dantzig pricing
// with a Harris ratio test; after 2(m+n) iterations without objective
// progress the solver switches to Bland's rule until progress resumes.
// The tableau is rebuilt from the original matrix periodically and before
// a phase is declared optimal, so accumulated drift cannot leak into the
// reported solution.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hoplite/lp_model.hpp"

namespace hoplite::lp {

enum class Status { Optimal, Infeasible, Unbounded, NumericallyUnstable, IterationLimit };

inline std::string_view toString(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::NumericallyUnstable: return "numerically unstable";
    case Status::IterationLimit: return "iteration limit";
  }
  return "unknown";
}

struct Solution {
  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> values;
  std::vector<double> activities;
  std::size_t iterations = 0;
  std::string diagnostic;
  std::optional<std::size_t> unboundedVariable;  // structural column of the unbounded ray

  bool optimal() const { return status == Status::Optimal; }
};

struct SimplexOptions {
  double feasibilityTol = 1e-7;
  double optimalityTol = 1e-9;
  double pivotTol = 1e-9;
  std::size_t maxIterations = 0;  // 0: 50 * (m + n) + 1000
  std::size_t refactorInterval = 0;  // 0: max(100, m)
};

class SimplexSolver {
 public:
  explicit SimplexSolver(SimplexOptions options = {}) : opt_(options) {}

  Solution solve(const Model& model) {
    setup(model);
    Solution sol;
    const std::size_t limit = opt_.maxIterations ? opt_.maxIterations : 50 * (m_ + n_) + 1000;

    // Phase 1.
    if (artificials_ > 0) {
      std::vector<double> cost(cols_, 0.0);
      for (std::size_t j = n_ + m_; j < cols_; ++j) cost[j] = 1.0;
      Status st = runPhase(cost, limit, sol.iterations);
      if (st != Status::Optimal) return finish(model, sol, st == Status::Unbounded ? Status::NumericallyUnstable : st);
      for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t j = head_[i];
        if (j >= n_ + m_ && x_[j] > opt_.feasibilityTol * (1.0 + std::abs(rhs_[i]))) {
          sol.diagnostic = "constraint '" + model.constraints()[artRow_[j - n_ - m_]].name + "' cannot be satisfied";
          return finish(model, sol, Status::Infeasible);
        }
      }
      for (std::size_t j = n_ + m_; j < cols_; ++j) {
        lower_[j] = upper_[j] = 0.0;
        if (state_[j] != Basic) x_[j] = 0.0;
      }
      driveOutArtificials();
    }

    // Phase 2.
    std::vector<double> cost(cols_, 0.0);
    const double sign = model.objective().sense == Sense::Maximize ? -1.0 : 1.0;
    for (const auto& t : model.objective().terms) cost[t.var] += sign * t.coef;
    Status st = runPhase(cost, limit, sol.iterations);
    if (st == Status::Unbounded) {
      sol.diagnostic = "objective is unbounded along variable '" + unboundedName(model) + "'";
      if (unboundedCol_ < n_) sol.unboundedVariable = unboundedCol_;
    }
    return finish(model, sol, st);
  }

 private:
  enum VarState : unsigned char { Basic, AtLower, AtUpper };

  SimplexOptions opt_;
  std::size_t n_ = 0, m_ = 0, cols_ = 0, artificials_ = 0;
  std::vector<double> a0_;   // original matrix, m x cols
  std::vector<double> rhs_;  // original rhs
  std::vector<double> t_;    // tableau B^-1 A, m x cols
  std::vector<double> lower_, upper_, x_, d_;
  std::vector<VarState> state_;
  std::vector<std::size_t> head_;
  std::vector<std::size_t> artRow_;
  std::size_t unboundedCol_ = 0;
  bool singular_ = false;

  double& T(std::size_t i, std::size_t j) { return t_[i * cols_ + j]; }
  double& A(std::size_t i, std::size_t j) { return a0_[i * cols_ + j]; }

  void setup(const Model& model) {
    n_ = model.variableCount();
    m_ = model.constraintCount();
    const auto& rows = model.constraints();

    // Residual with structurals at their lower bounds decides which rows
    // need an artificial.
    std::vector<double> resid(m_);
    std::vector<int> artSign(m_, 0);
    artificials_ = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      double r = rows[i].rhs;
      for (const auto& t : rows[i].terms) r -= t.coef * model.variables()[t.var].lower;
      resid[i] = r;
      const auto rel = rows[i].relation;
      const bool slackOk = (rel == Relation::LessEqual && r >= 0) || (rel == Relation::GreaterEqual && r <= 0) ||
                           (rel == Relation::Equal && r == 0);
      if (!slackOk) {
        artSign[i] = r >= 0 ? 1 : -1;
        ++artificials_;
      }
    }
    cols_ = n_ + m_ + artificials_;
    a0_.assign(m_ * cols_, 0.0);
    rhs_.resize(m_);
    lower_.assign(cols_, 0.0);
    upper_.assign(cols_, 0.0);
    x_.assign(cols_, 0.0);
    state_.assign(cols_, AtLower);
    head_.assign(m_, 0);
    artRow_.clear();

    for (std::size_t j = 0; j < n_; ++j) {
      lower_[j] = model.variables()[j].lower;
      upper_[j] = model.variables()[j].upper;
      x_[j] = lower_[j];
    }
    std::size_t art = n_ + m_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (const auto& t : rows[i].terms) A(i, t.var) += t.coef;
      rhs_[i] = rows[i].rhs;
      const std::size_t s = n_ + i;
      A(i, s) = 1.0;
      switch (rows[i].relation) {
        case Relation::LessEqual: lower_[s] = 0.0; upper_[s] = kInfinity; state_[s] = AtLower; break;
        case Relation::GreaterEqual: lower_[s] = -kInfinity; upper_[s] = 0.0; state_[s] = AtUpper; break;
        case Relation::Equal: lower_[s] = 0.0; upper_[s] = 0.0; state_[s] = AtLower; break;
      }
      if (artSign[i] == 0) {
        head_[i] = s;
        state_[s] = Basic;
        x_[s] = resid[i];
      } else {
        A(i, art) = artSign[i];
        lower_[art] = 0.0;
        upper_[art] = kInfinity;
        head_[i] = art;
        state_[art] = Basic;
        x_[art] = std::abs(resid[i]);
        artRow_.push_back(i);
        ++art;
      }
    }
    // Initial basis is diagonal with entries +-1.
    t_ = a0_;
    for (std::size_t i = 0; i < m_; ++i) {
      if (A(i, head_[i]) < 0)
        for (std::size_t j = 0; j < cols_; ++j) T(i, j) = -T(i, j);
    }
    singular_ = false;
  }

  void computeReducedCosts(const std::vector<double>& cost) {
    d_ = cost;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[head_[i]];
      if (cb == 0.0) continue;
      const double* row = &t_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j) d_[j] -= cb * row[j];
    }
    for (std::size_t i = 0; i < m_; ++i) d_[head_[i]] = 0.0;
  }

  double objectiveOf(const std::vector<double>& cost) const {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j)
      if (cost[j] != 0.0) s += cost[j] * x_[j];
    return s;
  }

  // Rebuilds the tableau from the original matrix for the current basis
  // (Gauss-Jordan with partial pivoting) and recomputes basic values.
  bool refactor() {
    std::vector<double> work = a0_;
    std::vector<double> b = rhs_;
    std::vector<std::size_t> newHead(m_, cols_);
    std::vector<char> used(m_, 0);
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t col = head_[k];
      std::size_t best = m_;
      double bestAbs = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (used[i]) continue;
        const double v = std::abs(work[i * cols_ + col]);
        if (v > bestAbs) { bestAbs = v; best = i; }
      }
      if (best == m_ || bestAbs < 1e-11) return false;
      used[best] = 1;
      newHead[best] = col;
      double* prow = &work[best * cols_];
      const double inv = 1.0 / prow[col];
      for (std::size_t j = 0; j < cols_; ++j) prow[j] *= inv;
      prow[col] = 1.0;
      b[best] *= inv;
      for (std::size_t i = 0; i < m_; ++i) {
        if (i == best) continue;
        double* row = &work[i * cols_];
        const double f = row[col];
        if (f == 0.0) continue;
        for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * prow[j];
        row[col] = 0.0;
        b[i] -= f * b[best];
      }
    }
    t_ = std::move(work);
    head_ = std::move(newHead);
    for (std::size_t i = 0; i < m_; ++i) {
      double v = b[i];
      const double* row = &t_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j)
        if (state_[j] != Basic && x_[j] != 0.0) v -= row[j] * x_[j];
      x_[head_[i]] = v;
    }
    return true;
  }

  void pivot(std::size_t r, std::size_t q) {
    double* prow = &t_[r * cols_];
    const double inv = 1.0 / prow[q];
    for (std::size_t j = 0; j < cols_; ++j) prow[j] *= inv;
    prow[q] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * cols_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double dq = d_[q];
    if (dq != 0.0)
      for (std::size_t j = 0; j < cols_; ++j) d_[j] -= dq * prow[j];
    d_[q] = 0.0;
    head_[r] = q;
  }

  // Improving nonbasic column, or cols_ if none.
  std::size_t price(bool bland, int& dir) const {
    std::size_t best = cols_;
    double bestScore = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (state_[j] == Basic || upper_[j] - lower_[j] <= 0.0) continue;
      double score = 0.0;
      int dj = 0;
      if (state_[j] == AtLower && d_[j] < -opt_.optimalityTol) { score = -d_[j]; dj = 1; }
      else if (state_[j] == AtUpper && d_[j] > opt_.optimalityTol) { score = d_[j]; dj = -1; }
      if (!dj) continue;
      if (bland) { dir = dj; return j; }
      if (score > bestScore) { bestScore = score; best = j; dir = dj; }
    }
    return best;
  }

  Status runPhase(const std::vector<double>& cost, std::size_t limit, std::size_t& iterations) {
    if (!refactor()) return Status::NumericallyUnstable;
    computeReducedCosts(cost);
    const std::size_t interval = opt_.refactorInterval ? opt_.refactorInterval : std::max<std::size_t>(100, m_);
    std::size_t sinceRefactor = 0, stall = 0;
    const std::size_t stallLimit = 2 * (m_ + n_);
    double best = objectiveOf(cost);
    bool bland = false;
    int confirmations = 0;

    while (true) {
      if (iterations >= limit) return Status::IterationLimit;
      int dir = 0;
      const std::size_t q = price(bland, dir);
      if (q == cols_) {
        // Confirm optimality on a fresh factorization.
        if (sinceRefactor == 0 || confirmations > 5) return Status::Optimal;
        if (!refactor()) return Status::NumericallyUnstable;
        computeReducedCosts(cost);
        sinceRefactor = 0;
        ++confirmations;
        continue;
      }

      // Ratio test.
      const double ftol = opt_.feasibilityTol;
      std::size_t leave = m_;
      double step = kInfinity;
      if (bland) {
        for (std::size_t i = 0; i < m_; ++i) {
          const double rate = dir * T(i, q);
          if (std::abs(rate) <= opt_.pivotTol) continue;
          const std::size_t b = head_[i];
          double lim;
          if (rate > 0) {
            if (lower_[b] == -kInfinity) continue;
            lim = std::max(0.0, (x_[b] - lower_[b]) / rate);
          } else {
            if (upper_[b] == kInfinity) continue;
            lim = std::max(0.0, (upper_[b] - x_[b]) / -rate);
          }
          if (lim < step || (lim == step && leave < m_ && b < head_[leave])) { step = lim; leave = i; }
        }
      } else {
        // Harris: bound the step with relaxed bounds, then take the largest
        // pivot among rows blocking within that step.
        double relaxed = kInfinity;
        for (std::size_t i = 0; i < m_; ++i) {
          const double rate = dir * T(i, q);
          if (std::abs(rate) <= opt_.pivotTol) continue;
          const std::size_t b = head_[i];
          if (rate > 0 && lower_[b] != -kInfinity)
            relaxed = std::min(relaxed, (x_[b] - lower_[b] + ftol) / rate);
          else if (rate < 0 && upper_[b] != kInfinity)
            relaxed = std::min(relaxed, (upper_[b] - x_[b] + ftol) / -rate);
        }
        double bestPivot = 0.0;
        for (std::size_t i = 0; i < m_ && relaxed < kInfinity; ++i) {
          const double rate = dir * T(i, q);
          if (std::abs(rate) <= opt_.pivotTol) continue;
          const std::size_t b = head_[i];
          double lim;
          if (rate > 0) {
            if (lower_[b] == -kInfinity) continue;
            lim = (x_[b] - lower_[b]) / rate;
          } else {
            if (upper_[b] == kInfinity) continue;
            lim = (upper_[b] - x_[b]) / -rate;
          }
          if (lim <= relaxed && std::abs(rate) > bestPivot) {
            bestPivot = std::abs(rate);
            leave = i;
            step = std::max(0.0, lim);
          }
        }
      }

      const double range = upper_[q] - lower_[q];
      const bool flip = range < kInfinity && range <= step;
      if (!flip && leave == m_) {
        unboundedCol_ = q;
        return Status::Unbounded;
      }
      if (flip) step = range;

      x_[q] += dir * step;
      if (step != 0.0)
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = T(i, q);
          if (a != 0.0) x_[head_[i]] -= dir * a * step;
        }

      if (flip) {
        state_[q] = dir > 0 ? AtUpper : AtLower;
        x_[q] = dir > 0 ? upper_[q] : lower_[q];
      } else {
        const std::size_t out = head_[leave];
        const bool toLower = dir * T(leave, q) > 0;
        state_[out] = toLower ? AtLower : AtUpper;
        x_[out] = toLower ? lower_[out] : upper_[out];
        state_[q] = Basic;
        pivot(leave, q);
      }
      ++iterations;
      ++sinceRefactor;
      confirmations = 0;

      if (sinceRefactor >= interval) {
        if (!refactor()) return Status::NumericallyUnstable;
        computeReducedCosts(cost);
        sinceRefactor = 0;
      }

      const double obj = objectiveOf(cost);
      if (obj < best - 1e-12 * (1.0 + std::abs(best))) {
        best = obj;
        stall = 0;
        bland = false;
      } else if (++stall > stallLimit) {
        bland = true;
      }
    }
  }

  // Swap zero-valued basic artificials for structural or slack columns.
  void driveOutArtificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (head_[r] < n_ + m_) continue;
      std::size_t best = cols_;
      double bestAbs = 1e-7;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (state_[j] == Basic) continue;
        const double v = std::abs(T(r, j));
        if (v > bestAbs) { bestAbs = v; best = j; }
      }
      if (best == cols_) continue;  // redundant row; the artificial stays basic at zero
      const std::size_t out = head_[r];
      state_[out] = AtLower;
      x_[out] = 0.0;
      state_[best] = Basic;
      d_.assign(cols_, 0.0);
      pivot(r, best);
    }
  }

  std::string unboundedName(const Model& model) const {
    if (unboundedCol_ < n_) return model.variables()[unboundedCol_].name;
    if (unboundedCol_ < n_ + m_) return "slack of " + model.constraints()[unboundedCol_ - n_].name;
    return "artificial";
  }

  Solution& finish(const Model& model, Solution& sol, Status status) {
    sol.status = status;
    sol.values.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    for (std::size_t j = 0; j < n_; ++j) {
      const auto& v = model.variables()[j];
      sol.values[j] = std::clamp(sol.values[j], v.lower, v.upper);
    }
    sol.activities.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) sol.activities[i] = model.activity(i, sol.values);
    sol.objective = model.objectiveValue(sol.values);
    if (status != Status::Optimal) return sol;

    for (std::size_t j = 0; j < n_; ++j) {
      const auto& v = model.variables()[j];
      const double raw = x_[j];
      if (raw < v.lower - opt_.feasibilityTol || raw > v.upper + opt_.feasibilityTol) {
        sol.status = Status::NumericallyUnstable;
        sol.diagnostic = "bound of '" + v.name + "' violated after refactorization";
        return sol;
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& c = model.constraints()[i];
      const double tol = opt_.feasibilityTol * (1.0 + std::abs(c.rhs));
      const double act = sol.activities[i];
      const bool ok = c.relation == Relation::LessEqual ? act <= c.rhs + tol
                      : c.relation == Relation::GreaterEqual ? act >= c.rhs - tol
                                                              : std::abs(act - c.rhs) <= tol;
      if (!ok) {
        sol.status = Status::NumericallyUnstable;
        sol.diagnostic = "constraint '" + c.name + "' violated after refactorization";
        return sol;
      }
    }
    return sol;
  }
};

inline Solution solveLp(const Model& model, SimplexOptions options = {}) {
  return SimplexSolver(options).solve(model);
}

}  // namespace hoplite::lp
