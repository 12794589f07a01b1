#pragma once

// Optimization models over ward allocations beta_{(g,p,2),w}: capacity
// assessment under both case-mix viewpoints, feasibility of targets or
// allocations, and best-fit case mixes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "hoplite/assess.hpp"
#include "hoplite/domain.hpp"
#include "hoplite/lp_model.hpp"
#include "hoplite/quadratic.hpp"
#include "hoplite/simplex.hpp"

namespace hoplite {

enum class CaseMixViewpoint { WholeCohort, SessionPartition };
enum class WardOptionPolicy { FirstOnly, All };

struct AssessmentSpec {
  CaseMixViewpoint viewpoint = CaseMixViewpoint::WholeCohort;
  WardOptionPolicy wardOptions = WardOptionPolicy::All;
  MssTemplate mss;
  Mix mix;
  std::vector<double> minimums;  // per-type floor, SessionPartition only
};

enum class TargetOption { TO1, TO2, TO3 };
enum class Norm { One, Two };

struct TargetFitSpec {
  TargetOption option = TargetOption::TO1;
  Norm norm = Norm::One;
  int segments = kDefaultSegments;
  bool postOptimizeThroughput = false;
  bool relative = false;  // divide each deviation by its target
};

// Thrown when the solver does not return an optimum.
class SolveFailure : public ModelError {
 public:
  SolveFailure(lp::Status status, const std::string& what) : ModelError(what), status_(status) {}
  lp::Status status() const noexcept { return status_; }

 private:
  lp::Status status_;
};

struct AllocationVar {
  int g = 0;
  int p = 0;
  int k = 0;                          // 0 for the ward-less variable
  std::optional<std::size_t> ward;    // index into config.wards
  lp::VarId var = 0;
};

struct ResourceRows {
  lp::RowId theatre = 0;
  lp::RowId icu = 0;
  std::vector<lp::RowId> wards;
  lp::RowId allWards = 0;
};

// LP over allocation variables with count expressions for every level.
struct AllocationModel {
  lp::Model lp;
  std::vector<AllocationVar> vars;
  std::vector<std::vector<lp::LinearExpr>> subCount;
  std::vector<lp::LinearExpr> typeCount;
  lp::LinearExpr total;
  ResourceRows resources;
  std::vector<double> groupTheatreHours;  // SessionPartition only
};

namespace models_detail {

inline std::string idx(int g, int p) { return "[" + std::to_string(g) + "][" + std::to_string(p) + "]"; }

// Upper bound on one allocation variable implied by each resource it uses.
inline double allocationBound(const Profile& pr, std::optional<double> wardHours, const Availability& av) {
  double ub = lp::kInfinity;
  if (wardHours && pr.wardHours() > 0) ub = std::min(ub, *wardHours / pr.wardHours());
  if (pr.tSurgery > 0) ub = std::min(ub, av.theatreHours / pr.tSurgery);
  if (pr.tIcu > 0) ub = std::min(ub, av.icuHours / pr.tIcu);
  return ub;
}

inline AllocationModel buildCore(const HospitalConfig& config, const PatientCatalog& catalog, const MssTemplate& mss,
                                 WardOptionPolicy policy, bool boundVariables) {
  const Availability av = availabilityOf(mss, config);
  AllocationModel m;
  m.subCount.resize(catalog.typeCount());
  m.typeCount.resize(catalog.typeCount());
  lp::LinearExpr theatre, icu, allWards;
  std::vector<lp::LinearExpr> wards(config.wards.size());

  for (const auto& t : catalog.types) {
    m.subCount[t.g - 1].resize(t.subTypes.size());
    for (const auto& s : t.subTypes) {
      const auto& pr = s.profile;
      if (s.wardOptions.empty() && pr.tPostop > 0)
        throw ModelError("sub-type " + idx(t.g, s.p) + " has postop time but no ward option");
      lp::LinearExpr& n = m.subCount[t.g - 1][s.p - 1];
      auto addVar = [&](int k, std::optional<std::size_t> w) {
        std::string name = "b" + idx(t.g, s.p);
        if (k > 0) name += "[" + std::to_string(k) + "]";
        const double ub =
            boundVariables ? allocationBound(pr, w ? std::optional<double>(av.wardHours[*w]) : std::nullopt, av)
                           : lp::kInfinity;
        const lp::VarId v = m.lp.addVariable(name, 0.0, ub);
        m.vars.push_back({t.g, s.p, k, w, v});
        n.add(v, 1.0);
        theatre.add(v, pr.tSurgery);
        icu.add(v, pr.tIcu);
        if (w) {
          wards[*w].add(v, pr.wardHours());
          allWards.add(v, pr.wardHours());
        }
      };
      if (s.wardOptions.empty()) {
        addVar(0, std::nullopt);
      } else {
        const std::size_t count = policy == WardOptionPolicy::FirstOnly ? 1 : s.wardOptions.size();
        for (std::size_t k = 0; k < count; ++k) {
          const auto w = config.wardIndex(s.wardOptions[k]);
          if (!w) throw ModelError("sub-type " + idx(t.g, s.p) + " lists unknown ward '" + s.wardOptions[k] + "'");
          addVar(static_cast<int>(k + 1), w);
        }
      }
      m.typeCount[t.g - 1].add(n);
      m.total.add(n);
    }
  }
  m.resources.theatre = m.lp.addConstraint("OT", theatre, lp::Relation::LessEqual, av.theatreHours);
  m.resources.icu = m.lp.addConstraint("ICU", icu, lp::Relation::LessEqual, av.icuHours);
  for (std::size_t w = 0; w < wards.size(); ++w)
    m.resources.wards.push_back(
        m.lp.addConstraint(config.wards[w].name, wards[w], lp::Relation::LessEqual, av.wardHours[w]));
  m.resources.allWards = m.lp.addConstraint("ALL WARDS", allWards, lp::Relation::LessEqual, av.allWardHours);
  return m;
}

inline void addSubMixRows(AllocationModel& m, const PatientCatalog& catalog, const Mix& mix) {
  for (std::size_t g = 0; g < catalog.typeCount(); ++g)
    for (std::size_t p = 0; p < catalog.types[g].subTypes.size(); ++p) {
      lp::LinearExpr row = m.subCount[g][p];
      row.add(m.typeCount[g], -mix.subMix[g][p] / 100.0);
      if (row.terms().empty()) continue;
      m.lp.addConstraint("submix" + idx(static_cast<int>(g + 1), static_cast<int>(p + 1)), row,
                         lp::Relation::GreaterEqual, 0.0);
    }
}

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string typeLabel(const PatientCatalog& catalog, int g) {
  return "type " + std::to_string(g) + " (" + catalog.type(g).name + ")";
}

inline lp::Solution solveOrThrow(const AllocationModel& m, const PatientCatalog& catalog, const std::string& what) {
  lp::Solution sol = lp::solveLp(m.lp);
  if (sol.optimal()) return sol;
  std::string msg = what + ": " + std::string(lp::toString(sol.status));
  if (sol.status == lp::Status::Unbounded && sol.unboundedVariable) {
    for (const auto& v : m.vars)
      if (v.var == *sol.unboundedVariable) {
        msg += "; " + typeLabel(catalog, v.g) + " is not limited by any resource";
        break;
      }
  } else if (!sol.diagnostic.empty()) {
    msg += "; " + sol.diagnostic;
  }
  throw SolveFailure(sol.status, msg);
}

}  // namespace models_detail

// Cohort, allocation and report from a solved allocation model.
inline CohortResult extractCohort(const AllocationModel& m, const std::vector<double>& x, const HospitalConfig& config,
                                  const PatientCatalog& catalog, const MssTemplate& mss) {
  CohortResult c;
  c.subCounts.resize(catalog.typeCount());
  for (std::size_t g = 0; g < catalog.typeCount(); ++g) {
    c.subCounts[g].resize(catalog.types[g].subTypes.size());
    for (std::size_t p = 0; p < c.subCounts[g].size(); ++p) c.subCounts[g][p] = m.subCount[g][p].evaluate(x);
  }
  for (const auto& v : m.vars) {
    if (!v.ward) continue;
    c.allocation.entries.push_back({v.g, v.p, v.k, config.wards[*v.ward].name, x[v.var]});
  }
  finalizeCohort(c, config, catalog, mss);
  if (!m.groupTheatreHours.empty()) {
    for (std::size_t g = 0; g < catalog.typeCount(); ++g) {
      GroupTheatre gt;
      for (std::size_t p = 0; p < c.subCounts[g].size(); ++p)
        gt.usedHours += c.subCounts[g][p] * catalog.types[g].subTypes[p].profile.tSurgery;
      gt.availableHours = m.groupTheatreHours[g];
      gt.percentUsed = assess_detail::percentOf(gt.usedHours, gt.availableHours);
      c.groups.push_back(gt);
    }
  }
  return c;
}

inline AllocationModel buildAdvancedModel(const HospitalConfig& config, const PatientCatalog& catalog,
                                          const AssessmentSpec& spec) {
  validateMix(spec.mix, catalog, true, true);
  if (!spec.minimums.empty() && spec.minimums.size() != catalog.typeCount())
    throw ValidationError("minimums", "expected " + std::to_string(catalog.typeCount()) + " entries");
  auto m = models_detail::buildCore(config, catalog, spec.mss, spec.wardOptions, false);
  models_detail::addSubMixRows(m, catalog, spec.mix);
  const Availability av = availabilityOf(spec.mss, config);

  if (spec.viewpoint == CaseMixViewpoint::WholeCohort) {
    for (std::size_t g = 0; g < catalog.typeCount(); ++g) {
      lp::LinearExpr row = m.typeCount[g];
      row.add(m.total, -spec.mix.caseMix[g] / 100.0);
      if (row.terms().empty()) continue;
      m.lp.addConstraint("casemix[" + std::to_string(g + 1) + "]", row, lp::Relation::GreaterEqual, 0.0);
    }
  } else {
    for (std::size_t g = 0; g < catalog.typeCount(); ++g) {
      const double hours = spec.mix.caseMix[g] / 100.0 * av.theatreHours;
      m.groupTheatreHours.push_back(hours);
      lp::LinearExpr row;
      for (std::size_t p = 0; p < catalog.types[g].subTypes.size(); ++p)
        row.add(m.subCount[g][p], catalog.types[g].subTypes[p].profile.tSurgery);
      m.lp.addConstraint("OT[" + std::to_string(g + 1) + "]", row, lp::Relation::LessEqual, hours);
    }
  }
  if (!spec.minimums.empty())
    for (std::size_t g = 0; g < catalog.typeCount(); ++g)
      if (spec.minimums[g] > 0)
        m.lp.addConstraint("min[" + std::to_string(g + 1) + "]", m.typeCount[g], lp::Relation::GreaterEqual,
                           spec.minimums[g]);
  m.lp.setObjective(lp::Sense::Maximize, m.total);
  return m;
}

inline CohortResult assessCapacity(const HospitalConfig& config, const PatientCatalog& catalog,
                                   const AssessmentSpec& spec) {
  const auto m = buildAdvancedModel(config, catalog, spec);
  const auto sol = models_detail::solveOrThrow(m, catalog, "capacity model");
  return extractCohort(m, sol.values, config, catalog, spec.mss);
}

// Feasibility of planner intentions.
struct Violation {
  std::string resource;
  double excessHours = 0.0;
};

struct FeasibilityVerdict {
  bool feasible = true;
  std::vector<Violation> violations;
  std::vector<std::string> mismatches;  // allocation vs pinned targets
  std::optional<CohortResult> cohort;
};

namespace models_detail {

inline constexpr double kViolationTol = 1e-7;

inline void checkPinConsistency(const TargetSet& t) {
  if (!t.hasTypeTargets() || !t.hasSubTargets()) return;
  for (std::size_t g = 0; g < t.typeTargets.size(); ++g) {
    double sum = 0.0;
    for (double x : t.subTargets[g]) sum += x;
    if (std::abs(sum - t.typeTargets[g]) > kViolationTol * (1.0 + std::abs(sum)))
      throw ValidationError("targets[" + std::to_string(g + 1) + "]",
                            "sub-type targets sum to " + std::to_string(sum) + " but the type target is " +
                                std::to_string(t.typeTargets[g]));
  }
}

inline void addPins(AllocationModel& m, const TargetSet& t) {
  if (t.hasTypeTargets())
    for (std::size_t g = 0; g < t.typeTargets.size(); ++g)
      m.lp.addConstraint("pin[" + std::to_string(g + 1) + "]", m.typeCount[g], lp::Relation::Equal, t.typeTargets[g]);
  if (t.hasSubTargets())
    for (std::size_t g = 0; g < t.subTargets.size(); ++g)
      for (std::size_t p = 0; p < t.subTargets[g].size(); ++p)
        m.lp.addConstraint("pin" + idx(static_cast<int>(g + 1), static_cast<int>(p + 1)), m.subCount[g][p],
                           lp::Relation::Equal, t.subTargets[g][p]);
}

}  // namespace models_detail

inline FeasibilityVerdict checkFeasibility(const HospitalConfig& config, const PatientCatalog& catalog,
                                           const MssTemplate& mss, const TargetSet* targets,
                                           const Allocation* allocation) {
  using models_detail::kViolationTol;
  if (!targets && !allocation) throw ValidationError("", "targets or an allocation are required");
  FeasibilityVerdict v;
  if (targets) {
    targets->validate(catalog);
    if (!targets->hasTypeTargets() && !targets->hasSubTargets())
      throw ValidationError("targets", "no targets given");
    models_detail::checkPinConsistency(*targets);
  }

  if (allocation) {
    allocation->validate(catalog);
    CohortResult c;
    c.subCounts = countsOf(catalog, *allocation);
    c.allocation = *allocation;
    finalizeCohort(c, config, catalog, mss);
    for (const auto& r : c.report.rows)
      if (r.usedHours > r.availableHours + kViolationTol * (1.0 + r.availableHours))
        v.violations.push_back({r.name, r.usedHours - r.availableHours});
    if (targets) {
      if (targets->hasTypeTargets())
        for (std::size_t g = 0; g < c.typeCounts.size(); ++g)
          if (std::abs(c.typeCounts[g] - targets->typeTargets[g]) > kViolationTol * (1.0 + targets->typeTargets[g]))
            v.mismatches.push_back("type " + std::to_string(g + 1) + ": allocated " + models_detail::num(c.typeCounts[g]) +
                                   ", target " + models_detail::num(targets->typeTargets[g]));
      if (targets->hasSubTargets())
        for (std::size_t g = 0; g < c.subCounts.size(); ++g)
          for (std::size_t p = 0; p < c.subCounts[g].size(); ++p) {
            const double want = targets->subTargets[g][p];
            if (std::abs(c.subCounts[g][p] - want) > kViolationTol * (1.0 + want))
              v.mismatches.push_back("sub-type " + models_detail::idx(static_cast<int>(g + 1), static_cast<int>(p + 1)) +
                                     ": allocated " + models_detail::num(c.subCounts[g][p]) + ", target " + models_detail::num(want));
          }
    }
    v.feasible = v.violations.empty() && v.mismatches.empty();
    v.cohort = std::move(c);
    return v;
  }

  auto m = models_detail::buildCore(config, catalog, mss, WardOptionPolicy::All, false);
  models_detail::addPins(m, *targets);
  m.lp.setObjective(lp::Sense::Minimize, lp::LinearExpr{});
  auto sol = lp::solveLp(m.lp);
  if (sol.optimal()) {
    v.cohort = extractCohort(m, sol.values, config, catalog, mss);
    return v;
  }
  if (sol.status != lp::Status::Infeasible)
    throw SolveFailure(sol.status, "feasibility model: " + std::string(lp::toString(sol.status)));

  // Elastic resources: minimize total excess hours needed to meet the pins.
  auto e = models_detail::buildCore(config, catalog, mss, WardOptionPolicy::All, false);
  models_detail::addPins(e, *targets);
  lp::Model elastic;
  for (const auto& var : e.lp.variables()) elastic.addVariable(var.name, var.lower, var.upper);
  lp::LinearExpr excessTotal;
  std::vector<std::pair<std::string, lp::VarId>> excess;
  for (const auto& row : e.lp.constraints()) {
    lp::LinearExpr expr;
    for (const auto& t : row.terms) expr.add(t.var, t.coef);
    if (row.relation == lp::Relation::LessEqual) {
      const lp::VarId x = elastic.addVariable("excess " + row.name);
      expr.add(x, -1.0);
      excessTotal.add(x, 1.0);
      excess.emplace_back(row.name, x);
    }
    elastic.addConstraint(row.name, expr, row.relation, row.rhs);
  }
  elastic.setObjective(lp::Sense::Minimize, excessTotal);
  const auto es = lp::solveLp(elastic);
  v.feasible = false;
  if (!es.optimal()) {
    v.mismatches.push_back("targets cannot be met by any allocation, whatever the capacity");
    return v;
  }
  for (const auto& [name, x] : excess)
    if (es.values[x] > kViolationTol) v.violations.push_back({name, es.values[x]});
  return v;
}

// Best-fit case mix.
struct BestFitResult {
  CohortResult cohort;
  TargetSet targets;  // after the consistency update
  std::vector<double> typeUnmet;
  std::vector<std::vector<double>> subUnmet;
  double totalUnmet = 0.0;
  double objective = 0.0;    // value of the minimized deviation objective
  double errorBound = 0.0;   // summed chord error for the 2-norm
  bool allTargetsMet = false;
  bool postOptimized = false;
};

namespace models_detail {

inline bool fitsTypes(TargetOption o) { return o != TargetOption::TO2; }
inline bool fitsSubTypes(TargetOption o) { return o != TargetOption::TO1; }

inline double termWeight(double omega, double target, bool relative, Norm norm) {
  if (!relative) return omega;
  return norm == Norm::One ? omega / target : omega / (target * target);
}

}  // namespace models_detail

inline AllocationModel buildBestFitModel(const HospitalConfig& config, const PatientCatalog& catalog,
                                         const MssTemplate& mss, const TargetSet& targets, const TargetFitSpec& spec,
                                         double* errorBound = nullptr) {
  using namespace models_detail;
  auto m = buildCore(config, catalog, mss, WardOptionPolicy::All, true);
  lp::LinearExpr objective;
  double constant = 0.0, bound = 0.0;

  std::vector<double> typeUb(catalog.typeCount(), 0.0);
  std::vector<std::vector<double>> subUb(catalog.typeCount());
  for (std::size_t g = 0; g < catalog.typeCount(); ++g) subUb[g].assign(catalog.types[g].subTypes.size(), 0.0);
  for (const auto& v : m.vars) {
    const double ub = m.lp.variables()[v.var].upper;
    typeUb[v.g - 1] += ub;
    subUb[v.g - 1][v.p - 1] += ub;
  }

  auto addTerm = [&](const std::string& name, const lp::LinearExpr& n, double target, double omega, double ub) {
    m.lp.addConstraint("cap" + name, n, lp::Relation::LessEqual, target);
    if (target <= 0.0) return;  // capped at zero; contributes nothing
    const double w = termWeight(omega, target, spec.relative, spec.norm);
    if (spec.norm == Norm::One) {
      constant += w * target;
      objective.add(n, -w);
      return;
    }
    if (!std::isfinite(ub))
      throw ModelError("2-norm target" + name +
                       " needs finite allocation bounds; a sub-type uses no theatre, ward or ICU time");
    const auto term = piecewiseLinearize(m.lp, "sq" + name, n, target, w, std::min(target, ub), spec.segments);
    objective.add(term.objective);
    constant += term.constant;
    bound += term.errorBound;
  };

  for (std::size_t g = 0; g < catalog.typeCount(); ++g) {
    const double omega = targets.weight(g);
    if (fitsTypes(spec.option))
      addTerm("[" + std::to_string(g + 1) + "]", m.typeCount[g], targets.typeTargets[g], omega, typeUb[g]);
    if (fitsSubTypes(spec.option))
      for (std::size_t p = 0; p < catalog.types[g].subTypes.size(); ++p)
        addTerm(idx(static_cast<int>(g + 1), static_cast<int>(p + 1)), m.subCount[g][p], targets.subTargets[g][p],
                omega, subUb[g][p]);
  }
  m.lp.setObjective(lp::Sense::Minimize, objective, constant);
  if (errorBound) *errorBound = bound;
  return m;
}

inline TargetSet prepareTargets(const PatientCatalog& catalog, const TargetSet& targets, const TargetFitSpec& spec) {
  targets.validate(catalog);
  if (spec.segments < 2) throw ValidationError("segments", "at least 2 segments are required");
  if (models_detail::fitsTypes(spec.option) && !targets.hasTypeTargets())
    throw ValidationError("typeTargets", "this targeting option needs patient type targets");
  if (models_detail::fitsSubTypes(spec.option) && !targets.hasSubTargets())
    throw ValidationError("subTargets", "this targeting option needs patient sub-type targets");
  return spec.option == TargetOption::TO3 ? targets.consistent() : targets;
}

inline BestFitResult bestFitCaseMix(const HospitalConfig& config, const PatientCatalog& catalog,
                                    const MssTemplate& mss, const TargetSet& rawTargets, const TargetFitSpec& spec) {
  using namespace models_detail;
  BestFitResult r;
  r.targets = prepareTargets(catalog, rawTargets, spec);
  const TargetSet& t = r.targets;

  auto m = buildBestFitModel(config, catalog, mss, t, spec, &r.errorBound);
  auto sol = solveOrThrow(m, catalog, "best-fit model");
  r.objective = sol.objective;
  std::vector<double> x = sol.values;

  auto unmetOf = [&](const std::vector<double>& vals) {
    double total = 0.0;
    if (fitsTypes(spec.option))
      for (std::size_t g = 0; g < catalog.typeCount(); ++g)
        total += std::max(0.0, t.typeTargets[g] - m.typeCount[g].evaluate(vals));
    if (fitsSubTypes(spec.option))
      for (std::size_t g = 0; g < catalog.typeCount(); ++g)
        for (std::size_t p = 0; p < catalog.types[g].subTypes.size(); ++p)
          total += std::max(0.0, t.subTargets[g][p] - m.subCount[g][p].evaluate(vals));
    return total;
  };

  const bool met = unmetOf(x) <= 1e-6;
  if (met && spec.postOptimizeThroughput) {
    // Every target is reachable; push total throughput past them.
    auto post = buildCore(config, catalog, mss, WardOptionPolicy::All, true);
    if (fitsTypes(spec.option))
      for (std::size_t g = 0; g < catalog.typeCount(); ++g)
        post.lp.addConstraint("floor[" + std::to_string(g + 1) + "]", post.typeCount[g], lp::Relation::GreaterEqual,
                              t.typeTargets[g]);
    if (fitsSubTypes(spec.option))
      for (std::size_t g = 0; g < catalog.typeCount(); ++g)
        for (std::size_t p = 0; p < catalog.types[g].subTypes.size(); ++p)
          post.lp.addConstraint("floor" + idx(static_cast<int>(g + 1), static_cast<int>(p + 1)), post.subCount[g][p],
                                lp::Relation::GreaterEqual, t.subTargets[g][p]);
    post.lp.setObjective(lp::Sense::Maximize, post.total);
    auto ps = lp::solveLp(post.lp);
    if (ps.optimal()) {
      x = ps.values;
      m = std::move(post);
      r.postOptimized = true;
    }
  }

  r.cohort = extractCohort(m, x, config, catalog, mss);
  if (fitsTypes(spec.option)) {
    r.typeUnmet.resize(catalog.typeCount());
    for (std::size_t g = 0; g < catalog.typeCount(); ++g) {
      r.typeUnmet[g] = t.typeTargets[g] - r.cohort.typeCounts[g];
      r.totalUnmet += std::max(0.0, r.typeUnmet[g]);
    }
  }
  if (fitsSubTypes(spec.option)) {
    r.subUnmet.resize(catalog.typeCount());
    double subTotal = 0.0;
    for (std::size_t g = 0; g < catalog.typeCount(); ++g) {
      r.subUnmet[g].resize(catalog.types[g].subTypes.size());
      for (std::size_t p = 0; p < r.subUnmet[g].size(); ++p) {
        r.subUnmet[g][p] = t.subTargets[g][p] - r.cohort.subCounts[g][p];
        subTotal += std::max(0.0, r.subUnmet[g][p]);
      }
    }
    // Type-level shortfall is reported when both levels are fitted.
    if (!fitsTypes(spec.option)) r.totalUnmet = subTotal;
  }
  r.allTargetsMet = met;
  return r;
}

// Weighted distance between two cohorts.
enum class CohortLevel { Type, SubType };

inline double normDistance(const CohortResult& a, const CohortResult& b, CohortLevel level, Norm norm,
                           const std::vector<double>& weights = {}) {
  auto w = [&](std::size_t g) { return g < weights.size() ? weights[g] : 1.0; };
  auto acc = [&](double sum, double omega, double d) {
    return norm == Norm::One ? sum + omega * std::abs(d) : sum + omega * d * d;
  };
  double s = 0.0;
  if (level == CohortLevel::Type) {
    if (a.typeCounts.size() != b.typeCounts.size()) throw ValidationError("cohort", "shape mismatch");
    for (std::size_t g = 0; g < a.typeCounts.size(); ++g) s = acc(s, w(g), a.typeCounts[g] - b.typeCounts[g]);
  } else {
    if (a.subCounts.size() != b.subCounts.size()) throw ValidationError("cohort", "shape mismatch");
    for (std::size_t g = 0; g < a.subCounts.size(); ++g) {
      if (a.subCounts[g].size() != b.subCounts[g].size()) throw ValidationError("cohort", "shape mismatch");
      for (std::size_t p = 0; p < a.subCounts[g].size(); ++p) s = acc(s, w(g), a.subCounts[g][p] - b.subCounts[g][p]);
    }
  }
  return norm == Norm::One ? s : std::sqrt(s);
}

}  // namespace hoplite
