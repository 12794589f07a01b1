#pragma once

// One entry point for every assessment task, shared by the CLI and the
// session service so both emit identical payloads.

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "hoplite/assess.hpp"
#include "hoplite/fileio.hpp"
#include "hoplite/json_io.hpp"
#include "hoplite/models.hpp"
#include "hoplite/report.hpp"

namespace hoplite {

enum class TaskKind { BasicTheatre, BasicBeds, Advanced, EvaluateAllocation, Feasibility, BestFit };

inline std::string toString(TaskKind k) {
  switch (k) {
    case TaskKind::BasicTheatre: return "basicTheatre";
    case TaskKind::BasicBeds: return "basicBeds";
    case TaskKind::Advanced: return "advanced";
    case TaskKind::EvaluateAllocation: return "evaluateAllocation";
    case TaskKind::Feasibility: return "feasibility";
    case TaskKind::BestFit: return "bestFit";
  }
  return "";
}

inline TaskKind taskKindFrom(const std::string& s) {
  for (auto k : {TaskKind::BasicTheatre, TaskKind::BasicBeds, TaskKind::Advanced, TaskKind::EvaluateAllocation,
                 TaskKind::Feasibility, TaskKind::BestFit})
    if (toString(k) == s) return k;
  throw ValidationError("kind", "unknown task kind '" + s + "'");
}

struct TaskOutcome {
  TaskKind kind = TaskKind::Advanced;
  Json parameters;
  std::variant<CohortResult, UtilizationReport, FeasibilityVerdict, BestFitResult> result;
  bool infeasible = false;  // an over-used resource or unattainable request
};

namespace tasks_detail {

template <class E>
using Options = std::vector<std::pair<std::string, E>>;

template <class E>
E choice(const Json& params, const char* key, const Options<E>& options, E fallback) {
  if (!params.contains(key) || params.at(key).is_null()) return fallback;
  const auto s = json_detail::get<std::string>(params, key, "params");
  for (const auto& [name, value] : options)
    if (s == name) return value;
  std::string allowed;
  for (const auto& [name, value] : options) allowed += (allowed.empty() ? "" : "|") + name;
  throw ValidationError(std::string("params.") + key, "expected one of " + allowed);
}

template <class E>
std::string nameOf(E value, const Options<E>& options) {
  for (const auto& [name, v] : options)
    if (v == value) return name;
  return "";
}

inline const Options<CaseMixViewpoint> kViewpoints{
    {"whole", CaseMixViewpoint::WholeCohort}, {"partition", CaseMixViewpoint::SessionPartition}};
inline const Options<WardOptionPolicy> kPolicies{
    {"first", WardOptionPolicy::FirstOnly}, {"all", WardOptionPolicy::All}};
inline const Options<TargetOption> kOptions{
    {"to1", TargetOption::TO1}, {"to2", TargetOption::TO2}, {"to3", TargetOption::TO3}};
inline const Options<Norm> kNorms{{"one", Norm::One}, {"two", Norm::Two}};

inline bool overUsed(const UtilizationReport& rep) {
  for (const auto& r : rep.rows)
    if (r.usedHours > r.availableHours + 1e-7 * (1.0 + r.availableHours)) return true;
  return false;
}

}  // namespace tasks_detail

// `params` holds kind-specific options; inline "sessions", "targets" and
// "allocation" objects override the bundle's own components.
inline TaskOutcome runTask(ProjectBundle bundle, const MssTemplate& mss, TaskKind kind, const Json& params = Json::object()) {
  using namespace tasks_detail;
  if (!params.is_object()) throw ValidationError("params", "expected an object");
  if (params.contains("sessions") && !params["sessions"].is_null()) bundle.sessions = sessionsFromJson(params["sessions"], "params.sessions");
  if (params.contains("targets") && !params["targets"].is_null()) bundle.targets = targetsFromJson(params["targets"], "params.targets");
  if (params.contains("allocation") && !params["allocation"].is_null())
    bundle.allocation = allocationFromJson(params["allocation"], "params.allocation");

  TaskOutcome out;
  out.kind = kind;
  Json echo = {{"mss", toJson(mss)}, {"config", toJson(bundle.config)}};
  auto needMix = [&]() -> const Mix& {
    if (!bundle.mix) throw ValidationError("mix", "this task needs a case mix / sub mix");
    return *bundle.mix;
  };

  switch (kind) {
    case TaskKind::BasicTheatre: {
      if (!bundle.sessions) throw ValidationError("sessions", "this task needs a session assignment");
      echo["sessions"] = toJson(*bundle.sessions);
      echo["mix"] = toJson(needMix());
      out.result = basicAssessByTheatre(bundle.config, bundle.catalog, *bundle.sessions, needMix(), mss);
      break;
    }
    case TaskKind::BasicBeds: {
      echo["mix"] = toJson(needMix());
      out.result = basicAssessByBeds(bundle.config, bundle.catalog, needMix(), mss);
      break;
    }
    case TaskKind::Advanced: {
      AssessmentSpec spec;
      spec.viewpoint = choice(params, "viewpoint", kViewpoints, CaseMixViewpoint::WholeCohort);
      spec.wardOptions = choice(params, "wardOptions", kPolicies, WardOptionPolicy::All);
      spec.mss = mss;
      spec.mix = needMix();
      spec.minimums = json_detail::getOr<std::vector<double>>(params, "minimums", {}, "params");
      echo["viewpoint"] = nameOf(spec.viewpoint, kViewpoints);
      echo["wardOptions"] = nameOf(spec.wardOptions, kPolicies);
      echo["minimums"] = spec.minimums;
      echo["mix"] = toJson(spec.mix);
      try {
        out.result = assessCapacity(bundle.config, bundle.catalog, spec);
      } catch (const SolveFailure& e) {
        if (e.status() != lp::Status::Infeasible) throw;
        throw ValidationError("minimums", e.what());
      }
      break;
    }
    case TaskKind::EvaluateAllocation: {
      if (!bundle.allocation) throw ValidationError("allocation", "this task needs an allocation");
      echo["allocation"] = toJson(*bundle.allocation);
      auto rep = utilizationOf(bundle.config, bundle.catalog, *bundle.allocation, mss);
      out.infeasible = overUsed(rep);
      out.result = std::move(rep);
      break;
    }
    case TaskKind::Feasibility: {
      const bool useTargets = json_detail::getOr<bool>(params, "useTargets", bundle.targets.has_value(), "params");
      const bool useAlloc = json_detail::getOr<bool>(params, "useAllocation", bundle.allocation.has_value(), "params");
      if (useTargets && !bundle.targets) throw ValidationError("targets", "no targets loaded");
      if (useAlloc && !bundle.allocation) throw ValidationError("allocation", "no allocation loaded");
      echo["targets"] = useTargets ? toJson(*bundle.targets) : Json(nullptr);
      echo["allocation"] = useAlloc ? toJson(*bundle.allocation) : Json(nullptr);
      auto v = checkFeasibility(bundle.config, bundle.catalog, mss, useTargets ? &*bundle.targets : nullptr,
                                useAlloc ? &*bundle.allocation : nullptr);
      out.infeasible = !v.feasible;
      out.result = std::move(v);
      break;
    }
    case TaskKind::BestFit: {
      if (!bundle.targets) throw ValidationError("targets", "this task needs targets");
      TargetFitSpec spec;
      spec.option = choice(params, "option", kOptions, TargetOption::TO1);
      spec.norm = choice(params, "norm", kNorms, Norm::One);
      spec.segments = json_detail::getOr<int>(params, "segments", kDefaultSegments, "params");
      spec.postOptimizeThroughput = json_detail::getOr<bool>(params, "postOptimize", false, "params");
      spec.relative = json_detail::getOr<bool>(params, "relative", false, "params");
      echo["option"] = nameOf(spec.option, kOptions);
      echo["norm"] = nameOf(spec.norm, kNorms);
      echo["segments"] = spec.segments;
      echo["postOptimize"] = spec.postOptimizeThroughput;
      echo["relative"] = spec.relative;
      echo["targets"] = toJson(*bundle.targets);
      out.result = bestFitCaseMix(bundle.config, bundle.catalog, mss, *bundle.targets, spec);
      break;
    }
  }
  out.parameters = std::move(echo);
  return out;
}

inline Json toJson(const TaskOutcome& o) {
  Json result = std::visit([](const auto& r) { return toJson(r); }, o.result);
  return {{"kind", toString(o.kind)}, {"parameters", o.parameters}, {"result", result}, {"infeasible", o.infeasible}};
}

inline void renderTask(std::ostream& out, const TaskOutcome& o, const ProjectBundle& bundle) {
  const Mix* mix = bundle.mix ? &*bundle.mix : nullptr;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CohortResult>) renderCohort(out, r, bundle.catalog, mix);
        else if constexpr (std::is_same_v<T, UtilizationReport>) renderUtilization(out, r);
        else if constexpr (std::is_same_v<T, FeasibilityVerdict>) renderVerdict(out, r);
        else renderBestFit(out, r, bundle.catalog);
      },
      o.result);
}

inline void csvTask(std::ostream& out, const TaskOutcome& o) {
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, CohortResult>) csvCohort(out, r);
        else if constexpr (std::is_same_v<T, UtilizationReport>) csvUtilization(out, r);
        else if constexpr (std::is_same_v<T, FeasibilityVerdict>) csvVerdict(out, r);
        else csvBestFit(out, r);
      },
      o.result);
}

}  // namespace hoplite
