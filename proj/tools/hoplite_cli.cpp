// Command-line front end: batch assessments over project files.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hoplite/hoplite.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;

struct Common {
  std::string project;
  std::string format = "text";
  int weeks = 1;
  int days = 5;
  int sess = 2;
  double duration = 4.0;
  std::optional<int> theatres;
  bool lenient = false;
};

void addCommon(CLI::App* cmd, Common& c) {
  cmd->add_option("--project", c.project, "Path to the .project file")->required();
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  cmd->add_option("--weeks", c.weeks, "Weeks in the MSS template")->check(CLI::Range(1, 520));
  cmd->add_option("--days", c.days, "Days per week")->check(CLI::Range(0, 7));
  cmd->add_option("--sess", c.sess, "Sessions per day")->check(CLI::NonNegativeNumber);
  cmd->add_option("--duration", c.duration, "Session duration in hours")->check(CLI::NonNegativeNumber);
  cmd->add_option("--theatres", c.theatres, "Override the configured theatre count")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--lenient", c.lenient, "Accept unknown trailing fields in project files");
}

hoplite::MssTemplate mssOf(const Common& c, const hoplite::ProjectBundle& b) {
  return {c.weeks, c.days, c.sess, c.duration, c.theatres.value_or(b.config.theatres)};
}

int emit(const hoplite::TaskOutcome& o, const hoplite::ProjectBundle& b, const std::string& format) {
  if (format == "json")
    std::cout << hoplite::toJson(o).dump(2) << "\n";
  else if (format == "csv")
    hoplite::csvTask(std::cout, o);
  else
    hoplite::renderTask(std::cout, o, b);
  return o.infeasible ? kExitInfeasible : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace hoplite;
  CLI::App app{"Hospital capacity assessment"};
  app.require_subcommand(1);

  Common common;
  std::string method = "theatre", viewpoint = "whole", wardOptions = "all", option = "to1", norm = "one";
  std::string allocPath, targetsPath, sessionsPath, outDir = ".";
  std::vector<double> minimums;
  int segments = kDefaultSegments;
  bool postOptimize = false, relative = false;
  std::uint64_t seed = 42;
  GeneratorScale scale;

  auto* basic = app.add_subcommand("assess-basic", "Static estimate from sessions or beds");
  addCommon(basic, common);
  basic->add_option("--method", method, "theatre or beds")->check(CLI::IsMember({"theatre", "beds"}));
  basic->add_option("--sessions", sessionsPath, "Session assignment file overriding the project's");

  auto* advanced = app.add_subcommand("assess-advanced", "Maximum patient throughput under the case mix");
  addCommon(advanced, common);
  advanced->add_option("--viewpoint", viewpoint, "whole or partition")->check(CLI::IsMember({"whole", "partition"}));
  advanced->add_option("--ward-options", wardOptions, "first or all")->check(CLI::IsMember({"first", "all"}));
  advanced->add_option("--minimums", minimums, "Per-type minimum counts (partition viewpoint)")->delimiter(',');

  auto* evaluate = app.add_subcommand("evaluate", "Resource usage of a ward allocation");
  addCommon(evaluate, common);
  evaluate->add_option("--alloc", allocPath, "Allocation file overriding the project's");

  auto* feasibility = app.add_subcommand("feasibility", "Check targets and/or an allocation");
  addCommon(feasibility, common);
  feasibility->add_option("--alloc", allocPath, "Allocation file");
  feasibility->add_option("--targets", targetsPath, "Targets file");

  auto* bestFit = app.add_subcommand("best-fit", "Closest feasible cohort to the targets");
  addCommon(bestFit, common);
  bestFit->add_option("--targets", targetsPath, "Targets file overriding the project's");
  bestFit->add_option("--option", option, "to1, to2 or to3")->check(CLI::IsMember({"to1", "to2", "to3"}));
  bestFit->add_option("--norm", norm, "one or two")->check(CLI::IsMember({"one", "two"}));
  bestFit->add_option("--segments", segments, "Piecewise-linear segments for the 2-norm")->check(CLI::Range(2, 100000));
  bestFit->add_flag("--post-optimize", postOptimize, "Maximize throughput when every target is met");
  bestFit->add_flag("--relative", relative, "Divide each deviation by its target");

  auto* validate = app.add_subcommand("validate", "Parse and check a project");
  validate->add_option("--project", common.project, "Path to the .project file")->required();
  validate->add_flag("--lenient", common.lenient, "Accept unknown trailing fields");

  auto* generate = app.add_subcommand("generate", "Write a synthetic project");
  generate->add_option("--seed", seed, "Random seed");
  generate->add_option("--types", scale.types, "Patient types")->check(CLI::PositiveNumber);
  generate->add_option("--subs-min", scale.subsMin, "Minimum sub-types per type")->check(CLI::PositiveNumber);
  generate->add_option("--subs-max", scale.subsMax, "Maximum sub-types per type")->check(CLI::PositiveNumber);
  generate->add_option("--wards", scale.wards, "Wards")->check(CLI::PositiveNumber);
  generate->add_option("--beds-min", scale.bedsMin, "Minimum beds per ward")->check(CLI::NonNegativeNumber);
  generate->add_option("--beds-max", scale.bedsMax, "Maximum beds per ward")->check(CLI::NonNegativeNumber);
  generate->add_option("--out", outDir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) {
      const auto bundle = generateInstance(seed, scale);
      const auto path = saveProject(bundle, outDir);
      std::cout << "wrote " << path.string() << " (" << bundle.catalog.typeCount() << " types, "
                << bundle.catalog.subTypeCount() << " sub-types, " << bundle.config.wards.size() << " wards)\n";
      return kExitOk;
    }

    ParseOptions opts;
    opts.lenient = common.lenient;
    ProjectBundle bundle = loadProject(common.project, opts);

    if (validate->parsed()) {
      std::cout << "OK: " << bundle.catalog.typeCount() << " types, " << bundle.catalog.subTypeCount()
                << " sub-types, " << bundle.config.wards.size() << " wards\n";
      return kExitOk;
    }

    auto load = [&](const std::string& path) { return readTextFile(path); };
    if (!sessionsPath.empty()) bundle.sessions = parseSessions(load(sessionsPath), sessionsPath, opts, &bundle.catalog);
    const MssTemplate mss = mssOf(common, bundle);
    Json params = Json::object();
    TaskKind kind;

    if (basic->parsed()) {
      kind = method == "beds" ? TaskKind::BasicBeds : TaskKind::BasicTheatre;
    } else if (advanced->parsed()) {
      kind = TaskKind::Advanced;
      params = {{"viewpoint", viewpoint}, {"wardOptions", wardOptions}};
      if (!minimums.empty()) params["minimums"] = minimums;
    } else if (evaluate->parsed()) {
      kind = TaskKind::EvaluateAllocation;
      if (!allocPath.empty()) bundle.allocation = parseAllocation(load(allocPath), allocPath, opts, &bundle.catalog);
    } else if (feasibility->parsed()) {
      kind = TaskKind::Feasibility;
      if (!allocPath.empty()) bundle.allocation = parseAllocation(load(allocPath), allocPath, opts, &bundle.catalog);
      if (!targetsPath.empty()) bundle.targets = parseTargets(load(targetsPath), targetsPath, opts, &bundle.catalog);
      if (!allocPath.empty() || !targetsPath.empty())
        params = {{"useTargets", !targetsPath.empty()}, {"useAllocation", !allocPath.empty()}};
    } else {
      kind = TaskKind::BestFit;
      if (!targetsPath.empty()) bundle.targets = parseTargets(load(targetsPath), targetsPath, opts, &bundle.catalog);
      params = {{"option", option}, {"norm", norm}, {"segments", segments}, {"postOptimize", postOptimize},
                {"relative", relative}};
    }
    return emit(runTask(bundle, mss, kind, params), bundle, common.format);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const SolveFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.status() == lp::Status::Infeasible ? kExitInfeasible : kExitError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
