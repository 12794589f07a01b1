#pragma once

// Plain-text tables and CSV renderings of assessment results. Counts and
// hours print with 4 decimals; bottleneck resources carry "[!]".

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "hoplite/assess.hpp"
#include "hoplite/models.hpp"

namespace hoplite {

namespace report_detail {

inline std::string fixed(double x, int decimals = 4) {
  if (!std::isfinite(x)) return x > 0 ? "inf" : "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

// Left-aligned first column, right-aligned remaining columns.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void render(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_)
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (width.size() <= i) width.push_back(0);
        width[i] = std::max(width[i], r[i].size());
      }
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        const std::string pad(width[i] - r[i].size(), ' ');
        if (i > 0) line += "  ";
        line += i == 0 ? r[i] + pad : pad + r[i];
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << "\n";
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

inline std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::string shortest(double x) {
  if (!std::isfinite(x)) return x > 0 ? "inf" : "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace report_detail

inline void renderUtilization(std::ostream& out, const UtilizationReport& rep) {
  using report_detail::fixed;
  report_detail::Table t({"RESOURCE", "#BEDS", "USED HRS", "AVAIL HRS", "%USED", "#TREATED", ""});
  for (const auto& r : rep.rows)
    t.add({r.name, std::to_string(r.spaces), fixed(r.usedHours), fixed(r.availableHours), fixed(r.percentUsed),
           fixed(r.patientsTreated), r.bottleneck ? "[!]" : ""});
  t.render(out);
}

inline void renderCohort(std::ostream& out, const CohortResult& c, const PatientCatalog& catalog,
                         const Mix* mix = nullptr) {
  using report_detail::fixed;
  out << "CAPACITY  " << fixed(c.total) << "\n\n";

  if (!c.groups.empty()) {
    report_detail::Table t({"GROUP", "#OF", "OT HRS", "AVAIL OT HRS", "%USED", "CASEMIX(%)"});
    for (std::size_t g = 0; g < c.typeCounts.size(); ++g)
      t.add({std::to_string(g + 1), fixed(c.typeCounts[g]), fixed(c.groups[g].usedHours),
             fixed(c.groups[g].availableHours), fixed(c.groups[g].percentUsed),
             mix && mix->hasCaseMix() ? fixed(mix->caseMix[g], 2) : ""});
    t.render(out);
  } else {
    report_detail::Table t({"TYPE", "NAME", "#OF", "CASEMIX(%)", "REVENUE"});
    for (std::size_t g = 0; g < c.typeCounts.size(); ++g)
      t.add({std::to_string(g + 1), catalog.types[g].name, fixed(c.typeCounts[g]),
             mix && mix->hasCaseMix() ? fixed(mix->caseMix[g], 2) : "",
             g < c.typeRevenue.size() ? fixed(c.typeRevenue[g], 2) : ""});
    t.render(out);
  }
  out << "\n";

  report_detail::Table sub({"TYPE", "SUB", "#OF", "OT HRS", "WARD HRS", "ICU HRS", "MIX(%)"});
  for (std::size_t g = 0; g < c.subCounts.size(); ++g)
    for (std::size_t p = 0; p < c.subCounts[g].size(); ++p) {
      const auto& pr = catalog.types[g].subTypes[p].profile;
      const double n = c.subCounts[g][p];
      sub.add({std::to_string(g + 1), std::to_string(p + 1), fixed(n), fixed(n * pr.tSurgery),
               fixed(n * pr.wardHours()), fixed(n * pr.tIcu),
               mix && mix->hasSubMix() ? fixed(mix->subMix[g][p], 2) : ""});
    }
  sub.render(out);
  out << "\n";

  if (!c.allocation.entries.empty()) {
    report_detail::Table alloc({"TYPE", "SUB", "#OF", "WARD", "WARD HRS"});
    for (const auto& e : c.allocation.entries)
      alloc.add({std::to_string(e.g), std::to_string(e.p), fixed(e.count), e.ward,
                 fixed(e.count * catalog.subType(e.g, e.p).profile.wardHours())});
    alloc.render(out);
    out << "\n";
  }

  renderUtilization(out, c.report);
  out << "\nREVENUE  " << fixed(c.totalRevenue, 2) << "\n";
  for (const auto& w : c.warnings) out << "warning: " << w << "\n";
}

inline void renderVerdict(std::ostream& out, const FeasibilityVerdict& v) {
  out << (v.feasible ? "FEASIBLE" : "INFEASIBLE") << "\n";
  if (!v.violations.empty()) {
    out << "\n";
    report_detail::Table t({"RESOURCE", "EXCESS HRS"});
    for (const auto& x : v.violations) t.add({x.resource, report_detail::fixed(x.excessHours)});
    t.render(out);
  }
  for (const auto& m : v.mismatches) out << "mismatch: " << m << "\n";
  if (v.cohort) {
    out << "\n";
    renderUtilization(out, v.cohort->report);
  }
}

inline void renderBestFit(std::ostream& out, const BestFitResult& r, const PatientCatalog& catalog) {
  using report_detail::fixed;
  out << "OBJECTIVE  " << fixed(r.objective) << "\n";
  out << "UNMET      " << fixed(r.totalUnmet) << "\n";
  if (r.errorBound > 0) out << "PWL BOUND  " << fixed(r.errorBound) << "\n";
  if (r.postOptimized) out << "all targets met; throughput maximized beyond them\n";
  out << "\n";
  if (!r.typeUnmet.empty()) {
    report_detail::Table t({"GROUP", "TARGET#", "#TREATED", "#UNMET"});
    for (std::size_t g = 0; g < r.typeUnmet.size(); ++g)
      t.add({std::to_string(g + 1), fixed(r.targets.typeTargets[g]), fixed(r.cohort.typeCounts[g]),
             fixed(std::max(0.0, r.typeUnmet[g]))});
    t.render(out);
    out << "\n";
  }
  if (!r.subUnmet.empty()) {
    report_detail::Table t({"GROUP", "SUB", "TARGET#", "#TREATED", "#UNMET"});
    for (std::size_t g = 0; g < r.subUnmet.size(); ++g)
      for (std::size_t p = 0; p < r.subUnmet[g].size(); ++p)
        t.add({std::to_string(g + 1), std::to_string(p + 1), fixed(r.targets.subTargets[g][p]),
               fixed(r.cohort.subCounts[g][p]), fixed(std::max(0.0, r.subUnmet[g][p]))});
    t.render(out);
    out << "\n";
  }
  renderCohort(out, r.cohort, catalog);
}

// --- CSV -------------------------------------------------------------------

inline void csvUtilization(std::ostream& out, const UtilizationReport& rep) {
  using report_detail::shortest;
  out << "resource,spaces,used_hours,available_hours,percent_used,treated,bottleneck\n";
  for (const auto& r : rep.rows)
    out << report_detail::csvField(r.name) << "," << r.spaces << "," << shortest(r.usedHours) << ","
        << shortest(r.availableHours) << "," << shortest(r.percentUsed) << "," << shortest(r.patientsTreated) << ","
        << (r.bottleneck ? 1 : 0) << "\n";
}

inline void csvCohort(std::ostream& out, const CohortResult& c) {
  using report_detail::shortest;
  out << "type,subtype,count\n";
  for (std::size_t g = 0; g < c.subCounts.size(); ++g)
    for (std::size_t p = 0; p < c.subCounts[g].size(); ++p)
      out << g + 1 << "," << p + 1 << "," << shortest(c.subCounts[g][p]) << "\n";
  out << "\n";
  csvUtilization(out, c.report);
}

inline void csvVerdict(std::ostream& out, const FeasibilityVerdict& v) {
  out << "feasible," << (v.feasible ? 1 : 0) << "\n\nresource,excess_hours\n";
  for (const auto& x : v.violations)
    out << report_detail::csvField(x.resource) << "," << report_detail::shortest(x.excessHours) << "\n";
}

inline void csvBestFit(std::ostream& out, const BestFitResult& r) {
  using report_detail::shortest;
  out << "level,type,subtype,target,treated,unmet\n";
  for (std::size_t g = 0; g < r.typeUnmet.size(); ++g)
    out << "type," << g + 1 << ",," << shortest(r.targets.typeTargets[g]) << "," << shortest(r.cohort.typeCounts[g])
        << "," << shortest(std::max(0.0, r.typeUnmet[g])) << "\n";
  for (std::size_t g = 0; g < r.subUnmet.size(); ++g)
    for (std::size_t p = 0; p < r.subUnmet[g].size(); ++p)
      out << "subtype," << g + 1 << "," << p + 1 << "," << shortest(r.targets.subTargets[g][p]) << ","
          << shortest(r.cohort.subCounts[g][p]) << "," << shortest(std::max(0.0, r.subUnmet[g][p])) << "\n";
  out << "\n";
  csvUtilization(out, r.cohort.report);
}

template <class F>
std::string renderToString(F&& f) {
  std::ostringstream s;
  f(s);
  return s.str();
}

}  // namespace hoplite
