#pragma once

// Static capacity calculations and resource utilization reporting.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hoplite/domain.hpp"

namespace hoplite {

inline constexpr double kBottleneckPercent = 100.0 - 1e-6;

struct ResourceUsage {
  std::string name;
  int spaces = 0;
  double usedHours = 0.0;
  double availableHours = 0.0;
  double percentUsed = 0.0;
  double patientsTreated = 0.0;
  bool bottleneck = false;

  double excessHours() const { return std::max(0.0, usedHours - availableHours); }
};

// Rows in display order: OT, ICU, one per ward, ALL WARDS.
struct UtilizationReport {
  std::vector<ResourceUsage> rows;

  const ResourceUsage& theatre() const { return rows.at(0); }
  const ResourceUsage& icu() const { return rows.at(1); }
  const ResourceUsage& ward(std::size_t i) const { return rows.at(2 + i); }
  const ResourceUsage& allWards() const { return rows.back(); }
  std::size_t wardCount() const { return rows.size() - 3; }

  const ResourceUsage* find(std::string_view name) const {
    for (const auto& r : rows)
      if (r.name == name) return &r;
    return nullptr;
  }

  std::vector<const ResourceUsage*> bottlenecks() const {
    std::vector<const ResourceUsage*> out;
    for (const auto& r : rows)
      if (r.bottleneck) out.push_back(&r);
    return out;
  }
};

// Theatre time earmarked for one patient type (session-partitioned models).
struct GroupTheatre {
  double usedHours = 0.0;
  double availableHours = 0.0;
  double percentUsed = 0.0;
};

struct CohortResult {
  double total = 0.0;
  std::vector<double> typeCounts;
  std::vector<std::vector<double>> subCounts;
  Allocation allocation;
  UtilizationReport report;
  std::vector<GroupTheatre> groups;  // empty unless theatre time is partitioned
  std::vector<double> typeRevenue;
  double totalRevenue = 0.0;
  std::vector<std::string> warnings;
};

namespace assess_detail {

inline double percentOf(double used, double available) {
  if (available > 0) return 100.0 * used / available;
  return used > 0 ? std::numeric_limits<double>::infinity() : 0.0;
}

inline ResourceUsage makeRow(std::string name, int spaces, double used, double available, double treated) {
  ResourceUsage r{std::move(name), spaces, used, available, percentOf(used, available), treated, false};
  r.bottleneck = r.percentUsed >= kBottleneckPercent && (available > 0 || used > 0);
  return r;
}

inline std::vector<std::vector<double>> zeroShape(const PatientCatalog& catalog) {
  std::vector<std::vector<double>> out(catalog.typeCount());
  for (std::size_t g = 0; g < out.size(); ++g) out[g].assign(catalog.types[g].subTypes.size(), 0.0);
  return out;
}

inline double fraction(double percent) { return percent / 100.0; }

}  // namespace assess_detail

// Usage from sub-type counts (theatre, ICU) and the ward allocation (wards).
inline UtilizationReport utilizationFrom(const HospitalConfig& config, const PatientCatalog& catalog,
                                         const MssTemplate& mss, const std::vector<std::vector<double>>& subCounts,
                                         const Allocation& allocation) {
  using assess_detail::makeRow;
  const Availability av = availabilityOf(mss, config);
  double otUsed = 0, otTreated = 0, icuUsed = 0, icuTreated = 0;
  for (std::size_t g = 0; g < subCounts.size(); ++g)
    for (std::size_t p = 0; p < subCounts[g].size(); ++p) {
      const auto& pr = catalog.types[g].subTypes[p].profile;
      const double n = subCounts[g][p];
      otUsed += n * pr.tSurgery;
      icuUsed += n * pr.tIcu;
      if (pr.tSurgery > 0) otTreated += n;
      if (pr.tIcu > 0) icuTreated += n;
    }
  std::vector<double> wardUsed(config.wards.size(), 0.0), wardTreated(config.wards.size(), 0.0);
  for (const auto& e : allocation.entries) {
    const auto w = config.wardIndex(e.ward);
    if (!w) throw ValidationError("allocation", "unknown ward '" + e.ward + "'");
    wardUsed[*w] += e.count * catalog.subType(e.g, e.p).profile.wardHours();
    wardTreated[*w] += e.count;
  }
  UtilizationReport rep;
  rep.rows.push_back(makeRow("OT", mss.theatres, otUsed, av.theatreHours, otTreated));
  rep.rows.push_back(makeRow("ICU", config.icuBeds, icuUsed, av.icuHours, icuTreated));
  double allUsed = 0, allTreated = 0;
  for (std::size_t w = 0; w < config.wards.size(); ++w) {
    rep.rows.push_back(makeRow(config.wards[w].name, config.wards[w].beds, wardUsed[w], av.wardHours[w], wardTreated[w]));
    allUsed += wardUsed[w];
    allTreated += wardTreated[w];
  }
  rep.rows.push_back(makeRow("ALL WARDS", config.totalBeds(), allUsed, av.allWardHours, allTreated));
  return rep;
}

// Sub-type counts implied by an allocation: n_{g,p} = sum over wards of beta.
inline std::vector<std::vector<double>> countsOf(const PatientCatalog& catalog, const Allocation& allocation) {
  auto counts = assess_detail::zeroShape(catalog);
  for (const auto& e : allocation.entries) {
    if (!catalog.contains(e.g, e.p)) throw ValidationError("allocation", "no such sub-type");
    counts[e.g - 1][e.p - 1] += e.count;
  }
  return counts;
}

inline UtilizationReport utilizationOf(const HospitalConfig& config, const PatientCatalog& catalog,
                                       const Allocation& allocation, const MssTemplate& mss) {
  allocation.validate(catalog);
  return utilizationFrom(config, catalog, mss, countsOf(catalog, allocation), allocation);
}

struct RevenueSummary {
  std::vector<double> perType;
  double total = 0.0;
  std::vector<std::string> warnings;
};

inline RevenueSummary revenueOf(const std::vector<std::vector<double>>& subCounts, const PatientCatalog& catalog) {
  RevenueSummary r;
  r.perType.assign(subCounts.size(), 0.0);
  for (std::size_t g = 0; g < subCounts.size(); ++g) {
    for (std::size_t p = 0; p < subCounts[g].size(); ++p) {
      const auto& st = catalog.types[g].subTypes[p];
      if (!st.revenue) {
        if (subCounts[g][p] != 0.0)
          r.warnings.push_back("no revenue for sub-type [" + std::to_string(g + 1) + "][" +
                               std::to_string(p + 1) + "], counted as 0");
        continue;
      }
      r.perType[g] += subCounts[g][p] * *st.revenue;
    }
    r.total += r.perType[g];
  }
  return r;
}

// Fills totals, revenue and the report from subCounts and allocation.
inline void finalizeCohort(CohortResult& c, const HospitalConfig& config, const PatientCatalog& catalog,
                           const MssTemplate& mss) {
  c.typeCounts.assign(c.subCounts.size(), 0.0);
  c.total = 0.0;
  for (std::size_t g = 0; g < c.subCounts.size(); ++g) {
    for (double n : c.subCounts[g]) c.typeCounts[g] += n;
    c.total += c.typeCounts[g];
  }
  c.report = utilizationFrom(config, catalog, mss, c.subCounts, c.allocation);
  auto rev = revenueOf(c.subCounts, catalog);
  c.typeRevenue = std::move(rev.perType);
  c.totalRevenue = rev.total;
  for (auto& w : rev.warnings) c.warnings.push_back(std::move(w));
}

// Static estimates place every patient in its first ward option.
inline Allocation firstOptionAllocation(const PatientCatalog& catalog,
                                        const std::vector<std::vector<double>>& subCounts) {
  Allocation a;
  for (std::size_t g = 0; g < subCounts.size(); ++g)
    for (std::size_t p = 0; p < subCounts[g].size(); ++p) {
      const auto& st = catalog.types[g].subTypes[p];
      if (st.wardOptions.empty()) continue;
      a.entries.push_back({static_cast<int>(g + 1), static_cast<int>(p + 1), 1, st.wardOptions[0], subCounts[g][p]});
    }
  return a;
}

// Patients per type from its session allotment:
// n_g = m_g D / sum_p mu_{g,p} t_{g,p,1}, split across sub-types by the sub mix.
inline CohortResult basicAssessByTheatre(const HospitalConfig& config, const PatientCatalog& catalog,
                                         const SessionAssignment& sessions, const Mix& mix, const MssTemplate& mss) {
  validateMix(mix, catalog, false, true);
  if (sessions.sessions.size() != catalog.typeCount())
    throw ValidationError("sessions", "expected " + std::to_string(catalog.typeCount()) + " entries");
  for (double m : sessions.sessions)
    if (!(m >= 0)) throw ValidationError("sessions", "session counts must be >= 0");

  CohortResult c;
  c.subCounts = assess_detail::zeroShape(catalog);
  for (std::size_t g = 0; g < catalog.typeCount(); ++g) {
    const auto& subs = catalog.types[g].subTypes;
    double avgSurgery = 0.0;
    for (std::size_t p = 0; p < subs.size(); ++p)
      avgSurgery += assess_detail::fraction(mix.subMix[g][p]) * subs[p].profile.tSurgery;
    const double m = sessions.sessions[g];
    if (m == 0.0) continue;
    if (avgSurgery <= 0.0) {
      c.warnings.push_back("type " + std::to_string(g + 1) + " (" + catalog.types[g].name +
                           ") is not limited by theatre time; excluded");
      continue;
    }
    const double n = m * mss.sessionHours / avgSurgery;
    for (std::size_t p = 0; p < subs.size(); ++p) c.subCounts[g][p] = assess_detail::fraction(mix.subMix[g][p]) * n;
  }
  c.allocation = firstOptionAllocation(catalog, c.subCounts);
  finalizeCohort(c, config, catalog, mss);
  const double unassigned = sessions.unassigned(computeSessions(mss));
  if (sessions.assigned() > static_cast<double>(computeSessions(mss)) + 1e-9)
    c.warnings.push_back("assigned sessions exceed the " + std::to_string(computeSessions(mss)) + " available");
  else if (unassigned > 0)
    c.warnings.push_back("unassigned sessions remain");
  return c;
}

// Patients per type when each type has the beds of its first-option wards to
// itself: min over those wards of bed hours / mix-weighted (t1 + t2).
inline CohortResult basicAssessByBeds(const HospitalConfig& config, const PatientCatalog& catalog, const Mix& mix,
                                      const MssTemplate& mss) {
  validateMix(mix, catalog, false, true);
  const Availability av = availabilityOf(mss, config);
  CohortResult c;
  c.subCounts = assess_detail::zeroShape(catalog);
  for (std::size_t g = 0; g < catalog.typeCount(); ++g) {
    const auto& subs = catalog.types[g].subTypes;
    std::vector<double> load(config.wards.size(), 0.0);
    for (std::size_t p = 0; p < subs.size(); ++p) {
      if (subs[p].wardOptions.empty()) continue;
      const auto w = config.wardIndex(subs[p].wardOptions[0]);
      if (!w) throw ValidationError("wardOptions", "unknown ward '" + subs[p].wardOptions[0] + "'");
      load[*w] += assess_detail::fraction(mix.subMix[g][p]) * subs[p].profile.wardHours();
    }
    double n = std::numeric_limits<double>::infinity();
    std::string binding;
    for (std::size_t w = 0; w < load.size(); ++w) {
      if (load[w] <= 0.0) continue;
      const double bound = av.wardHours[w] / load[w];
      if (bound < n) {
        n = bound;
        binding = config.wards[w].name;
      }
    }
    if (std::isinf(n)) {
      c.warnings.push_back("type " + std::to_string(g + 1) + " (" + catalog.types[g].name +
                           ") is not limited by ward beds; excluded");
      continue;
    }
    if (n == 0.0)
      c.warnings.push_back("type " + std::to_string(g + 1) + " (" + catalog.types[g].name + ") needs " + binding +
                           ", which has no beds");
    for (std::size_t p = 0; p < subs.size(); ++p) c.subCounts[g][p] = assess_detail::fraction(mix.subMix[g][p]) * n;
  }
  c.allocation = firstOptionAllocation(catalog, c.subCounts);
  finalizeCohort(c, config, catalog, mss);
  return c;
}

// Sessions needed for type-level targets: m_g = n^_g sum_p mu_{g,p} t_{g,p,1} / D.
inline std::vector<double> sessionsRequired(const std::vector<double>& typeTargets, const Mix& mix,
                                            const PatientCatalog& catalog, double sessionHours) {
  validateMix(mix, catalog, false, true);
  if (!(sessionHours > 0)) throw ValidationError("sessionHours", "must be > 0");
  if (typeTargets.size() != catalog.typeCount())
    throw ValidationError("typeTargets", "expected " + std::to_string(catalog.typeCount()) + " entries");
  std::vector<double> m(typeTargets.size(), 0.0);
  for (std::size_t g = 0; g < m.size(); ++g) {
    double avg = 0.0;
    const auto& subs = catalog.types[g].subTypes;
    for (std::size_t p = 0; p < subs.size(); ++p)
      avg += assess_detail::fraction(mix.subMix[g][p]) * subs[p].profile.tSurgery;
    m[g] = typeTargets[g] * avg / sessionHours;
  }
  return m;
}

// Sessions needed for sub-type targets: m_g = sum_p n^_{g,p} t_{g,p,1} / D.
inline std::vector<double> sessionsRequired(const std::vector<std::vector<double>>& subTargets,
                                            const PatientCatalog& catalog, double sessionHours) {
  if (!(sessionHours > 0)) throw ValidationError("sessionHours", "must be > 0");
  if (subTargets.size() != catalog.typeCount())
    throw ValidationError("subTargets", "expected " + std::to_string(catalog.typeCount()) + " types");
  std::vector<double> m(subTargets.size(), 0.0);
  for (std::size_t g = 0; g < m.size(); ++g) {
    const auto& subs = catalog.types[g].subTypes;
    if (subTargets[g].size() != subs.size())
      throw ValidationError("subTargets[" + std::to_string(g + 1) + "]", "wrong sub-type count");
    for (std::size_t p = 0; p < subs.size(); ++p) m[g] += subTargets[g][p] * subs[p].profile.tSurgery;
    m[g] /= sessionHours;
  }
  return m;
}

}  // namespace hoplite
