#pragma once

// Core value types for hospital capacity planning: hospital layout, patient
// catalog with resource consumption profiles, MSS template, mixes, session
// assignments, targets and allocations. Indices g (type) and p (sub-type)
// are 1-based everywhere they are exposed, matching the project files.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hoplite/error.hpp"

namespace hoplite {

inline constexpr double kHoursPerWeek = 168.0;
inline constexpr double kMixTolerance = 1e-6;

struct Ward {
  int wardId = 0;
  std::string name;
  int beds = 0;

  bool operator==(const Ward&) const = default;
};

struct HospitalConfig {
  int icuBeds = 0;
  int theatres = 0;
  std::vector<Ward> wards;

  std::optional<std::size_t> wardIndex(std::string_view name) const {
    for (std::size_t i = 0; i < wards.size(); ++i)
      if (wards[i].name == name) return i;
    return std::nullopt;
  }

  int totalBeds() const {
    int total = 0;
    for (const auto& w : wards) total += w.beds;
    return total;
  }

  void validate() const {
    if (icuBeds < 0) throw ValidationError("icuBeds", "must be >= 0");
    if (theatres < 0) throw ValidationError("theatres", "must be >= 0");
    std::unordered_set<std::string> seen;
    for (const auto& w : wards) {
      if (w.beds < 0) throw ValidationError("wards[" + w.name + "]", "bed count must be >= 0");
      if (!seen.insert(w.name).second)
        throw ValidationError("wards[" + w.name + "]", "duplicate ward name");
    }
  }

  bool operator==(const HospitalConfig&) const = default;
};

// Hours of theatre, postop ward and ICU time consumed by one patient.
struct Profile {
  double tSurgery = 0.0;
  double tPostop = 0.0;
  double tIcu = 0.0;

  // A ward bed is held during surgery as well as recovery.
  double wardHours() const { return tSurgery + tPostop; }

  bool operator==(const Profile&) const = default;
};

struct SubType {
  int p = 0;
  std::string name;
  Profile profile;
  std::vector<std::string> wardOptions;
  std::optional<double> revenue;

  bool operator==(const SubType&) const = default;
};

struct PatientType {
  int g = 0;
  std::string name;
  std::vector<SubType> subTypes;

  bool operator==(const PatientType&) const = default;
};

struct SubTypeKey {
  int g = 0;
  int p = 0;
  bool operator==(const SubTypeKey&) const = default;
};

struct PatientCatalog {
  std::vector<PatientType> types;

  std::size_t typeCount() const { return types.size(); }

  std::size_t subTypeCount() const {
    std::size_t n = 0;
    for (const auto& t : types) n += t.subTypes.size();
    return n;
  }

  bool contains(int g, int p) const {
    return g >= 1 && g <= static_cast<int>(types.size()) && p >= 1 &&
           p <= static_cast<int>(types[g - 1].subTypes.size());
  }

  const PatientType& type(int g) const {
    if (g < 1 || g > static_cast<int>(types.size()))
      throw ValidationError("type[" + std::to_string(g) + "]", "no such patient type");
    return types[g - 1];
  }

  const SubType& subType(int g, int p) const {
    if (!contains(g, p))
      throw ValidationError("subType[" + std::to_string(g) + "][" + std::to_string(p) + "]",
                            "no such patient sub-type");
    return types[g - 1].subTypes[p - 1];
  }

  // Sub-type keys in (g, p) order; position in this list is the flat index.
  std::vector<SubTypeKey> keys() const {
    std::vector<SubTypeKey> out;
    out.reserve(subTypeCount());
    for (const auto& t : types)
      for (const auto& s : t.subTypes) out.push_back({t.g, s.p});
    return out;
  }

  void validate(const HospitalConfig& config) const {
    for (std::size_t gi = 0; gi < types.size(); ++gi) {
      const auto& t = types[gi];
      if (t.g != static_cast<int>(gi) + 1)
        throw ValidationError("type[" + std::to_string(t.g) + "]", "type ids must be 1..|G| in order");
      for (std::size_t pi = 0; pi < t.subTypes.size(); ++pi) {
        const auto& s = t.subTypes[pi];
        const std::string field =
            "subType[" + std::to_string(t.g) + "][" + std::to_string(s.p) + "]";
        if (s.p != static_cast<int>(pi) + 1)
          throw ValidationError(field, "sub-type ids must be 1..|P_g| in order");
        const auto& pr = s.profile;
        if (!(pr.tSurgery >= 0) || !(pr.tPostop >= 0) || !(pr.tIcu >= 0))
          throw ValidationError(field, "durations must be >= 0");
        if (pr.tPostop > 0 && s.wardOptions.empty())
          throw ValidationError(field, "postop time requires at least one ward option");
        std::unordered_set<std::string> seen;
        for (const auto& w : s.wardOptions) {
          if (!config.wardIndex(w)) throw ValidationError(field, "unknown ward '" + w + "'");
          if (!seen.insert(w).second) throw ValidationError(field, "ward '" + w + "' listed twice");
        }
      }
    }
  }

  bool operator==(const PatientCatalog&) const = default;
};

struct MssTemplate {
  int weeks = 1;
  int daysPerWeek = 5;
  int sessionsPerDay = 2;
  double sessionHours = 4.0;
  int theatres = 0;

  bool operator==(const MssTemplate&) const = default;
};

// Total theatre sessions M in the template.
inline std::int64_t computeSessions(const MssTemplate& mss) {
  return static_cast<std::int64_t>(mss.weeks) * mss.daysPerWeek * mss.sessionsPerDay * mss.theatres;
}

struct Availability {
  std::int64_t sessions = 0;
  double theatreHours = 0.0;  // M * D
  double hoursPerBed = 0.0;   // 168 * weeks
  double icuHours = 0.0;
  std::vector<double> wardHours;  // per ward, hoursPerBed * beds
  double allWardHours = 0.0;
};

inline Availability availabilityOf(const MssTemplate& mss, const HospitalConfig& config) {
  Availability a;
  a.sessions = computeSessions(mss);
  a.theatreHours = static_cast<double>(a.sessions) * mss.sessionHours;
  a.hoursPerBed = kHoursPerWeek * mss.weeks;
  a.icuHours = a.hoursPerBed * config.icuBeds;
  for (const auto& w : config.wards) a.wardHours.push_back(a.hoursPerBed * w.beds);
  a.allWardHours = a.hoursPerBed * config.totalBeds();
  return a;
}

// Percentages 0-100. An empty caseMix / subMix means "not supplied".
struct Mix {
  std::vector<double> caseMix;
  std::vector<std::vector<double>> subMix;

  bool hasCaseMix() const { return !caseMix.empty(); }
  bool hasSubMix() const { return !subMix.empty(); }

  bool operator==(const Mix&) const = default;
};

struct MixCorrection {
  double errorPercent = 0.0;
  std::vector<double> rescaled;
};

inline double mixError(std::span<const double> percentages) {
  return std::abs(std::accumulate(percentages.begin(), percentages.end(), 0.0) - 100.0);
}

// "Fix Error": proportional rescale to 100, rounded to 2 decimals with the
// rounding residual absorbed by the largest entry.
inline MixCorrection normalizeMix(std::span<const double> percentages) {
  MixCorrection out;
  double sum = 0.0;
  for (double x : percentages) {
    if (!(x >= 0)) throw ValidationError("mix", "percentages must be >= 0");
    sum += x;
  }
  if (percentages.empty() || sum <= 0.0) throw ValidationError("mix", "degenerate mix");
  out.errorPercent = std::abs(sum - 100.0);
  out.rescaled.assign(percentages.begin(), percentages.end());
  if (out.errorPercent <= 1e-9) return out;

  double roundedSum = 0.0;
  std::size_t largest = 0;
  for (std::size_t i = 0; i < out.rescaled.size(); ++i) {
    out.rescaled[i] = std::round(100.0 * percentages[i] / sum * 100.0) / 100.0;
    roundedSum += out.rescaled[i];
    if (out.rescaled[i] > out.rescaled[largest]) largest = i;
  }
  out.rescaled[largest] += 100.0 - roundedSum;
  return out;
}

inline void validateMix(const Mix& mix, const PatientCatalog& catalog, bool requireCaseMix,
                        bool requireSubMix) {
  if (requireCaseMix && !mix.hasCaseMix()) throw ValidationError("caseMix", "case mix is required");
  if (requireSubMix && !mix.hasSubMix()) throw ValidationError("subMix", "sub mix is required");
  if (mix.hasCaseMix()) {
    if (mix.caseMix.size() != catalog.typeCount())
      throw ValidationError("caseMix", "expected " + std::to_string(catalog.typeCount()) + " entries");
    for (double x : mix.caseMix)
      if (!(x >= 0 && x <= 100)) throw ValidationError("caseMix", "entries must lie in [0,100]");
    const double err = mixError(mix.caseMix);
    if (err > kMixTolerance)
      throw ValidationError("caseMix", "case mix sums to " + std::to_string(100.0 + err) +
                                           "%, must be 100%");
  }
  if (mix.hasSubMix()) {
    if (mix.subMix.size() != catalog.typeCount())
      throw ValidationError("subMix", "expected " + std::to_string(catalog.typeCount()) + " types");
    for (std::size_t g = 0; g < mix.subMix.size(); ++g) {
      const std::string field = "subMix[" + std::to_string(g + 1) + "]";
      if (mix.subMix[g].size() != catalog.types[g].subTypes.size())
        throw ValidationError(field, "expected " + std::to_string(catalog.types[g].subTypes.size()) +
                                         " entries");
      for (double x : mix.subMix[g])
        if (!(x >= 0 && x <= 100)) throw ValidationError(field, "entries must lie in [0,100]");
      const double sum = std::accumulate(mix.subMix[g].begin(), mix.subMix[g].end(), 0.0);
      if (std::abs(sum - 100.0) > kMixTolerance) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", sum);
        throw ValidationError(field, std::string("sub mix sums to ") + buf + "%, must be 100%");
      }
    }
  }
}

struct SessionAssignment {
  std::vector<double> sessions;  // m_g, fractional allowed

  double assigned() const { return std::accumulate(sessions.begin(), sessions.end(), 0.0); }
  double unassigned(std::int64_t totalSessions) const {
    return std::max(0.0, static_cast<double>(totalSessions) - assigned());
  }

  bool operator==(const SessionAssignment&) const = default;
};

struct TargetSet {
  std::vector<double> typeTargets;               // n^_g, empty if absent
  std::vector<std::vector<double>> subTargets;   // n^_{g,p}, empty if absent
  std::vector<double> weights;                   // w_g, empty means all 1

  bool hasTypeTargets() const { return !typeTargets.empty(); }
  bool hasSubTargets() const { return !subTargets.empty(); }
  double weight(std::size_t gIndex) const {
    return gIndex < weights.size() ? weights[gIndex] : 1.0;
  }

  // n^_g = max(n^_g, sum_p n^_{g,p}) when both levels are present.
  TargetSet consistent() const {
    TargetSet out = *this;
    if (hasTypeTargets() && hasSubTargets())
      for (std::size_t g = 0; g < out.typeTargets.size() && g < subTargets.size(); ++g)
        out.typeTargets[g] = std::max(
            out.typeTargets[g], std::accumulate(subTargets[g].begin(), subTargets[g].end(), 0.0));
    return out;
  }

  void validate(const PatientCatalog& catalog) const {
    if (hasTypeTargets() && typeTargets.size() != catalog.typeCount())
      throw ValidationError("typeTargets", "expected " + std::to_string(catalog.typeCount()) + " entries");
    for (double x : typeTargets)
      if (!(x >= 0)) throw ValidationError("typeTargets", "targets must be >= 0");
    if (hasSubTargets()) {
      if (subTargets.size() != catalog.typeCount())
        throw ValidationError("subTargets", "expected " + std::to_string(catalog.typeCount()) + " types");
      for (std::size_t g = 0; g < subTargets.size(); ++g) {
        if (subTargets[g].size() != catalog.types[g].subTypes.size())
          throw ValidationError("subTargets[" + std::to_string(g + 1) + "]", "wrong sub-type count");
        for (double x : subTargets[g])
          if (!(x >= 0)) throw ValidationError("subTargets", "targets must be >= 0");
      }
    }
    if (!weights.empty() && weights.size() != catalog.typeCount())
      throw ValidationError("weights", "expected " + std::to_string(catalog.typeCount()) + " entries");
    for (double w : weights)
      if (!(w > 0)) throw ValidationError("weights", "weights must be > 0");
  }

  bool operator==(const TargetSet&) const = default;
};

struct AllocationEntry {
  int g = 0;
  int p = 0;
  int k = 0;  // 1-based index into the sub-type's ward options
  std::string ward;
  double count = 0.0;

  bool operator==(const AllocationEntry&) const = default;
};

struct Allocation {
  std::vector<AllocationEntry> entries;

  void validate(const PatientCatalog& catalog) const {
    for (const auto& e : entries) {
      const std::string field = "allocation[" + std::to_string(e.g) + "][" + std::to_string(e.p) +
                                "][" + std::to_string(e.k) + "]";
      if (!catalog.contains(e.g, e.p)) throw ValidationError(field, "no such sub-type");
      const auto& opts = catalog.subType(e.g, e.p).wardOptions;
      if (e.k < 1 || e.k > static_cast<int>(opts.size()))
        throw ValidationError(field, "ward option index out of range");
      if (opts[e.k - 1] != e.ward)
        throw ValidationError(field, "ward '" + e.ward + "' is not option " + std::to_string(e.k));
      if (!(e.count >= 0)) throw ValidationError(field, "count must be >= 0");
    }
  }

  bool operator==(const Allocation&) const = default;
};

// Pathways and resource consumption profiles.
struct PathwayStep {
  std::string activity;
  std::string area;
  double hours = 0.0;
};

using AreaTime = std::pair<std::string, double>;

// Aggregates time per area; areas appear in first-visit order.
inline std::vector<AreaTime> pathwayToProfile(std::span<const PathwayStep> pathway) {
  std::vector<AreaTime> profile;
  for (const auto& step : pathway) {
    if (!(step.hours >= 0))
      throw ValidationError("pathway[" + step.activity + "@" + step.area + "]",
                            "negative duration");
    auto it = std::find_if(profile.begin(), profile.end(),
                           [&](const AreaTime& at) { return at.first == step.area; });
    if (it == profile.end())
      profile.emplace_back(step.area, step.hours);
    else
      it->second += step.hours;
  }
  return profile;
}

}  // namespace hoplite
