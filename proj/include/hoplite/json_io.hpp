#pragma once

// JSON mirror of the project bundle and of every result type. Field names
// follow the domain types; catalogs use the flat types/subTypes/profiles/
// revenues lists of the file formats.

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "json.hpp"

#include "hoplite/assess.hpp"
#include "hoplite/fileio.hpp"
#include "hoplite/models.hpp"

namespace hoplite {

using Json = nlohmann::ordered_json;

namespace json_detail {

inline Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

inline Json nested(const std::vector<std::vector<double>>& xs) {
  Json a = Json::array();
  for (const auto& row : xs) a.push_back(numbers(row));
  return a;
}

// Reads a required member, turning type errors into field-level messages.
template <class T>
T get(const Json& j, const char* key, const std::string& path) {
  const std::string field = path.empty() ? key : path + "." + key;
  if (!j.is_object() || !j.contains(key)) throw ValidationError(field, "missing");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(field, "wrong type");
  }
}

template <class T>
T getOr(const Json& j, const char* key, T fallback, const std::string& path) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return get<T>(j, key, path);
}

inline const Json& member(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(path.empty() ? key : path + "." + key, "missing");
  return j.at(key);
}

inline const Json& array(const Json& j, const char* key, const std::string& path) {
  const Json& a = member(j, key, path);
  if (!a.is_array()) throw ValidationError(path + "." + key, "expected an array");
  return a;
}

}  // namespace json_detail

// --- bundle ----------------------------------------------------------------

inline Json toJson(const HospitalConfig& c) {
  Json wards = Json::array();
  for (const auto& w : c.wards) wards.push_back({{"wardId", w.wardId}, {"name", w.name}, {"beds", w.beds}});
  return {{"icuBeds", c.icuBeds}, {"theatres", c.theatres}, {"wards", wards}};
}

inline Json toJson(const PatientCatalog& cat) {
  Json types = Json::array(), subTypes = Json::array(), profiles = Json::array(), revenues = Json::array();
  for (const auto& t : cat.types) {
    types.push_back({{"g", t.g}, {"name", t.name}, {"subTypeCount", t.subTypes.size()}});
    for (const auto& s : t.subTypes) {
      subTypes.push_back({{"g", t.g}, {"p", s.p}, {"name", s.name}});
      profiles.push_back({{"g", t.g},
                          {"p", s.p},
                          {"tSurgery", s.profile.tSurgery},
                          {"tPostop", s.profile.tPostop},
                          {"tIcu", s.profile.tIcu},
                          {"wardOptions", s.wardOptions}});
      if (s.revenue) revenues.push_back({{"g", t.g}, {"p", s.p}, {"revenue", *s.revenue}});
    }
  }
  return {{"types", types}, {"subTypes", subTypes}, {"profiles", profiles}, {"revenues", revenues}};
}

inline Json toJson(const Mix& m) {
  return {{"caseMix", json_detail::numbers(m.caseMix)}, {"subMix", json_detail::nested(m.subMix)}};
}

inline Json toJson(const SessionAssignment& s) { return {{"sessions", json_detail::numbers(s.sessions)}}; }

inline Json toJson(const TargetSet& t) {
  return {{"typeTargets", json_detail::numbers(t.typeTargets)},
          {"subTargets", json_detail::nested(t.subTargets)},
          {"weights", json_detail::numbers(t.weights)}};
}

inline Json toJson(const Allocation& a) {
  Json entries = Json::array();
  for (const auto& e : a.entries)
    entries.push_back({{"g", e.g}, {"p", e.p}, {"k", e.k}, {"ward", e.ward}, {"count", e.count}});
  return {{"entries", entries}};
}

inline Json toJson(const ProjectBundle& b) {
  Json j = {{"projectName", b.projectName}, {"config", toJson(b.config)}, {"catalog", toJson(b.catalog)}};
  j["mix"] = b.mix ? toJson(*b.mix) : Json(nullptr);
  j["sessions"] = b.sessions ? toJson(*b.sessions) : Json(nullptr);
  j["targets"] = b.targets ? toJson(*b.targets) : Json(nullptr);
  j["allocation"] = b.allocation ? toJson(*b.allocation) : Json(nullptr);
  return j;
}

inline HospitalConfig configFromJson(const Json& j, const std::string& path = "config") {
  using namespace json_detail;
  HospitalConfig c;
  c.icuBeds = get<int>(j, "icuBeds", path);
  c.theatres = get<int>(j, "theatres", path);
  int i = 0;
  for (const auto& w : array(j, "wards", path)) {
    const std::string wp = path + ".wards[" + std::to_string(i++) + "]";
    c.wards.push_back({getOr<int>(w, "wardId", i, wp), get<std::string>(w, "name", wp), get<int>(w, "beds", wp)});
  }
  c.validate();
  return c;
}

inline PatientCatalog catalogFromJson(const Json& j, const HospitalConfig& config,
                                      const std::string& path = "catalog") {
  using namespace json_detail;
  PatientCatalog cat;
  for (const auto& t : array(j, "types", path)) {
    const std::string tp = path + ".types";
    cat.types.push_back({get<int>(t, "g", tp), get<std::string>(t, "name", tp), {}});
  }
  auto typeAt = [&](int g, const std::string& field) -> PatientType& {
    if (g < 1 || g > static_cast<int>(cat.types.size())) throw ValidationError(field, "unknown type " + std::to_string(g));
    return cat.types[g - 1];
  };
  for (const auto& s : array(j, "subTypes", path)) {
    const std::string sp = path + ".subTypes";
    auto& t = typeAt(get<int>(s, "g", sp), sp);
    SubType st;
    st.p = get<int>(s, "p", sp);
    st.name = get<std::string>(s, "name", sp);
    t.subTypes.push_back(std::move(st));
  }
  auto subAt = [&](const Json& e, const std::string& field) -> SubType& {
    const int g = get<int>(e, "g", field), p = get<int>(e, "p", field);
    auto& t = typeAt(g, field);
    if (p < 1 || p > static_cast<int>(t.subTypes.size()))
      throw ValidationError(field, "unknown sub-type [" + std::to_string(g) + "][" + std::to_string(p) + "]");
    return t.subTypes[p - 1];
  };
  for (const auto& e : array(j, "profiles", path)) {
    const std::string pp = path + ".profiles";
    auto& s = subAt(e, pp);
    s.profile = {get<double>(e, "tSurgery", pp), get<double>(e, "tPostop", pp), get<double>(e, "tIcu", pp)};
    s.wardOptions = getOr<std::vector<std::string>>(e, "wardOptions", {}, pp);
  }
  if (j.contains("revenues"))
    for (const auto& e : array(j, "revenues", path)) subAt(e, path + ".revenues").revenue = get<double>(e, "revenue", path + ".revenues");
  cat.validate(config);
  for (const auto& t : cat.types) {
    const auto declared = j.at("types")[static_cast<std::size_t>(t.g - 1)].value("subTypeCount", t.subTypes.size());
    if (declared != t.subTypes.size())
      throw ValidationError(path + ".types[" + std::to_string(t.g) + "]", "subTypeCount does not match subTypes");
  }
  return cat;
}

inline Mix mixFromJson(const Json& j, const std::string& path = "mix") {
  using namespace json_detail;
  return {getOr<std::vector<double>>(j, "caseMix", {}, path),
          getOr<std::vector<std::vector<double>>>(j, "subMix", {}, path)};
}

inline SessionAssignment sessionsFromJson(const Json& j, const std::string& path = "sessions") {
  return {json_detail::get<std::vector<double>>(j, "sessions", path)};
}

inline TargetSet targetsFromJson(const Json& j, const std::string& path = "targets") {
  using namespace json_detail;
  return {getOr<std::vector<double>>(j, "typeTargets", {}, path),
          getOr<std::vector<std::vector<double>>>(j, "subTargets", {}, path),
          getOr<std::vector<double>>(j, "weights", {}, path)};
}

inline Allocation allocationFromJson(const Json& j, const std::string& path = "allocation") {
  using namespace json_detail;
  Allocation a;
  for (const auto& e : array(j, "entries", path)) {
    const std::string ep = path + ".entries";
    a.entries.push_back({get<int>(e, "g", ep), get<int>(e, "p", ep), get<int>(e, "k", ep),
                         get<std::string>(e, "ward", ep), get<double>(e, "count", ep)});
  }
  return a;
}

inline ProjectBundle bundleFromJson(const Json& j) {
  using namespace json_detail;
  if (!j.is_object()) throw ValidationError("bundle", "expected an object");
  ProjectBundle b;
  b.projectName = getOr<std::string>(j, "projectName", "", "");
  b.config = configFromJson(member(j, "config", ""));
  b.catalog = catalogFromJson(member(j, "catalog", ""), b.config);
  auto present = [&](const char* key) { return j.contains(key) && !j.at(key).is_null(); };
  if (present("mix")) b.mix = mixFromJson(j.at("mix"));
  if (present("sessions")) b.sessions = sessionsFromJson(j.at("sessions"));
  if (present("targets")) b.targets = targetsFromJson(j.at("targets"));
  if (present("allocation")) b.allocation = allocationFromJson(j.at("allocation"));
  checkBundle(b);
  return b;
}

// --- results ---------------------------------------------------------------

inline Json toJson(const ResourceUsage& r) {
  return {{"name", r.name},
          {"spaces", r.spaces},
          {"usedHours", r.usedHours},
          {"availableHours", r.availableHours},
          {"percentUsed", json_detail::number(r.percentUsed)},
          {"patientsTreated", r.patientsTreated},
          {"bottleneck", r.bottleneck}};
}

inline Json toJson(const UtilizationReport& rep) {
  Json rows = Json::array();
  for (const auto& r : rep.rows) rows.push_back(toJson(r));
  return {{"resources", rows}};
}

inline Json toJson(const CohortResult& c) {
  Json groups = Json::array();
  for (const auto& g : c.groups)
    groups.push_back({{"usedHours", g.usedHours},
                      {"availableHours", g.availableHours},
                      {"percentUsed", json_detail::number(g.percentUsed)}});
  return {{"total", c.total},
          {"typeCounts", json_detail::numbers(c.typeCounts)},
          {"subCounts", json_detail::nested(c.subCounts)},
          {"allocation", toJson(c.allocation)["entries"]},
          {"report", toJson(c.report)["resources"]},
          {"groups", groups},
          {"typeRevenue", json_detail::numbers(c.typeRevenue)},
          {"totalRevenue", c.totalRevenue},
          {"warnings", c.warnings}};
}

inline Json toJson(const FeasibilityVerdict& v) {
  Json violations = Json::array();
  for (const auto& x : v.violations) violations.push_back({{"resource", x.resource}, {"excessHours", x.excessHours}});
  Json j = {{"feasible", v.feasible}, {"violations", violations}, {"mismatches", v.mismatches}};
  j["cohort"] = v.cohort ? toJson(*v.cohort) : Json(nullptr);
  return j;
}

inline Json toJson(const BestFitResult& r) {
  return {{"cohort", toJson(r.cohort)},
          {"targets", toJson(r.targets)},
          {"typeUnmet", json_detail::numbers(r.typeUnmet)},
          {"subUnmet", json_detail::nested(r.subUnmet)},
          {"totalUnmet", r.totalUnmet},
          {"objective", r.objective},
          {"errorBound", r.errorBound},
          {"allTargetsMet", r.allTargetsMet},
          {"postOptimized", r.postOptimized}};
}

inline Json toJson(const MssTemplate& m) {
  return {{"weeks", m.weeks},
          {"daysPerWeek", m.daysPerWeek},
          {"sessionsPerDay", m.sessionsPerDay},
          {"sessionHours", m.sessionHours},
          {"theatres", m.theatres},
          {"sessions", computeSessions(m)}};
}

}  // namespace hoplite
