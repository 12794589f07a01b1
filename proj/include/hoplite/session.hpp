#pragma once

// In-memory what-if sessions. Each session keeps the loaded bundle untouched
// and applies an overlay of planner edits on top of it. Every operation
// returns an HTTP-style status with a JSON body so the server stays a thin
// routing layer.

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <string>

#include "hoplite/json_io.hpp"
#include "hoplite/tasks.hpp"

namespace hoplite {

struct Overlay {
  std::map<std::string, int> bedDeltas;  // ward name -> beds added (negative removes)
  int icuDelta = 0;
  int theatreDelta = 0;
  int weeks = 1;
  int daysPerWeek = 5;
  int sessionsPerDay = 2;
  double sessionHours = 4.0;
  std::optional<Mix> mix;
  std::optional<SessionAssignment> sessions;
  std::optional<TargetSet> targets;
  std::optional<Allocation> allocation;

  bool operator==(const Overlay&) const = default;
};

inline Json toJson(const Overlay& o) {
  Json beds = Json::object();
  for (const auto& [w, d] : o.bedDeltas) beds[w] = d;
  Json j = {{"bedDeltas", beds},
            {"icuDelta", o.icuDelta},
            {"theatreDelta", o.theatreDelta},
            {"mss",
             {{"weeks", o.weeks},
              {"daysPerWeek", o.daysPerWeek},
              {"sessionsPerDay", o.sessionsPerDay},
              {"sessionHours", o.sessionHours}}}};
  j["mix"] = o.mix ? toJson(*o.mix) : Json(nullptr);
  j["sessions"] = o.sessions ? toJson(*o.sessions) : Json(nullptr);
  j["targets"] = o.targets ? toJson(*o.targets) : Json(nullptr);
  j["allocation"] = o.allocation ? toJson(*o.allocation) : Json(nullptr);
  return j;
}

struct Response {
  int status = 200;
  Json body;
};

inline Response errorResponse(int status, const std::string& message, const std::string& field = "") {
  Json b = {{"error", message}};
  if (!field.empty()) b["field"] = field;
  return {status, b};
}

struct WhatIfSession {
  std::string id;
  ProjectBundle base;
  Overlay overlay;
  std::map<std::string, Json> lastResults;
  mutable std::shared_mutex mutex;
};

// Effective state of a session: the bundle with the overlay applied.
struct EffectiveState {
  ProjectBundle bundle;
  MssTemplate mss;
};

inline EffectiveState applyOverlay(const ProjectBundle& base, const Overlay& o) {
  EffectiveState s{base, {}};
  auto& cfg = s.bundle.config;
  for (const auto& [ward, delta] : o.bedDeltas) {
    const auto w = cfg.wardIndex(ward);
    if (!w) throw ValidationError("bedDeltas[" + ward + "]", "unknown ward");
    cfg.wards[*w].beds += delta;
    if (cfg.wards[*w].beds < 0) throw ValidationError("bedDeltas[" + ward + "]", "bed count would fall below 0");
  }
  cfg.icuBeds += o.icuDelta;
  if (cfg.icuBeds < 0) throw ValidationError("icuDelta", "ICU bed count would fall below 0");
  cfg.theatres += o.theatreDelta;
  if (cfg.theatres < 0) throw ValidationError("theatreDelta", "theatre count would fall below 0");
  if (o.weeks < 1) throw ValidationError("mss.weeks", "must be >= 1");
  if (o.daysPerWeek < 0 || o.sessionsPerDay < 0) throw ValidationError("mss", "counts must be >= 0");
  if (!(o.sessionHours >= 0)) throw ValidationError("mss.sessionHours", "must be >= 0");
  s.mss = {o.weeks, o.daysPerWeek, o.sessionsPerDay, o.sessionHours, cfg.theatres};
  if (o.mix) s.bundle.mix = o.mix;
  if (o.sessions) s.bundle.sessions = o.sessions;
  if (o.targets) s.bundle.targets = o.targets;
  if (o.allocation) s.bundle.allocation = o.allocation;
  // Mix sums are checked when a task runs, so edits in progress are kept.
  if (s.bundle.mix) {
    const auto& m = *s.bundle.mix;
    if (m.hasCaseMix() && m.caseMix.size() != s.bundle.catalog.typeCount())
      throw ValidationError("caseMix", "expected " + std::to_string(s.bundle.catalog.typeCount()) + " entries");
    for (double x : m.caseMix)
      if (!(x >= 0 && x <= 100)) throw ValidationError("caseMix", "entries must lie in [0,100]");
    if (m.hasSubMix()) {
      if (m.subMix.size() != s.bundle.catalog.typeCount())
        throw ValidationError("subMix", "expected " + std::to_string(s.bundle.catalog.typeCount()) + " types");
      for (std::size_t g = 0; g < m.subMix.size(); ++g) {
        if (m.subMix[g].size() != s.bundle.catalog.types[g].subTypes.size())
          throw ValidationError("subMix[" + std::to_string(g + 1) + "]", "wrong sub-type count");
        for (double x : m.subMix[g])
          if (!(x >= 0 && x <= 100))
            throw ValidationError("subMix[" + std::to_string(g + 1) + "]", "entries must lie in [0,100]");
      }
    }
  }
  if (s.bundle.sessions) {
    if (s.bundle.sessions->sessions.size() != s.bundle.catalog.typeCount())
      throw ValidationError("sessions", "expected " + std::to_string(s.bundle.catalog.typeCount()) + " entries");
    for (double m : s.bundle.sessions->sessions)
      if (!(m >= 0)) throw ValidationError("sessions", "session counts must be >= 0");
  }
  if (s.bundle.targets) s.bundle.targets->validate(s.bundle.catalog);
  if (s.bundle.allocation) s.bundle.allocation->validate(s.bundle.catalog);
  return s;
}

// Live %error of every mix, as shown next to the mix editors.
inline Json mixErrors(const ProjectBundle& b) {
  Json j = {{"caseMix", nullptr}, {"subMix", Json::array()}};
  if (!b.mix) return j;
  if (b.mix->hasCaseMix()) j["caseMix"] = mixError(b.mix->caseMix);
  for (const auto& row : b.mix->subMix) j["subMix"].push_back(mixError(row));
  return j;
}

class SessionStore {
 public:
  Response create(const Json& body) {
    try {
      if (!body.is_object()) return errorResponse(400, "expected a JSON object");
      ProjectBundle bundle;
      if (body.contains("path")) {
        ParseOptions opts;
        opts.lenient = body.value("lenient", false);
        bundle = loadProject(json_detail::get<std::string>(body, "path", ""), opts);
      } else if (body.contains("bundle")) {
        bundle = bundleFromJson(body.at("bundle"));
      } else {
        return errorResponse(422, "give either \"path\" or \"bundle\"", "path");
      }
      auto s = std::make_shared<WhatIfSession>();
      s->id = "s" + std::to_string(++counter_);
      s->base = std::move(bundle);
      {
        std::unique_lock lock(mutex_);
        sessions_[s->id] = s;
      }
      std::shared_lock lock(s->mutex);
      return {201, stateOf(*s)};
    } catch (const ParseError& e) {
      return {422, {{"error", e.message()}, {"location", e.where().str()}}};
    } catch (const ValidationError& e) {
      return errorResponse(422, e.what(), e.field());
    } catch (const Error& e) {
      return errorResponse(422, e.what());
    }
  }

  Response get(const std::string& id) const {
    auto s = find(id);
    if (!s) return notFound(id);
    std::shared_lock lock(s->mutex);
    return {200, stateOf(*s)};
  }

  Response remove(const std::string& id) {
    std::unique_lock lock(mutex_);
    if (sessions_.erase(id) == 0) return notFound(id);
    return {200, {{"deleted", id}}};
  }

  // Applies edits atomically: all or nothing.
  Response patch(const std::string& id, const Json& edits) {
    return mutate(id, [&](Overlay& o, const ProjectBundle& base) { applyEdits(o, base, edits); });
  }

  // level "case", "sub" (with g) or absent for every mix.
  Response fixMix(const std::string& id, const Json& body) {
    return mutate(id, [&](Overlay& o, const ProjectBundle& base) {
      Mix mix = currentMix(o, base);
      forEachSelectedMix(mix, body, [](std::vector<double>& xs, const std::string&) {
        if (mixError(xs) > 0) xs = normalizeMix(xs).rescaled;
      });
      o.mix = mix;
    });
  }

  // Equal split of the selected mix ("Even").
  Response evenMix(const std::string& id, const Json& body) {
    return mutate(id, [&](Overlay& o, const ProjectBundle& base) {
      Mix mix = currentMix(o, base);
      forEachSelectedMix(mix, body, [](std::vector<double>& xs, const std::string&) {
        xs.assign(xs.size(), 1.0);
        xs = normalizeMix(xs).rescaled;
      });
      o.mix = mix;
    });
  }

  // Whole case mix on one type ("100%").
  Response soloMix(const std::string& id, const Json& body) {
    return mutate(id, [&](Overlay& o, const ProjectBundle& base) {
      Mix mix = currentMix(o, base);
      const int g = json_detail::get<int>(body, "g", "");
      if (g < 1 || g > static_cast<int>(base.catalog.typeCount())) throw ValidationError("g", "no such patient type");
      mix.caseMix.assign(base.catalog.typeCount(), 0.0);
      mix.caseMix[g - 1] = 100.0;
      o.mix = mix;
    });
  }

  // Spreads all sessions of the template over the types ("Set Even Number").
  Response evenSessions(const std::string& id) {
    return mutate(id, [&](Overlay& o, const ProjectBundle& base) {
      const auto state = applyOverlay(base, o);
      const auto total = computeSessions(state.mss);
      const auto types = static_cast<std::int64_t>(base.catalog.typeCount());
      if (types == 0) throw ValidationError("sessions", "no patient types");
      SessionAssignment s;
      for (std::int64_t g = 0; g < types; ++g)
        s.sessions.push_back(static_cast<double>(total / types + (g < total % types ? 1 : 0)));
      o.sessions = s;
    });
  }

  Response reset(const std::string& id) {
    return mutate(id, [](Overlay& o, const ProjectBundle&) { o = Overlay{}; });
  }

  // Runs on a snapshot so tasks of different sessions proceed in parallel.
  Response runTask(const std::string& id, const Json& request) {
    auto s = find(id);
    if (!s) return notFound(id);
    EffectiveState state;
    try {
      std::shared_lock lock(s->mutex);
      state = applyOverlay(s->base, s->overlay);
    } catch (const ValidationError& e) {
      return errorResponse(422, e.what(), e.field());
    }
    try {
      if (!request.is_object()) return errorResponse(400, "expected a JSON object");
      const auto kind = taskKindFrom(json_detail::get<std::string>(request, "kind", ""));
      const Json params = request.contains("params") ? request.at("params") : Json::object();
      const auto outcome = hoplite::runTask(state.bundle, state.mss, kind, params);
      Json body = toJson(outcome);
      std::unique_lock lock(s->mutex);
      s->lastResults[toString(kind)] = body;
      return {200, body};
    } catch (const ValidationError& e) {
      return errorResponse(422, e.what(), e.field());
    } catch (const SolveFailure& e) {
      return {422, {{"error", e.what()}, {"status", std::string(lp::toString(e.status()))}}};
    } catch (const Error& e) {
      return errorResponse(422, e.what());
    }
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return sessions_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<WhatIfSession>> sessions_;
  std::atomic<std::uint64_t> counter_{0};

  std::shared_ptr<WhatIfSession> find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  static Response notFound(const std::string& id) { return errorResponse(404, "unknown session '" + id + "'"); }

  static Json stateOf(const WhatIfSession& s) {
    const auto state = applyOverlay(s.base, s.overlay);
    const auto total = computeSessions(state.mss);
    Json derived = {{"totalSessions", total},
                    {"theatreHours", availabilityOf(state.mss, state.bundle.config).theatreHours},
                    {"mixErrors", mixErrors(state.bundle)}};
    derived["unassignedSessions"] = state.bundle.sessions ? Json(state.bundle.sessions->unassigned(total)) : Json(nullptr);
    Json last = Json::object();
    for (const auto& [k, v] : s.lastResults) last[k] = v;
    return {{"sessionId", s.id},
            {"projectName", s.base.projectName},
            {"bundle", toJson(state.bundle)},
            {"mss", toJson(state.mss)},
            {"overlay", toJson(s.overlay)},
            {"derived", derived},
            {"lastResults", last}};
  }

  template <class F>
  Response mutate(const std::string& id, F&& f) {
    auto s = find(id);
    if (!s) return notFound(id);
    std::unique_lock lock(s->mutex);
    Overlay next = s->overlay;
    try {
      f(next, s->base);
      canonicalize(next, s->base);
      applyOverlay(s->base, next);
    } catch (const ValidationError& e) {
      return errorResponse(422, e.what(), e.field());
    } catch (const Error& e) {
      return errorResponse(422, e.what());
    }
    s->overlay = std::move(next);
    return {200, stateOf(*s)};
  }

  // Edits that restore a loaded component drop out of the overlay.
  static void canonicalize(Overlay& o, const ProjectBundle& base) {
    if (o.mix && base.mix && *o.mix == *base.mix) o.mix.reset();
    if (o.sessions && base.sessions && *o.sessions == *base.sessions) o.sessions.reset();
    if (o.targets && base.targets && *o.targets == *base.targets) o.targets.reset();
    if (o.allocation && base.allocation && *o.allocation == *base.allocation) o.allocation.reset();
  }

  static Mix currentMix(const Overlay& o, const ProjectBundle& base) {
    if (o.mix) return *o.mix;
    if (base.mix) return *base.mix;
    throw ValidationError("mix", "no mix loaded");
  }

  template <class F>
  static void forEachSelectedMix(Mix& mix, const Json& body, F&& f) {
    const std::string level = body.is_object() ? body.value("level", std::string()) : std::string();
    if (level.empty() || level == "case") {
      if (mix.hasCaseMix()) f(mix.caseMix, "caseMix");
      else if (level == "case") throw ValidationError("caseMix", "no case mix loaded");
    }
    if (level.empty() || level == "sub") {
      if (body.is_object() && body.contains("g")) {
        const int g = json_detail::get<int>(body, "g", "");
        if (g < 1 || g > static_cast<int>(mix.subMix.size())) throw ValidationError("g", "no such patient type");
        f(mix.subMix[g - 1], "subMix[" + std::to_string(g) + "]");
      } else {
        for (std::size_t g = 0; g < mix.subMix.size(); ++g) f(mix.subMix[g], "subMix[" + std::to_string(g + 1) + "]");
      }
    }
    if (!level.empty() && level != "case" && level != "sub") throw ValidationError("level", "expected case or sub");
  }

  // Supported edits: bedDeltas {ward: +-n}, icuDelta, theatreDelta (all
  // additive); mss {weeks, daysPerWeek, sessionsPerDay, sessionHours};
  // caseMix [..]; subMix [{g, values}]; sessions [..]; targets {..};
  // allocation {..}.
  static void applyEdits(Overlay& o, const ProjectBundle& base, const Json& e) {
    using json_detail::get;
    if (!e.is_object()) throw ValidationError("", "expected a JSON object");
    static const std::set<std::string> known{"bedDeltas", "icuDelta", "theatreDelta", "mss", "caseMix",
                                             "subMix", "sessions", "targets", "allocation"};
    for (const auto& [key, value] : e.items())
      if (!known.count(key)) throw ValidationError(key, "unknown overlay field");
    if (e.contains("bedDeltas")) {
      const auto& beds = e.at("bedDeltas");
      if (!beds.is_object()) throw ValidationError("bedDeltas", "expected an object of ward: delta");
      for (const auto& [ward, delta] : beds.items()) {
        if (!delta.is_number_integer()) throw ValidationError("bedDeltas[" + ward + "]", "expected an integer");
        if (!base.config.wardIndex(ward)) throw ValidationError("bedDeltas[" + ward + "]", "unknown ward");
        const int next = o.bedDeltas[ward] + delta.get<int>();
        if (next == 0) o.bedDeltas.erase(ward);
        else o.bedDeltas[ward] = next;
      }
    }
    if (e.contains("icuDelta")) o.icuDelta += get<int>(e, "icuDelta", "");
    if (e.contains("theatreDelta")) o.theatreDelta += get<int>(e, "theatreDelta", "");
    if (e.contains("mss")) {
      const auto& m = e.at("mss");
      o.weeks = json_detail::getOr<int>(m, "weeks", o.weeks, "mss");
      o.daysPerWeek = json_detail::getOr<int>(m, "daysPerWeek", o.daysPerWeek, "mss");
      o.sessionsPerDay = json_detail::getOr<int>(m, "sessionsPerDay", o.sessionsPerDay, "mss");
      o.sessionHours = json_detail::getOr<double>(m, "sessionHours", o.sessionHours, "mss");
    }
    if (e.contains("caseMix") || e.contains("subMix")) {
      Mix mix = o.mix ? *o.mix : base.mix.value_or(Mix{});
      if (e.contains("caseMix")) mix.caseMix = get<std::vector<double>>(e, "caseMix", "");
      if (e.contains("subMix")) {
        const auto& edits = e.at("subMix");
        if (!edits.is_array()) throw ValidationError("subMix", "expected a list of {g, values}");
        if (mix.subMix.empty())
          for (const auto& t : base.catalog.types) mix.subMix.emplace_back(t.subTypes.size(), 0.0);
        for (const auto& edit : edits) {
          const int g = get<int>(edit, "g", "subMix");
          if (g < 1 || g > static_cast<int>(mix.subMix.size()))
            throw ValidationError("subMix", "no such patient type " + std::to_string(g));
          mix.subMix[g - 1] = get<std::vector<double>>(edit, "values", "subMix");
        }
      }
      o.mix = mix;
    }
    if (e.contains("sessions")) {
      const auto& s = e.at("sessions");
      o.sessions = s.is_array() ? SessionAssignment{get<std::vector<double>>(e, "sessions", "")} : sessionsFromJson(s);
    }
    if (e.contains("targets")) o.targets = targetsFromJson(e.at("targets"));
    if (e.contains("allocation")) o.allocation = allocationFromJson(e.at("allocation"));
  }
};

}  // namespace hoplite
