#pragma once

// HTTP routes over a SessionStore.

#include <chrono>
#include <string>

#include "httplib.h"

#include "hoplite/session.hpp"

namespace hoplite {

inline void mountRoutes(httplib::Server& server, SessionStore& store) {
  auto send = [](httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto parse = [](const httplib::Request& req, Json& out) {
    if (req.body.empty()) {
      out = Json::object();
      return true;
    }
    out = Json::parse(req.body, nullptr, false);
    return !out.is_discarded();
  };
  auto withBody = [=](auto handler) {
    return [=](const httplib::Request& req, httplib::Response& res) {
      Json body;
      if (!parse(req, body)) return send(res, errorResponse(400, "malformed JSON body"));
      send(res, handler(req, body));
    };
  };
  const std::string id = R"(/sessions/([A-Za-z0-9_-]+))";

  server.Post("/sessions", withBody([&](const httplib::Request&, const Json& b) { return store.create(b); }));
  server.Get(id, [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, store.get(req.matches[1]));
  });
  server.Delete(id, [&, send](const httplib::Request& req, httplib::Response& res) {
    send(res, store.remove(req.matches[1]));
  });
  server.Patch(id + "/overlay",
               withBody([&](const httplib::Request& req, const Json& b) { return store.patch(req.matches[1], b); }));
  server.Post(id + "/overlay/fix-mix",
              withBody([&](const httplib::Request& req, const Json& b) { return store.fixMix(req.matches[1], b); }));
  server.Post(id + "/overlay/even-mix",
              withBody([&](const httplib::Request& req, const Json& b) { return store.evenMix(req.matches[1], b); }));
  server.Post(id + "/overlay/solo-mix",
              withBody([&](const httplib::Request& req, const Json& b) { return store.soloMix(req.matches[1], b); }));
  server.Post(id + "/overlay/even-sessions",
              withBody([&](const httplib::Request& req, const Json&) { return store.evenSessions(req.matches[1]); }));
  server.Post(id + "/overlay/reset",
              withBody([&](const httplib::Request& req, const Json&) { return store.reset(req.matches[1]); }));
  server.Post(id + "/tasks", [&, parse, send](const httplib::Request& req, httplib::Response& res) {
    Json body;
    if (!parse(req, body)) return send(res, errorResponse(400, "malformed JSON body"));
    const auto start = std::chrono::steady_clock::now();
    const auto r = store.runTask(req.matches[1], body);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    res.set_header("X-Elapsed-Ms", std::to_string(ms));
    send(res, r);
  });
  server.set_exception_handler([send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    send(res, errorResponse(500, what));
  });
}

}  // namespace hoplite
