#include <thread>

#include "catch_amalgamated.hpp"
#include "hoplite/http_service.hpp"
#include "support/fixtures.hpp"

using namespace hoplite;
using Catch::Approx;

namespace {

std::string projectPath() { return (oracle::scenarioDir() / "scenario_1_full.project").string(); }

std::string open(SessionStore& store) {
  const auto r = store.create({{"path", projectPath()}});
  REQUIRE(r.status == 201);
  return r.body["sessionId"].get<std::string>();
}

}  // namespace

TEST_CASE("sessions are created, read and deleted") {
  SessionStore store;
  const auto id = open(store);
  CHECK(store.size() == 1);
  const auto g = store.get(id);
  CHECK(g.status == 200);
  CHECK(g.body["projectName"] == "scenario_1");
  CHECK(g.body["derived"]["totalSessions"] == 100);
  CHECK(g.body["derived"]["theatreHours"] == 400.0);
  CHECK(g.body["derived"]["unassignedSessions"] == 0.0);
  CHECK(store.remove(id).status == 200);
  CHECK(store.get(id).status == 404);
  CHECK(store.remove(id).status == 404);
}

TEST_CASE("session creation reports bad input") {
  SessionStore store;
  CHECK(store.create(Json::array()).status == 400);
  CHECK(store.create(Json::object()).status == 422);
  const auto missing = store.create({{"path", "/nonexistent/x.project"}});
  CHECK(missing.status == 422);
  CHECK(store.size() == 0);
}

TEST_CASE("session from an inline bundle") {
  SessionStore store;
  const auto b = fixtures::scenario();
  const auto r = store.create({{"bundle", toJson(b)}});
  REQUIRE(r.status == 201);
  CHECK(r.body["bundle"]["config"]["theatres"] == 10);
}

TEST_CASE("overlay edits accumulate and leave the base untouched") {
  SessionStore store;
  const auto id = open(store);
  auto r = store.patch(id, {{"bedDeltas", {{"Ward 2", 3}}}, {"theatreDelta", 2}});
  REQUIRE(r.status == 200);
  r = store.patch(id, {{"bedDeltas", {{"Ward 2", 1}}}});
  CHECK(r.body["overlay"]["bedDeltas"]["Ward 2"] == 4);
  CHECK(r.body["bundle"]["config"]["theatres"] == 12);
  CHECK(r.body["derived"]["totalSessions"] == 120);
  r = store.patch(id, {{"bedDeltas", {{"Ward 2", -4}}}});
  CHECK(r.body["overlay"]["bedDeltas"].empty());
  r = store.reset(id);
  CHECK(r.body["overlay"]["theatreDelta"] == 0);
  CHECK(r.body["bundle"]["config"]["theatres"] == 10);
}

TEST_CASE("rejected edits apply nothing") {
  SessionStore store;
  const auto id = open(store);
  const auto bad = store.patch(id, {{"theatreDelta", 1}, {"bedDeltas", {{"Ward 1", -5}}}});
  CHECK(bad.status == 422);
  CHECK(bad.body["field"] == "bedDeltas[Ward 1]");
  CHECK(store.patch(id, {{"colour", 1}}).status == 422);
  CHECK(store.patch(id, {{"bedDeltas", {{"Ward 9", 1}}}}).status == 422);
  CHECK(store.get(id).body["overlay"]["theatreDelta"] == 0);
}

TEST_CASE("restoring a loaded component drops it from the overlay") {
  SessionStore store;
  const auto id = open(store);
  auto r = store.patch(id, {{"caseMix", {10, 40, 18, 9, 23}}});
  CHECK_FALSE(r.body["overlay"]["mix"].is_null());
  r = store.patch(id, {{"caseMix", {5, 43, 18, 9, 25}}});
  CHECK(r.body["overlay"]["mix"].is_null());
}

TEST_CASE("unbalanced mixes are kept but block tasks") {
  SessionStore store;
  const auto id = open(store);
  auto r = store.patch(id, {{"subMix", {{{"g", 3}, {"values", {25, 40, 30}}}}}});
  REQUIRE(r.status == 200);
  CHECK(r.body["derived"]["mixErrors"]["subMix"][2] == Approx(5.0));
  const auto task = store.runTask(id, {{"kind", "advanced"}});
  CHECK(task.status == 422);
  CHECK(task.body["field"] == "subMix[3]");
  r = store.fixMix(id, {{"level", "sub"}, {"g", 3}});
  REQUIRE(r.status == 200);
  CHECK(r.body["derived"]["mixErrors"]["subMix"][2] == Approx(0.0).margin(1e-9));
  CHECK(store.runTask(id, {{"kind", "advanced"}}).status == 200);
}

TEST_CASE("mix helpers") {
  SessionStore store;
  const auto id = open(store);
  auto r = store.evenMix(id, {{"level", "case"}});
  for (const auto& x : r.body["bundle"]["mix"]["caseMix"]) CHECK(x.get<double>() == Approx(20.0));
  r = store.soloMix(id, {{"g", 2}});
  CHECK(r.body["bundle"]["mix"]["caseMix"] == Json({0.0, 100.0, 0.0, 0.0, 0.0}));
  CHECK(store.soloMix(id, {{"g", 9}}).status == 422);
  CHECK(store.evenMix(id, {{"level", "other"}}).status == 422);
}

TEST_CASE("even sessions spread the template") {
  SessionStore store;
  const auto id = open(store);
  store.patch(id, {{"mss", {{"sessionsPerDay", 1}, {"daysPerWeek", 3}}}, {"theatreDelta", -9}});
  const auto r = store.evenSessions(id);
  REQUIRE(r.status == 200);
  CHECK(r.body["bundle"]["sessions"]["sessions"] == Json({1.0, 1.0, 1.0, 0.0, 0.0}));
  CHECK(r.body["derived"]["unassignedSessions"] == 0.0);
}

TEST_CASE("tasks run against the effective state") {
  SessionStore store;
  const auto id = open(store);
  auto r = store.runTask(id, {{"kind", "advanced"}});
  REQUIRE(r.status == 200);
  CHECK(r.body["result"]["total"].get<double>() == Approx(113.5277).margin(1e-3));
  store.patch(id, {{"mss", {{"weeks", 2}}}});
  r = store.runTask(id, {{"kind", "advanced"}, {"params", {{"viewpoint", "partition"}}}});
  CHECK(r.body["result"]["total"].get<double>() == Approx(2 * 134.8919).margin(2e-3));
  CHECK(r.body["parameters"]["mss"]["weeks"] == 2);
  CHECK(store.get(id).body["lastResults"].contains("advanced"));
  r = store.runTask(id, {{"kind", "evaluateAllocation"}});
  CHECK(r.status == 200);
  CHECK(store.runTask(id, {{"kind", "nonsense"}}).status == 422);
  CHECK(store.runTask("s999", {{"kind", "advanced"}}).status == 404);
}

TEST_CASE("infeasible feasibility checks are results, not errors") {
  SessionStore store;
  const auto id = open(store);
  const auto r = store.runTask(id, {{"kind", "feasibility"}, {"params", {{"useTargets", false}}}});
  REQUIRE(r.status == 200);
  CHECK(r.body["infeasible"] == true);
  CHECK(r.body["result"]["violations"].size() == 2);
}

TEST_CASE("HTTP routes over a real socket") {
  SessionStore store;
  httplib::Server server;
  mountRoutes(server, store);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/sessions", Json({{"path", projectPath()}}).dump(), "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const auto id = Json::parse(created->body)["sessionId"].get<std::string>();

  auto patched = client.Patch("/sessions/" + id + "/overlay", R"({"icuDelta": 1})", "application/json");
  REQUIRE(patched);
  CHECK(patched->status == 200);
  CHECK(Json::parse(patched->body)["bundle"]["config"]["icuBeds"] == 6);

  auto task = client.Post("/sessions/" + id + "/tasks", R"({"kind": "advanced"})", "application/json");
  REQUIRE(task);
  CHECK(task->status == 200);
  REQUIRE(task->has_header("X-Elapsed-Ms"));
  CHECK(std::stod(task->get_header_value("X-Elapsed-Ms")) >= 0.0);
  CHECK(Json::parse(task->body)["result"]["total"].get<double>() == Approx(113.5277).margin(1e-3));

  auto malformed = client.Post("/sessions/" + id + "/tasks", "{nope", "application/json");
  REQUIRE(malformed);
  CHECK(malformed->status == 400);
  auto missing = client.Get("/sessions/nope");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  auto deleted = client.Delete("/sessions/" + id);
  REQUIRE(deleted);
  CHECK(deleted->status == 200);

  server.stop();
  worker.join();
}
