#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fuzzynet/cli.hpp"
#include "fuzzynet/kb_store.hpp"
#include "fuzzynet/service.hpp"
#include "support/live_server.hpp"
#include "support/paths.hpp"

using namespace fuzzynet;
using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli_dispatch(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("fnet-test-" + name)).string();
}

const std::string kKb = testpaths::data("sample_kb.json");
const std::string kQuery = testpaths::data("sample_query.json");

std::shared_ptr<const KnowledgeBase> sample_kb() {
  return std::make_shared<const KnowledgeBase>(load_kb_file(kKb));
}

std::vector<std::shared_ptr<const Partition>> sample_partitions(const KnowledgeBase& kb) {
  return {std::make_shared<const Partition>(partition_kb(kb, EntityKind::kObjects, UnmatchedPolicy::kZero)),
          std::make_shared<const Partition>(partition_kb(kb, EntityKind::kGoals, UnmatchedPolicy::kZero))};
}

json body_of(const httplib::Result& r) {
  REQUIRE(r);
  return json::parse(r->body);
}

}  // namespace

TEST_CASE("cli: validate") {
  const auto r = run({"validate", kKb});
  CHECK(r.code == 0);
  CHECK(r.out.find("near-duplicate-labels") != std::string::npos);

  const std::string bad = temp_path("bad.json");
  json doc = json::parse(read_file(kKb));
  doc["objects"][0]["attributes"][0]["possible"]["word"] = 1.3;
  write_file(bad, doc.dump());
  const auto b = run({"validate", bad});
  CHECK(b.code == 1);
  CHECK((b.out + b.err).find("degree-out-of-range") != std::string::npos);
  std::filesystem::remove(bad);
}

TEST_CASE("cli: sim") {
  auto r = run({"sim", "--kb", kKb, "--kind", "objects", "--left", "the-substantive", "--right", "the-signs"});
  CHECK(r.code == 0);
  CHECK(r.out == "0.7\n");
  r = run({"sim", "--kb", kKb, "--kind", "goals", "--left", "erase/the-lettres", "--right", "erase/the-substantif"});
  CHECK(r.out == "0.7\n");
  r = run({"sim", "--kb", kKb, "--left", "The-Signs", "--right", "the-signs"});
  CHECK(r.out == "1\n");

  r = run({"sim", "--kb", kKb, "--left", "nobody", "--right", "the-signs"});
  CHECK(r.code == 1);
  CHECK(json::parse(r.err)["code"] == "unknown-entity");

  CHECK(run({"sim", "--kb", kKb, "--left", "the-signs"}).code == 2);
  CHECK(run({"sim", "--kb", kKb, "--left", "a", "--right", "b", "--policy", "sometimes"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cli: matrix") {
  const auto r = run({"matrix", "--kb", kKb, "--kind", "objects"});
  CHECK(r.code == 0);
  CHECK(r.out == ",the-substantive,the-signs\nthe-substantive,1,0.7\nthe-signs,0.7,1\n");
  const auto g = run({"matrix", "--kb", kKb, "--kind", "goals"});
  CHECK(g.code == 0);
  CHECK(g.err.find("no-paired-facets") != std::string::npos);
}

TEST_CASE("cli: partition then query") {
  const std::string part = temp_path("objects.partition.json");
  auto p = run({"partition", "--kb", kKb, "--kind", "objects", "--out", part});
  CHECK(p.code == 0);
  CHECK(p.out.find("level 4: 2 members") != std::string::npos);
  CHECK(load_partition_file(part).kb_fingerprint == load_kb_file(kKb).fingerprint);

  auto q = run({"query", "--kb", kKb, "--partition", part, "--query", kQuery, "--auto-accept-at", "0.85"});
  CHECK(q.code == 0);
  CHECK(q.out.find("candidate the-signs score 0.9 level 4") != std::string::npos);
  CHECK(q.out.find("accepted the-signs score 0.9 level 4 rejections 0 evaluations 6") != std::string::npos);

  q = run({"query", "--kb", kKb, "--partition", part, "--query", kQuery, "--interactive"}, "reject\nmaybe\naccept\n");
  CHECK(q.code == 0);
  CHECK(q.out.find("accepted the-substantive score 0.7 level 4 rejections 1") != std::string::npos);

  const std::string log = temp_path("session.log");
  std::filesystem::remove(log);
  q = run({"query", "--kb", kKb, "--partition", part, "--query", kQuery, "--interactive", "--log", log}, "r\nr\n");
  CHECK(q.out.find("exhausted rejections 2 evaluations 6") != std::string::npos);
  std::ifstream lines(log);
  std::string line;
  std::vector<std::string> events;
  while (std::getline(lines, line)) events.push_back(json::parse(line)["event"]);
  CHECK(events == std::vector<std::string>{"started", "presented", "rejected", "presented", "rejected", "exhausted"});

  auto pivot = run({"partition", "--kb", kKb, "--pivot", "The-Signs"});
  CHECK(pivot.code == 0);
  CHECK(load_partition(pivot.out).assignment.at(Label("the-substantive")) == 3);

  std::filesystem::remove(part);
  std::filesystem::remove(log);
}

TEST_CASE("registry: idle eviction and busy sessions") {
  auto kb = sample_kb();
  auto partition = sample_partitions(*kb)[0];
  const Query q = load_query_file(kQuery);
  SessionRegistry::Clock::time_point now{};
  SessionRegistry registry(std::chrono::minutes(30), [&] { return now; });

  Session a = Session::start(kb, partition, q, SessionMode::kRouted);
  Session b = Session::start(kb, partition, q, SessionMode::kRouted);
  const std::string ida = a.id(), idb = b.id();
  registry.add(std::move(a));
  now += std::chrono::minutes(20);
  registry.add(std::move(b));
  now += std::chrono::minutes(20);
  CHECK(registry.evict_idle() == 1);
  CHECK(registry.size() == 1);

  auto code_of = [&](const std::string& id) {
    try {
      registry.with_session(id, [](Session&) {});
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kParseError;
  };
  CHECK(code_of(ida) == ErrorCode::kSessionGone);
  CHECK(code_of("ffff") == ErrorCode::kUnknownSession);

  ErrorCode nested = ErrorCode::kParseError;
  registry.with_session(idb, [&](Session&) { nested = code_of(idb); });
  CHECK(nested == ErrorCode::kSessionBusy);

  registry.remove(idb);
  CHECK(code_of(idb) == ErrorCode::kSessionGone);
}

TEST_CASE("http: read-only endpoints") {
  auto kb = sample_kb();
  testserver::LiveServer server(kb, sample_partitions(*kb), ServerOptions{std::chrono::minutes(30), "*", ""});
  auto client = server.client();

  auto r = client.Get("/v1/kb");
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->get_header_value("X-KB-Fingerprint") == kb->fingerprint);
  CHECK(r->get_header_value("Access-Control-Allow-Origin") == "*");
  json info = json::parse(r->body);
  CHECK(info["counts"]["objects"] == 2);
  CHECK(info["counts"]["goals"] == 4);
  CHECK(info["partitions"] == json::array({"objects", "goals"}));

  json list = body_of(client.Get("/v1/kb/objects"));
  CHECK(list["objects"].size() == 2);
  CHECK(list["objects"][0]["display"] == "The substantive");

  r = client.Get("/v1/kb/objects/the-signs");
  CHECK(r->status == 200);
  CHECK(json::parse(r->body)["name"] == "the-signs");
  r = client.Get("/v1/kb/goals/erase%2Fthe-lettres");
  CHECK(r->status == 200);
  r = client.Get("/v1/kb/objects/nobody");
  CHECK(r->status == 404);
  CHECK(json::parse(r->body)["code"] == "unknown-entity");

  json sim = body_of(client.Get("/v1/similarity?kind=objects&left=the-substantive&right=the-signs"));
  CHECK(sim["score"] == 0.7);
  CHECK(sim["mixed_necessity"] == false);
  r = client.Get("/v1/similarity?kind=objects&left=the-signs");
  CHECK(r->status == 400);
  CHECK(json::parse(r->body)["code"] == "malformed-body");
  r = client.Get("/v1/similarity?kind=planets&left=a&right=b");
  CHECK(r->status == 400);

  json part = body_of(client.Get("/v1/partition?kind=objects"));
  CHECK(part["kb_fingerprint"] == kb->fingerprint);
  r = client.Get("/v1/partition?kind=instances");
  CHECK(r->status == 404);
  CHECK(json::parse(r->body)["code"] == "no-partition");

  r = client.Options("/v1/sessions");
  CHECK(r->status == 204);
}

TEST_CASE("http: session flow") {
  auto kb = sample_kb();
  testserver::LiveServer server(kb, sample_partitions(*kb));
  auto client = server.client();
  const std::string query = read_file(kQuery);

  auto r = client.Post("/v1/sessions", query, "application/json");
  REQUIRE(r);
  CHECK(r->status == 200);
  json started = json::parse(r->body);
  const std::string id = started["session_id"];
  CHECK(id.size() == 32);
  CHECK(started["candidate"]["name"] == "the-signs");
  CHECK(started["candidate"]["score"] == 0.9);
  CHECK(started["candidate"]["level"] == 4);
  CHECK(started["evaluations"] == 6);
  CHECK(started["route"][0] == 4);

  json next = body_of(client.Post("/v1/sessions/" + id + "/reject", "", "application/json"));
  CHECK(next["candidate"]["name"] == "the-substantive");
  CHECK(next["candidate"]["score"] == 0.7);
  json done = body_of(client.Post("/v1/sessions/" + id + "/reject", "", "application/json"));
  CHECK(done["exhausted"] == true);
  CHECK(done["rejections"] == 2);

  r = client.Post("/v1/sessions/" + id + "/accept", "", "application/json");
  CHECK(r->status == 409);
  CHECK(json::parse(r->body)["code"] == "session-not-active");

  json state = body_of(client.Get("/v1/sessions/" + id));
  CHECK(state["state"] == "exhausted");
  CHECK(state["presented"].size() == 2);

  r = client.Delete("/v1/sessions/" + id);
  CHECK(r->status == 200);
  r = client.Get("/v1/sessions/" + id);
  CHECK(r->status == 410);
  CHECK(json::parse(r->body)["code"] == "session-gone");
  r = client.Get("/v1/sessions/0123456789abcdef0123456789abcdef");
  CHECK(r->status == 404);

  // Accept on a fresh session.
  json second = body_of(client.Post("/v1/sessions", query, "application/json"));
  json record = body_of(client.Post("/v1/sessions/" + second["session_id"].get<std::string>() + "/accept", "",
                                    "application/json"));
  CHECK(record["entity"] == "the-signs");
  CHECK(record["rejections"] == 0);
  CHECK(record["query"] == "how to cut a noun");
  CHECK(record["skipped"].empty());

  json exhaustive = json::parse(query);
  exhaustive["mode"] = "exhaustive";
  json ex = body_of(client.Post("/v1/sessions", exhaustive.dump(), "application/json"));
  CHECK(ex["candidate"]["name"] == "the-signs");
  CHECK(ex["evaluations"] == 2);

  r = client.Post("/v1/sessions", "{nope", "application/json");
  CHECK(r->status == 400);
  CHECK(json::parse(r->body)["code"] == "malformed-body");
  json bad = json::parse(query);
  bad["description"]["attributes"][0]["necessary"] = {{"the-signs", 0.1}};
  r = client.Post("/v1/sessions", bad.dump(), "application/json");
  CHECK(r->status == 400);
  CHECK(json::parse(r->body)["code"] == "invalid-query");
}
