#include "fuzzynet/service.hpp"

#include <fstream>
#include <map>
#include <optional>

#include <httplib.h>

namespace fuzzynet {

using nlohmann::json;

SessionRegistry::SessionRegistry(std::chrono::milliseconds idle_timeout,
                                 std::function<Clock::time_point()> now)
    : idle_timeout_(idle_timeout), now_(std::move(now)) {}

void SessionRegistry::add(Session session) {
  std::lock_guard guard(mutex_);
  const std::string id = session.id();
  sessions_.emplace(id, std::shared_ptr<Entry>(new Entry{{}, std::move(session), now_()}));
}

void SessionRegistry::with_session(const std::string& id,
                                   const std::function<void(Session&)>& fn) {
  std::shared_ptr<Entry> entry;
  {
    std::lock_guard guard(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) {
      if (gone_.count(id) != 0) throw Error(ErrorCode::kSessionGone, "session " + id + " is gone");
      throw Error(ErrorCode::kUnknownSession, "no session " + id);
    }
    entry = it->second;
    entry->last_activity = now_();
  }
  std::unique_lock lock(entry->lock, std::try_to_lock);
  if (!lock.owns_lock()) {
    throw Error(ErrorCode::kSessionBusy, "session " + id + " is handling another request");
  }
  fn(entry->session);
}

void SessionRegistry::remove(const std::string& id) {
  std::lock_guard guard(mutex_);
  if (sessions_.erase(id) == 0) {
    if (gone_.count(id) != 0) throw Error(ErrorCode::kSessionGone, "session " + id + " is gone");
    throw Error(ErrorCode::kUnknownSession, "no session " + id);
  }
  gone_.insert(id);
}

std::size_t SessionRegistry::evict_idle() {
  std::lock_guard guard(mutex_);
  const auto now = now_();
  std::size_t evicted = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    if (now - it->second->last_activity > idle_timeout_) {
      gone_.insert(it->first);
      it = sessions_.erase(it);
      ++evicted;
    } else {
      ++it;
    }
  }
  return evicted;
}

std::size_t SessionRegistry::size() const {
  std::lock_guard guard(mutex_);
  return sessions_.size();
}

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownEntity:
    case ErrorCode::kUnknownSession:
    case ErrorCode::kUnknownPivot:
    case ErrorCode::kNoPartition:
      return 404;
    case ErrorCode::kSessionGone:
      return 410;
    case ErrorCode::kSessionNotActive:
    case ErrorCode::kNoCurrentCandidate:
    case ErrorCode::kSessionBusy:
      return 409;
    default:
      return 400;
  }
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, ErrorCode code, const std::string& message,
                const json& detail = nullptr) {
  json body = {{"code", std::string(to_string(code))}, {"message", message}};
  if (!detail.is_null()) body["detail"] = detail;
  send_json(res, body, http_status(code));
}

json issues_to_json(const std::vector<ValidationIssue>& issues) {
  json out = json::array();
  for (const auto& i : issues) {
    out.push_back({{"path", i.path}, {"code", i.code}, {"message", i.message}});
  }
  return out;
}

}  // namespace

struct Server::Impl {
  std::shared_ptr<const KnowledgeBase> kb;
  std::map<EntityKind, std::shared_ptr<const Partition>> partitions;
  ServerOptions options;
  SessionRegistry registry;
  httplib::Server http;
  std::mutex log_mutex;
  std::ofstream log;

  Impl(std::shared_ptr<const KnowledgeBase> kb_in,
       std::vector<std::shared_ptr<const Partition>> partitions_in, ServerOptions options_in)
      : kb(std::move(kb_in)), options(std::move(options_in)), registry(options.idle_timeout) {
    for (auto& p : partitions_in) partitions[p->kind] = std::move(p);
    if (!options.log_path.empty()) {
      log.open(options.log_path, std::ios::app);
      if (!log) throw Error(ErrorCode::kIoError, "cannot open log '" + options.log_path + "'");
    }
    routes();
  }

  SessionObserver observer() {
    if (!log.is_open()) return {};
    return [this](const SessionEvent& event) {
      std::lock_guard guard(log_mutex);
      SessionLogWriter{log}(event);
    };
  }

  EntityKind kind_param(const httplib::Request& req) const {
    const std::string raw = req.has_param("kind") ? req.get_param_value("kind") : "objects";
    const auto kind = parse_entity_kind(raw);
    if (!kind) throw Error(ErrorCode::kMalformedBody, "unknown kind '" + raw + "'");
    return *kind;
  }

  std::shared_ptr<const Partition> partition_for(EntityKind kind) const {
    auto it = partitions.find(kind);
    if (it == partitions.end()) {
      throw Error(ErrorCode::kNoPartition,
                  "server has no partition for " + std::string(to_string(kind)));
    }
    return it->second;
  }

  // Wraps a handler so domain errors become ApiError responses.
  template <class Fn>
  httplib::Server::Handler handle(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const ValidationError& e) {
        send_error(res, e.code(), e.what(), {{"errors", issues_to_json(e.report().errors)}});
      } catch (const Error& e) {
        send_error(res, e.code(), e.what());
      } catch (const json::exception& e) {
        send_error(res, ErrorCode::kMalformedBody, e.what());
      }
    };
  }

  void routes() {
    http.set_pre_routing_handler([this](const httplib::Request&, httplib::Response&) {
      registry.evict_idle();
      return httplib::Server::HandlerResponse::Unhandled;
    });
    http.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
      res.set_header("X-KB-Fingerprint", kb->fingerprint);
      if (!options.cors_origin.empty()) {
        res.set_header("Access-Control-Allow-Origin", options.cors_origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
      }
    });
    http.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });

    http.Get("/v1/kb", handle([this](const httplib::Request&, httplib::Response& res) {
      json kinds = json::array();
      for (const auto& [kind, p] : partitions) kinds.push_back(std::string(to_string(kind)));
      send_json(res, {{"name", kb->name},
                      {"version", kb->version},
                      {"fingerprint", kb->fingerprint},
                      {"counts",
                       {{"objects", kb->objects.size()},
                        {"goals", kb->goals.size()},
                        {"instances", kb->instances.size()}}},
                      {"partitions", std::move(kinds)}});
    }));

    http.Get(R"(/v1/kb/(objects|goals|instances))",
             handle([this](const httplib::Request& req, httplib::Response& res) {
               const auto kind = *parse_entity_kind(req.matches[1].str());
               json list = json::array();
               for (EntityRef e : kb->entities(kind)) {
                 json item = entity_to_json(e);
                 list.push_back({{"name", item["name"]},
                                 {"display", item.value("display", item["name"].get<std::string>())}});
               }
               send_json(res, {{std::string(to_string(kind)), std::move(list)}});
             }));

    http.Get(R"(/v1/kb/(objects|goals|instances)/(.+))",
             handle([this](const httplib::Request& req, httplib::Response& res) {
               const auto kind = *parse_entity_kind(req.matches[1].str());
               const auto entity = kb->find(kind, normalize_label(req.matches[2].str()));
               if (!entity) {
                 throw Error(ErrorCode::kUnknownEntity, "no " + std::string(to_string(kind)) +
                                                            " named '" + req.matches[2].str() + "'");
               }
               send_json(res, entity_to_json(*entity));
             }));

    http.Get("/v1/similarity", handle([this](const httplib::Request& req, httplib::Response& res) {
      const EntityKind kind = kind_param(req);
      if (!req.has_param("left") || !req.has_param("right")) {
        throw Error(ErrorCode::kMalformedBody, "left and right are required");
      }
      auto policy = UnmatchedPolicy::kZero;
      if (req.has_param("policy")) {
        const auto p = parse_policy(req.get_param_value("policy"));
        if (!p) throw Error(ErrorCode::kMalformedBody, "policy must be ignore or zero");
        policy = *p;
      }
      auto lookup = [&](const std::string& name) {
        const auto e = kb->find(kind, normalize_label(name));
        if (!e) {
          throw Error(ErrorCode::kUnknownEntity,
                      "no " + std::string(to_string(kind)) + " named '" + name + "'");
        }
        return *e;
      };
      const SimilarityScore s =
          sim_entities(lookup(req.get_param_value("left")), lookup(req.get_param_value("right")),
                       policy);
      send_json(res, {{"score", json_number(s.value)}, {"mixed_necessity", s.mixed_necessity}});
    }));

    http.Get("/v1/partition", handle([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, partition_to_json(*partition_for(kind_param(req))));
    }));

    http.Post("/v1/sessions", handle([this](const httplib::Request& req, httplib::Response& res) {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kMalformedBody, e.what());
      }
      if (!body.is_object()) throw Error(ErrorCode::kMalformedBody, "body must be an object");
      auto mode = SessionMode::kRouted;
      if (body.contains("mode")) {
        const auto m = parse_session_mode(body["mode"].get<std::string>());
        if (!m) throw Error(ErrorCode::kMalformedBody, "mode must be routed or exhaustive");
        mode = *m;
      }
      const Query query = query_from_json(body);
      Session session = Session::start(kb, partition_for(query.kind()), query, mode, observer());
      json reply = {{"session_id", session.id()},
                    {"route", session.route()},
                    {"evaluations", session.evaluations()}};
      if (session.current()) {
        reply["candidate"] = candidate_to_json(*session.current());
      } else {
        reply["exhausted"] = true;
      }
      registry.add(std::move(session));
      send_json(res, reply);
    }));

    http.Post(R"(/v1/sessions/([0-9a-f]+)/reject)",
              handle([this](const httplib::Request& req, httplib::Response& res) {
                json reply;
                registry.with_session(req.matches[1].str(), [&](Session& s) {
                  const auto next = s.reject();
                  reply = {{"evaluations", s.evaluations()}, {"rejections", s.rejections()}};
                  if (next) {
                    reply["candidate"] = candidate_to_json(*next);
                  } else {
                    reply["exhausted"] = true;
                  }
                });
                send_json(res, reply);
              }));

    http.Post(R"(/v1/sessions/([0-9a-f]+)/accept)",
              handle([this](const httplib::Request& req, httplib::Response& res) {
                json reply;
                registry.with_session(req.matches[1].str(), [&](Session& s) {
                  reply = record_to_json(s.accept());
                  reply["session_id"] = s.id();
                });
                send_json(res, reply);
              }));

    http.Get(R"(/v1/sessions/([0-9a-f]+))",
             handle([this](const httplib::Request& req, httplib::Response& res) {
               json reply;
               registry.with_session(req.matches[1].str(),
                                     [&](Session& s) { reply = session_to_json(s); });
               send_json(res, reply);
             }));

    http.Delete(R"(/v1/sessions/([0-9a-f]+))",
                handle([this](const httplib::Request& req, httplib::Response& res) {
                  registry.remove(req.matches[1].str());
                  send_json(res, {{"deleted", true}});
                }));
  }
};

Server::Server(std::shared_ptr<const KnowledgeBase> kb,
               std::vector<std::shared_ptr<const Partition>> partitions, ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(kb), std::move(partitions), std::move(options))) {}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->http.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorCode::kIoError, "cannot bind " + host);
    return bound;
  }
  if (!impl_->http.bind_to_port(host, port)) {
    throw Error(ErrorCode::kIoError, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void Server::run() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_) impl_->http.stop();
}

}  // namespace fuzzynet
