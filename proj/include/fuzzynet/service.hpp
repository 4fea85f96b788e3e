#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fuzzynet/kb_store.hpp"
#include "fuzzynet/query.hpp"

namespace fuzzynet {

/// In-memory session store with idle eviction. Each session has its own
/// mutex; a mutation that finds the session busy fails with kSessionBusy
/// instead of queueing, so concurrent mutations never interleave.
class SessionRegistry {
 public:
  using Clock = std::chrono::steady_clock;

  explicit SessionRegistry(std::chrono::milliseconds idle_timeout,
                           std::function<Clock::time_point()> now = Clock::now);

  void add(Session session);
  /// Runs `fn` under the session's lock. Throws kUnknownSession for ids never
  /// issued, kSessionGone for evicted or deleted ones, kSessionBusy when
  /// another caller holds the session.
  void with_session(const std::string& id, const std::function<void(Session&)>& fn);
  void remove(const std::string& id);
  /// Drops sessions idle for longer than the timeout; returns how many.
  std::size_t evict_idle();
  std::size_t size() const;

 private:
  struct Entry {
    std::mutex lock;
    Session session;
    Clock::time_point last_activity;
  };

  std::chrono::milliseconds idle_timeout_;
  std::function<Clock::time_point()> now_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<Entry>> sessions_;
  std::unordered_set<std::string> gone_;
};

struct ServerOptions {
  std::chrono::milliseconds idle_timeout = std::chrono::minutes(30);
  std::string cors_origin;  // empty: no CORS headers
  std::string log_path;     // empty: no session log
};

/// HTTP/JSON front end over one read-only KB and its partitions (at most
/// one per kind).
class Server {
 public:
  Server(std::shared_ptr<const KnowledgeBase> kb,
         std::vector<std::shared_ptr<const Partition>> partitions, ServerOptions options = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds to host:port (0 picks a free port) and returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fuzzynet
