#include "fuzzynet/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "fuzzynet/kb_store.hpp"
#include "fuzzynet/partition.hpp"
#include "fuzzynet/query.hpp"
#include "fuzzynet/service.hpp"
#include "fuzzynet/similarity.hpp"

namespace fuzzynet {

namespace {

using nlohmann::json;

const std::map<std::string, EntityKind> kKinds = {{"objects", EntityKind::kObjects},
                                                  {"goals", EntityKind::kGoals},
                                                  {"instances", EntityKind::kInstances}};
const std::map<std::string, UnmatchedPolicy> kPolicies = {{"ignore", UnmatchedPolicy::kIgnore},
                                                          {"zero", UnmatchedPolicy::kZero}};
const std::map<std::string, SessionMode> kModes = {{"routed", SessionMode::kRouted},
                                                   {"exhaustive", SessionMode::kExhaustive}};

EntityRef lookup(const KnowledgeBase& kb, EntityKind kind, const std::string& name) {
  const auto e = kb.find(kind, normalize_label(name));
  if (!e) {
    throw Error(ErrorCode::kUnknownEntity,
                "no " + std::string(to_string(kind)) + " named '" + name + "'");
  }
  return *e;
}

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

std::string matrix_csv(const SimilarityMatrix& m) {
  std::ostringstream csv;
  for (const auto& name : m.names) csv << ',' << name.text();
  csv << '\n';
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    csv << m.names[i].text();
    for (const auto& cell : m.cells[i]) csv << ',' << format_decimal(cell.score);
    csv << '\n';
  }
  return csv.str();
}

void print_candidate(std::ostream& out, const Candidate& c, long evaluations) {
  out << "candidate " << c.name.text() << " score " << format_decimal(c.score) << " level "
      << c.level << " evaluations " << evaluations << '\n';
}

struct Options {
  std::string kb_path;
  std::string kind = "objects";
  std::string policy = "zero";
  std::string left, right, out_path, pivot, query_path, mode = "routed", log_path;
  std::vector<std::string> partition_paths;
  std::optional<double> auto_accept;
  bool interactive = false;
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string cors_origin;
  double idle_minutes = 30;
};

int run_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const json doc = [&] {
    try {
      return json::parse(read_file(o.kb_path));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kParseError, e.what());
    }
  }();
  const ValidationReport report = validate_kb(doc);
  for (const auto& e : report.errors) {
    out << "error " << e.code << ' ' << (e.path.empty() ? "/" : e.path) << ": " << e.message << '\n';
  }
  for (const auto& w : report.warnings) {
    out << "warning " << w.code << ' ' << (w.path.empty() ? "/" : w.path) << ": " << w.message
        << '\n';
  }
  out << report.errors.size() << " errors, " << report.warnings.size() << " warnings\n";
  if (!report.ok()) throw ValidationError(report);
  (void)err;
  return 0;
}

int run_sim(const Options& o, std::ostream& out, std::ostream& err) {
  const KnowledgeBase kb = load_kb_file(o.kb_path);
  const EntityKind kind = kKinds.at(o.kind);
  const SimilarityScore s = sim_entities(lookup(kb, kind, o.left), lookup(kb, kind, o.right),
                                         kPolicies.at(o.policy));
  if (s.mixed_necessity) err << "warning: mixed-necessity\n";
  out << format_decimal(s.value) << '\n';
  return 0;
}

int run_matrix(const Options& o, std::ostream& out, std::ostream& err) {
  const KnowledgeBase kb = load_kb_file(o.kb_path);
  const SimilarityMatrix m = similarity_matrix(kb, kKinds.at(o.kind), kPolicies.at(o.policy));
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    for (std::size_t j = i + 1; j < m.names.size(); ++j) {
      const MatrixCell& c = m.cells[i][j];
      if (!c.warning) continue;
      err << "warning: " << m.names[i].text() << " x " << m.names[j].text() << ": "
          << (c.error ? to_string(*c.error) : std::string_view("mixed-necessity")) << '\n';
    }
  }
  emit(out, o.out_path, matrix_csv(m));
  return 0;
}

int run_partition(const Options& o, std::ostream& out, std::ostream&) {
  const KnowledgeBase kb = load_kb_file(o.kb_path);
  const EntityKind kind = kKinds.at(o.kind);
  const UnmatchedPolicy policy = kPolicies.at(o.policy);
  const Partition p = o.pivot.empty()
                          ? partition_kb(kb, kind, policy)
                          : partition_by_pivot(kb, kind, normalize_label(o.pivot), standard_bands(), policy);
  emit(out, o.out_path, save_partition(p));
  if (!o.out_path.empty()) {
    for (const auto& c : p.classes) {
      out << "level " << c.level << ": " << c.members.size() << " members\n";
    }
  }
  return 0;
}

int run_query(const Options& o, std::istream& in, std::ostream& out, std::ostream&) {
  auto kb = std::make_shared<const KnowledgeBase>(load_kb_file(o.kb_path));
  auto partition = std::make_shared<const Partition>(load_partition_file(o.partition_paths.at(0)));
  const Query query = load_query_file(o.query_path);

  std::ofstream log;
  SessionObserver observer;
  if (!o.log_path.empty()) {
    log.open(o.log_path, std::ios::app);
    if (!log) throw Error(ErrorCode::kIoError, "cannot open log '" + o.log_path + "'");
    observer = SessionLogWriter{log};
  }

  Session session = Session::start(kb, partition, query, kModes.at(o.mode), observer);
  std::optional<Candidate> current = session.current();
  while (current) {
    print_candidate(out, *current, session.evaluations());
    bool accept = false;
    if (o.auto_accept) {
      accept = current->score >= *o.auto_accept - kDegreeTolerance;
    } else if (o.interactive) {
      std::string line;
      for (;;) {
        out << "accept or reject? " << std::flush;
        if (!std::getline(in, line)) {
          out << "\nstopped with session active\n";
          return 0;
        }
        line = normalize_label_text(line.empty() ? std::string("?") : line);
        if (line == "accept" || line == "a" || line == "y" || line == "yes") {
          accept = true;
          break;
        }
        if (line == "reject" || line == "r" || line == "n" || line == "no") break;
      }
    } else {
      return 0;  // show the first candidate only
    }
    if (accept) {
      const ResolutionRecord r = session.accept();
      out << "accepted " << r.entity.text() << " score " << format_decimal(r.score) << " level "
          << r.level << " rejections " << r.rejections << " evaluations " << r.evaluations << '\n';
      return 0;
    }
    current = session.reject();
  }
  out << "exhausted rejections " << session.rejections() << " evaluations "
      << session.evaluations() << '\n';
  return 0;
}

int run_serve(const Options& o, std::ostream& out, std::ostream&) {
  auto kb = std::make_shared<const KnowledgeBase>(load_kb_file(o.kb_path));
  std::vector<std::shared_ptr<const Partition>> partitions;
  for (const auto& path : o.partition_paths) {
    auto p = std::make_shared<const Partition>(load_partition_file(path));
    if (p->kb_fingerprint != kb->fingerprint) {
      throw Error(ErrorCode::kFingerprintMismatch,
                  "partition '" + path + "' was built for a different knowledge base");
    }
    partitions.push_back(std::move(p));
  }
  ServerOptions options;
  options.cors_origin = o.cors_origin;
  options.log_path = o.log_path;
  options.idle_timeout =
      std::chrono::milliseconds(static_cast<long long>(o.idle_minutes * 60'000.0));
  Server server(kb, partitions, options);
  const int port = server.bind(o.host, o.port);
  out << "listening on " << o.host << ':' << port << std::endl;
  server.run();
  return 0;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
                 std::ostream& err) {
  Options o;
  if (const char* env = std::getenv("FNET_PORT")) o.port = std::atoi(env);

  CLI::App app{"Fuzzy semantic network similarity engine", "fnet"};
  app.require_subcommand(1);
  auto kind_check = CLI::IsMember({"objects", "goals", "instances"});
  auto policy_check = CLI::IsMember({"ignore", "zero"});

  auto* validate = app.add_subcommand("validate", "Validate a knowledge base file");
  validate->add_option("kb", o.kb_path, "Knowledge base JSON")->required();

  auto* sim = app.add_subcommand("sim", "Similarity between two entities");
  sim->add_option("--kb", o.kb_path)->required();
  sim->add_option("--kind", o.kind)->check(kind_check);
  sim->add_option("--left", o.left)->required();
  sim->add_option("--right", o.right)->required();
  sim->add_option("--policy", o.policy)->check(policy_check);

  auto* matrix = app.add_subcommand("matrix", "Pairwise similarity matrix as CSV");
  matrix->add_option("--kb", o.kb_path)->required();
  matrix->add_option("--kind", o.kind)->check(kind_check);
  matrix->add_option("--policy", o.policy)->check(policy_check);
  matrix->add_option("--out", o.out_path, "CSV output (default stdout)");

  auto* partition = app.add_subcommand("partition", "Build the four similarity classes");
  partition->add_option("--kb", o.kb_path)->required();
  partition->add_option("--kind", o.kind)->check(kind_check);
  partition->add_option("--policy", o.policy)->check(policy_check);
  partition->add_option("--pivot", o.pivot, "Bin by similarity to this entity");
  partition->add_option("--out", o.out_path, "Partition output (default stdout)");

  auto* query = app.add_subcommand("query", "Run an identification session");
  query->add_option("--kb", o.kb_path)->required();
  query->add_option("--partition", o.partition_paths)->required()->expected(1);
  query->add_option("--query", o.query_path)->required();
  query->add_option("--mode", o.mode)->check(CLI::IsMember({"routed", "exhaustive"}));
  auto* auto_accept = query->add_option("--auto-accept-at", o.auto_accept,
                                        "Accept the first candidate scoring at least this")
                          ->check(CLI::Range(0.0, 1.0));
  query->add_flag("--interactive", o.interactive, "Read accept/reject lines from stdin")
      ->excludes(auto_accept);
  query->add_option("--log", o.log_path, "Append session events as JSON lines");

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("--kb", o.kb_path)->required();
  serve->add_option("--partition", o.partition_paths, "Partition file (one per kind)");
  serve->add_option("--port", o.port, "Port (default $FNET_PORT or 8080)");
  serve->add_option("--host", o.host);
  serve->add_option("--cors-origin", o.cors_origin);
  serve->add_option("--idle-minutes", o.idle_minutes, "Session idle eviction");
  serve->add_option("--log", o.log_path, "Append session events as JSON lines");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) return run_validate(o, out, err);
    if (sim->parsed()) return run_sim(o, out, err);
    if (matrix->parsed()) return run_matrix(o, out, err);
    if (partition->parsed()) return run_partition(o, out, err);
    if (query->parsed()) return run_query(o, in, out, err);
    if (serve->parsed()) return run_serve(o, out, err);
  } catch (const ValidationError& e) {
    json detail = json::array();
    for (const auto& i : e.report().errors) {
      detail.push_back({{"path", i.path}, {"code", i.code}, {"message", i.message}});
    }
    err << json{{"code", std::string(to_string(e.code()))},
                {"message", e.what()},
                {"detail", {{"errors", detail}}}}
               .dump()
        << '\n';
    return 1;
  } catch (const Error& e) {
    err << json{{"code", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace fuzzynet
