// Command-line entry point: scoring, optimization, convergence comparison,
// the HTTP service, engagement metrics and level file upkeep.

#include <CLI11.hpp>

#include "qmoves/service/http_api.hpp"

#include <json.hpp>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <pthread.h>
#include <sstream>
#include <thread>

#include "qmoves/errors.hpp"
#include "qmoves/optim/convergence.hpp"
#include "qmoves/optim/optimizer.hpp"
#include "qmoves/service/json_io.hpp"
#include "qmoves/service/metrics.hpp"

using namespace qmoves;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path);
  out << text;
}

/// A play file is either an encoded record or a `t,x0,A` CSV.
ControlPath load_path(const std::string& file) {
  if (std::filesystem::path(file).extension() == ".csv") return parse_path_csv(read_text(file));
  return load_play_file(file).path;
}

struct SimFlags {
  int grid_points = SimConfig{}.grid_points;
  double dt = SimConfig{}.dt;

  void add(CLI::App* cmd) {
    cmd->add_option("--grid-points", grid_points, "Simulation grid size (power of two)");
    cmd->add_option("--dt", dt, "Time step");
  }
  SimConfig config() const {
    SimConfig c;
    c.grid_points = grid_points;
    c.dt = dt;
    c.validate();
    return c;
  }
};

int cmd_score(const std::string& level_file, const std::string& play_file, const SimFlags& sim,
              const std::string& density_trace) {
  const ScoringContext ctx(load_level_file(level_file), sim.config());
  const ControlPath path = load_path(play_file);
  ScoreReport report;
  if (density_trace.empty()) {
    report = ctx.score(path);
  } else {
    std::ofstream out(density_trace);
    if (!out) throw ArgumentError("cannot write " + density_trace);
    const auto x = grid_positions(ctx.config());
    out << "t,x,density\n";
    out.precision(17);
    report = ctx.simulate(path, [&](double t, const WaveFunction& psi) {
      const auto d = psi.density();
      for (Eigen::Index i = 0; i < d.size(); ++i) out << t << ',' << x[i] << ',' << d[i] << '\n';
    });
  }
  std::cout << to_json(report).dump(2) << '\n';
  return kExitOk;
}

struct OptimizeFlags {
  std::string level_file;
  std::string family = "local";
  long budget = 1000;
  std::vector<std::string> seed_plays;
  std::uint64_t rng = 1;
  int knots = OptimizerConfig{}.knots;
  std::string trace_out = "trace.csv";
  std::string play_out = "best.qmplay";
  SimFlags sim;
};

int cmd_optimize(const OptimizeFlags& f) {
  OptimizerConfig config;
  config.family = optimizer_family_from_string(f.family);
  config.evaluation_budget = f.budget;
  config.rng_seed = f.rng;
  config.knots = f.knots;
  config.validate();

  const ScoringContext ctx(load_level_file(f.level_file), f.sim.config());
  std::vector<ControlPath> seeds;
  for (const auto& file : f.seed_plays) seeds.push_back(load_path(file));

  OptimizationRun run;
  switch (config.family) {
    case OptimizerFamily::local:
      run = local_optimize(ctx, seeds.empty() ? straight_path(ctx.level(), 0.5 * ctx.level().duration_max)
                                              : seeds.front(),
                           config);
      break;
    case OptimizerFamily::stochastic:
      run = stochastic_optimize(ctx, config);
      break;
    case OptimizerFamily::hybrid:
      if (seeds.empty()) throw ArgumentError("--family hybrid needs at least one --seed-play");
      run = hybrid_optimize(ctx, seeds, config);
      break;
  }

  write_text(f.trace_out, format_trace_csv(run.trace));
  PlayRecord best;
  best.level_id = ctx.level().id;
  best.user_id = "optimizer";
  best.client_version = "qmoves-" + f.family;
  best.path = run.best_path;
  best.score = run.best_report;
  write_file_bytes(f.play_out, encode_play(best));

  json summary = {{"level_id", run.level_id},
                  {"family", f.family},
                  {"evaluations", run.evaluations_used},
                  {"best", to_json(run.best_report)},
                  {"trace", f.trace_out},
                  {"play", f.play_out}};
  if (run.seed_index) summary["seed_index"] = *run.seed_index;
  std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

int cmd_compare(const std::vector<std::string>& run_files, const std::vector<std::string>& player_files,
                const std::string& level, const std::string& csv_out) {
  std::vector<RunSeries> runs;
  for (const auto& file : run_files)
    runs.push_back({std::filesystem::path(file).stem().string(), level, parse_trace_csv(read_text(file))});
  std::vector<PlayerHistory> players;
  for (const auto& file : player_files)
    for (auto& p : parse_player_csv(read_text(file), level)) players.push_back(std::move(p));
  const ConvergenceReport report = convergence_report(runs, players);

  auto opt = [](const std::optional<long>& v) { return v ? json(*v) : json(nullptr); };
  json out = {{"level_id", report.level_id}, {"players", report.player_labels}};
  json run_rows = json::array();
  for (std::size_t i = 0; i < report.run_labels.size(); ++i)
    run_rows.push_back({{"label", report.run_labels[i]}, {"crossover", opt(report.crossover[i])}});
  out["runs"] = run_rows;
  json rows = json::array();
  for (const auto& r : report.rows) {
    json best = json::array();
    for (const auto& v : r.run_best) best.push_back(opt(v));
    rows.push_back({{"n", r.n}, {"run_best", best}, {"player_high", opt(r.player_high)}});
  }
  out["rows"] = rows;
  if (!csv_out.empty()) write_text(csv_out, report.format_csv());
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int cmd_serve(const std::string& addr, const std::string& data_dir, const SimFlags& sim) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw ArgumentError("--addr must be host:port");
  const std::string host = addr.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(addr.substr(colon + 1));
  } catch (const std::exception&) {
    throw ArgumentError("--addr must be host:port");
  }

  // Block the stop signals before any thread starts so only the waiter sees them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGTERM);
  sigaddset(&stop_signals, SIGINT);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  ServiceOptions options;
  options.data_dir = data_dir;
  options.sim = sim.config();
  GameService service(Catalog::builtin(), options);
  httplib::Server server;
  mount_api(server, service);
  if (!server.bind_to_port(host, port)) throw ArgumentError("cannot listen on " + addr);

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&stop_signals, &sig);
    server.stop();
  });
  std::cerr << "serving on " << addr << " with data in " << data_dir << '\n';
  server.listen_after_bind();
  // listen returns early only if stop() was called, which the waiter does.
  waiter.join();
  service.flush();
  std::cerr << "stopped\n";
  return kExitOk;
}

int cmd_metrics(const std::string& data_dir) {
  if (!std::filesystem::is_directory(data_dir)) throw ArgumentError("no data directory " + data_dir);
  ServiceOptions options;
  options.data_dir = data_dir;
  options.read_only = true;
  GameService service(Catalog::builtin(), options);
  std::cout << to_json(engagement_metrics(service.users(), service.plays(), service.catalog())).dump(2) << '\n';
  return kExitOk;
}

int cmd_level_check(const std::string& file) {
  const Level level = load_level_file(file);
  ScoringContext ctx(level);
  json out = {{"id", level.id}, {"ok", true}, {"canonical", serialize_level(level) == read_text(file)}};
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int cmd_level_fmt(const std::string& file, bool in_place) {
  const std::string text = serialize_level(load_level_file(file));
  if (in_place)
    write_text(file, text);
  else
    std::cout << text;
  return kExitOk;
}

std::string default_data_dir() {
  const char* env = std::getenv("QM_DATA_DIR");
  return env ? env : "qmoves-data";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum moves: score, optimize and serve atom-transport levels"};
  app.require_subcommand(1);

  std::string level_file, play_file, density_trace;
  SimFlags score_sim;
  auto* score = app.add_subcommand("score", "Score a play on a level; prints the report as JSON");
  score->add_option("level-file", level_file, "Level file (.qmlevel)")->required();
  score->add_option("play-file", play_file, "Play file (.qmplay or t,x0,A .csv)")->required();
  score->add_option("--density-trace", density_trace, "Write t,x,density samples to this CSV");
  score_sim.add(score);

  OptimizeFlags opt;
  auto* optimize = app.add_subcommand("optimize", "Run an optimizer on a level");
  optimize->add_option("level-file", opt.level_file, "Level file (.qmlevel)")->required();
  optimize->add_option("--family", opt.family, "local, stochastic or hybrid")
      ->check(CLI::IsMember({"local", "stochastic", "hybrid"}));
  optimize->add_option("--budget", opt.budget, "Score evaluations")->check(CLI::PositiveNumber);
  optimize->add_option("--seed-play", opt.seed_plays, "Seed play files")->expected(1, -1);
  optimize->add_option("--rng", opt.rng, "Random seed");
  optimize->add_option("--knots", opt.knots, "Free control knots")->check(CLI::PositiveNumber);
  optimize->add_option("--trace-out", opt.trace_out, "Trace CSV path");
  optimize->add_option("--play-out", opt.play_out, "Best play path");
  opt.sim.add(optimize);

  std::vector<std::string> run_files, player_files;
  std::string compare_level, compare_csv;
  auto* compare = app.add_subcommand("compare", "Crossover of optimizer runs against player high scores");
  compare->add_option("--runs", run_files, "Optimizer trace CSVs")->required()->expected(1, -1);
  compare->add_option("--players", player_files, "Player CSVs (user_id,score)")->expected(1, -1);
  compare->add_option("--level", compare_level, "Level id to label the report with");
  compare->add_option("--csv", compare_csv, "Also write the aligned table as CSV");

  std::string addr = "127.0.0.1:8080";
  std::string serve_dir = default_data_dir();
  SimFlags serve_sim;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--addr", addr, "host:port");
  serve->add_option("--data-dir", serve_dir, "Data directory (default $QM_DATA_DIR)");
  serve_sim.add(serve);

  std::string metrics_dir = default_data_dir();
  auto* metrics = app.add_subcommand("metrics", "Engagement metrics of a data directory as JSON");
  metrics->add_option("--data-dir", metrics_dir, "Data directory (default $QM_DATA_DIR)");

  std::string level_arg;
  bool in_place = false;
  auto* level = app.add_subcommand("level", "Level file tools");
  level->require_subcommand(1);
  auto* check = level->add_subcommand("check", "Validate a level file");
  check->add_option("file", level_arg)->required();
  auto* fmt = level->add_subcommand("fmt", "Print a level file in canonical form");
  fmt->add_option("file", level_arg)->required();
  fmt->add_flag("-i,--in-place", in_place, "Rewrite the file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*score) return cmd_score(level_file, play_file, score_sim, density_trace);
    if (*optimize) return cmd_optimize(opt);
    if (*compare) return cmd_compare(run_files, player_files, compare_level, compare_csv);
    if (*serve) return cmd_serve(addr, serve_dir, serve_sim);
    if (*metrics) return cmd_metrics(metrics_dir);
    if (*check) return cmd_level_check(level_arg);
    if (*fmt) return cmd_level_fmt(level_arg, in_place);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const UnsupportedVersionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NotFoundError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
