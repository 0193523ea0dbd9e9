#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

#include "qmoves/level/catalog.hpp"
#include "qmoves/optim/convergence.hpp"
#include "qmoves/optim/optimizer.hpp"
#include "qmoves/quantum.hpp"

using namespace qmoves;

namespace {

SimConfig toy_config() {
  SimConfig c;
  c.grid_points = 64;
  c.dt = 1e-3;
  return c;
}

const ScoringContext& toy() {
  static const ScoringContext ctx(
      load_level_file(std::string(QMOVES_FIXTURE_DIR) + "/deceptive_toy.qmlevel"), toy_config());
  return ctx;
}

OptimizerConfig toy_optimizer(OptimizerFamily family, long budget, std::uint64_t seed = 1) {
  OptimizerConfig c;
  c.family = family;
  c.evaluation_budget = budget;
  c.rng_seed = seed;
  c.knots = 1;
  c.optimize_duration = false;
  return c;
}

// A short transport on a coarse grid; cheap enough for many runs.
const ScoringContext& small_transport() {
  static const ScoringContext ctx = [] {
    Level l;
    l.id = "small";
    l.title = "Small";
    l.tweezer = {0.1, 160, -0.6, 0.6};
    l.initial_trap = Trap::tweezer(-0.3, 120);
    l.target_trap = Trap::tweezer(0.3, 120);
    l.duration_max = 0.4;
    l.static_potential = {{StaticFeature::Kind::barrier, -0.85, 400, 0.05},
                          {StaticFeature::Kind::barrier, 0.85, 400, 0.05}};
    return ScoringContext(l, toy_config());
  }();
  return ctx;
}

void check_run_invariants(const ScoringContext& ctx, const OptimizationRun& run) {
  REQUIRE_FALSE(run.trace.empty());
  CHECK(run.evaluations_used == long(run.trace.size()));
  CHECK(run.evaluations_used <= run.config.evaluation_budget);
  for (std::size_t i = 0; i < run.trace.size(); ++i) {
    CHECK(run.trace[i].index == long(i + 1));
    CHECK(run.trace[i].best_score >= run.trace[i].candidate_score);
    if (i > 0) CHECK(run.trace[i].best_score >= run.trace[i - 1].best_score);
  }
  CHECK(run.best_report.total_score == run.trace.back().best_score);
  CHECK(ctx.score(run.best_path) == run.best_report);
  CHECK_NOTHROW(ctx.check_path(run.best_path));
}

// Both basins of the toy mapped on the (x_end, A_end) grid at fixed duration.
struct BasinMap {
  double near_best = 0.0;
  double far_best = 0.0;
  ControlSample far_argmax;
};

BasinMap grid_oracle() {
  const auto& ctx = toy();
  const auto start = ctx.level().start_sample();
  BasinMap map;
  for (int ia = 0; ia <= 16; ++ia)
    for (int ix = 0; ix <= 28; ++ix) {
      const double x = std::min(0.7, -0.7 + ix * 0.05);
      const double A = ia * 10.0;
      const double f = ctx.score(ControlPath({start, {0.5, x, A}})).fidelity;
      if (x < 0.0) {
        map.near_best = std::max(map.near_best, f);
      } else if (f > map.far_best) {
        map.far_best = f;
        map.far_argmax = {0.5, x, A};
      }
    }
  return map;
}

}  // namespace

TEST_CASE("knot parameterization round-trips and clamps") {
  const Level& l = small_transport().level();
  const KnotParameterization param(l, l.start_sample(), 5, 0.02);
  CHECK(param.size() == 11);
  CHECK(param.duration_index() == 10);
  CHECK(param.lower(0) == doctest::Approx(-0.6));
  CHECK(param.upper(0) == doctest::Approx(0.6));
  CHECK(param.lower(1) == 0.0);
  CHECK(param.upper(1) == doctest::Approx(160));
  CHECK(param.lower(10) == doctest::Approx(0.02));
  CHECK(param.upper(10) == doctest::Approx(0.4));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> g(param.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      g[i] = std::uniform_real_distribution<double>(param.lower(i), param.upper(i))(rng);
    const auto path = param.to_path(g, PathOrigin::local_opt);
    CHECK(path.size() == 6);
    CHECK(path[0] == l.start_sample());
    CHECK(path.duration() == doctest::Approx(g.back()));
    const auto back = param.from_path(path);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(back[i] == doctest::Approx(g[i]).epsilon(1e-12));
  }
  std::vector<double> wild(param.size(), 1e6);
  param.clamp(wild);
  for (std::size_t i = 0; i < wild.size(); ++i) CHECK(wild[i] == param.upper(i));
}

TEST_CASE("straight path runs from the start sample to the target trap") {
  const Level& l = small_transport().level();
  const auto p = straight_path(l, 0.3);
  CHECK(p.samples().front() == l.start_sample());
  CHECK(p.samples().back().x0 == doctest::Approx(0.3));
  CHECK(p.samples().back().A == doctest::Approx(120));
  CHECK(p.duration() == doctest::Approx(0.3));
}

TEST_CASE("fitness ranks by score, then by fidelity") {
  ScoreReport a, b;
  a.total_score = 10;
  b.total_score = 9;
  b.fidelity = 1.0;
  CHECK(better_report(a, b));
  CHECK_FALSE(better_report(b, a));
  b.total_score = 10;
  b.fidelity = 0.5;
  a.fidelity = 0.5 + 1e-12;
  CHECK_FALSE(better_report(a, b));
  a.fidelity = 0.6;
  CHECK(better_report(a, b));
  CHECK_FALSE(better_report(a, a));
}

TEST_CASE("config validation names the field") {
  OptimizerConfig c;
  c.evaluation_budget = 0;
  try {
    c.validate();
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.field == "evaluation_budget");
  }
  c = {};
  c.family = OptimizerFamily::stochastic;
  c.stochastic.population = 1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = {};
  c.local.step_x = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  CHECK(optimizer_family_from_string("hybrid") == OptimizerFamily::hybrid);
  CHECK(to_string(OptimizerFamily::stochastic) == "stochastic");
  CHECK_THROWS_AS(optimizer_family_from_string("anneal"), ArgumentError);
}

TEST_CASE("local search keeps the invariants and improves a poor seed") {
  const auto& ctx = small_transport();
  OptimizerConfig c;
  c.knots = 4;
  c.evaluation_budget = 150;
  const auto seed = straight_path(ctx.level(), 0.1);
  const auto run = local_optimize(ctx, seed, c);
  check_run_invariants(ctx, run);
  CHECK(run.trace.front().candidate_score == ctx.score(seed).total_score);
  CHECK(run.best_report.total_score > ctx.score(seed).total_score);
  CHECK(run.accepted_moves > 0);
  CHECK(run.best_path.origin() == PathOrigin::local_opt);
  CHECK(run.level_id == "small");
}

TEST_CASE("local search rejects an invalid seed") {
  const auto& ctx = small_transport();
  OptimizerConfig c;
  CHECK_THROWS_AS(local_optimize(ctx, ControlPath({{0, 0, 0}, {2.0, 0, 0}}), c), ArgumentError);
  CHECK_THROWS_AS(local_optimize(ctx, ControlPath({{0, 0, 0}, {0.2, 0.9, 0}}), c), ArgumentError);
}

TEST_CASE("stochastic search keeps the invariants") {
  const auto& ctx = small_transport();
  OptimizerConfig c;
  c.family = OptimizerFamily::stochastic;
  c.knots = 4;
  c.evaluation_budget = 100;
  const auto run = stochastic_optimize(ctx, c);
  check_run_invariants(ctx, run);
  CHECK(run.evaluations_used == 100);
  CHECK(run.best_path.origin() == PathOrigin::stochastic_opt);
}

TEST_CASE("fixed rng seeds give bit-identical runs") {
  const auto& ctx = small_transport();
  OptimizerConfig c;
  c.family = OptimizerFamily::stochastic;
  c.knots = 3;
  c.evaluation_budget = 70;
  c.rng_seed = 42;
  const auto a = stochastic_optimize(ctx, c);
  const auto b = stochastic_optimize(ctx, c);
  CHECK(a.trace == b.trace);
  CHECK(a.best_path == b.best_path);
  CHECK(a.best_report == b.best_report);
  c.rng_seed = 43;
  const auto other = stochastic_optimize(ctx, c);
  CHECK_FALSE(other.trace == a.trace);

  c.family = OptimizerFamily::local;
  const auto seed = straight_path(ctx.level(), 0.2);
  CHECK(local_optimize(ctx, seed, c).trace == local_optimize(ctx, seed, c).trace);
}

TEST_CASE("a population of clones without mutation never improves") {
  const auto& ctx = small_transport();
  OptimizerConfig c;
  c.family = OptimizerFamily::stochastic;
  c.knots = 3;
  c.evaluation_budget = 96;
  c.stochastic.init = StochasticSettings::Init::clones;
  c.stochastic.mutation_scale = 0.0;
  const auto run = stochastic_optimize(ctx, c);
  REQUIRE(run.trace.size() == 96);
  for (const auto& e : run.trace) {
    CHECK(e.best_score == run.trace.front().best_score);
    CHECK(e.candidate_score == run.trace.front().candidate_score);
  }
}

TEST_CASE("every family respects bounds and duration across random configs") {
  const auto& ctx = small_transport();
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 12; ++trial) {
    OptimizerConfig c;
    c.family = OptimizerFamily(trial % 3);
    c.rng_seed = rng();
    c.knots = 1 + int(rng() % 6);
    c.evaluation_budget = 5 + long(rng() % 30);
    c.optimize_duration = rng() % 2;
    c.stochastic.population = 2 + int(rng() % 10);
    CAPTURE(trial);
    OptimizationRun run;
    const auto seed = straight_path(ctx.level(), 0.1 + 0.25 * (rng() % 100) / 100.0);
    switch (c.family) {
      case OptimizerFamily::local: run = local_optimize(ctx, seed, c); break;
      case OptimizerFamily::stochastic: run = stochastic_optimize(ctx, c); break;
      case OptimizerFamily::hybrid: run = hybrid_optimize(ctx, {seed, straight_path(ctx.level(), 0.3)}, c); break;
    }
    check_run_invariants(ctx, run);
  }
}

TEST_CASE("hybrid needs a seed") {
  OptimizerConfig c;
  CHECK_THROWS_AS(hybrid_optimize(small_transport(), {}, c), ArgumentError);
}

TEST_CASE("hybrid with one seed is local search with one evaluation less") {
  const auto& ctx = small_transport();
  OptimizerConfig c;
  c.knots = 3;
  c.evaluation_budget = 60;
  const auto seed = straight_path(ctx.level(), 0.15);
  const auto hybrid = hybrid_optimize(ctx, {seed}, c);
  c.evaluation_budget = 59;
  const auto local = local_optimize(ctx, seed, c);
  CHECK(hybrid.best_report == local.best_report);
  CHECK(hybrid.best_path.samples() == local.best_path.samples());
  CHECK(hybrid.best_path.origin() == PathOrigin::hybrid);
  REQUIRE(hybrid.trace.size() == local.trace.size() + 1);
  for (std::size_t i = 0; i < local.trace.size(); ++i) {
    auto shifted = local.trace[i];
    shifted.index += 1;
    CHECK(hybrid.trace[i + 1] == shifted);
  }
  CHECK(hybrid.accepted_moves == local.accepted_moves);
}

TEST_CASE("hybrid never loses to its best seed and records it") {
  const auto& ctx = small_transport();
  OptimizerConfig c;
  c.knots = 3;
  c.evaluation_budget = 40;
  std::vector<ControlPath> seeds{straight_path(ctx.level(), 0.05), straight_path(ctx.level(), 0.35),
                                 straight_path(ctx.level(), 0.2)};
  seeds[1].set_origin(PathOrigin::human);
  long best_seed = 0;
  int best_index = 0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const long s = ctx.score(seeds[i]).total_score;
    if (s > best_seed) best_seed = s, best_index = int(i);
  }
  const auto run = hybrid_optimize(ctx, seeds, c);
  check_run_invariants(ctx, run);
  CHECK(run.best_report.total_score >= best_seed);
  REQUIRE(run.seed_index);
  CHECK(*run.seed_index == best_index);
  CHECK(*run.seed_score == best_seed);
  CHECK(*run.seed_origin == seeds[best_index].origin());
  for (std::size_t i = 0; i < seeds.size(); ++i)
    CHECK(run.trace[i].candidate_score == ctx.score(seeds[i]).total_score);

  // A budget smaller than the seed list stops after the budget.
  c.evaluation_budget = 2;
  const auto short_run = hybrid_optimize(ctx, seeds, c);
  CHECK(short_run.trace.size() == 2);
}

TEST_CASE("the deceptive toy has a capped near basin and a higher far basin") {
  const auto map = grid_oracle();
  CHECK(map.near_best <= 0.6 + 0.05);
  CHECK(map.near_best > 0.5);
  CHECK(map.far_best > 0.75);
  const auto& ctx = toy();
  CHECK(zone_probability(ctx.target_state(), -1.0, 0.05) == doctest::Approx(0.6).epsilon(1e-3));
}

TEST_CASE("local search from the straight seed stalls in the near basin") {
  const auto& ctx = toy();
  const auto seed = straight_path(ctx.level(), 0.5);
  const auto run = local_optimize(ctx, seed, toy_optimizer(OptimizerFamily::local, 5000));
  check_run_invariants(ctx, run);
  CHECK(run.best_report.fidelity <= 0.6 + 0.05);
  CHECK(run.evaluations_used < 5000);  // stopped on step size, not budget
  CHECK(run.best_path.samples().back().x0 < 0.0);
}

TEST_CASE("a converged local search is a fixed point") {
  const auto& ctx = toy();
  const auto config = toy_optimizer(OptimizerFamily::local, 5000);
  // Descend to the optimum the search itself considers final.
  ControlPath point = straight_path(ctx.level(), 0.5);
  for (int round = 0; round < 10; ++round) {
    const auto run = local_optimize(ctx, point, config);
    point = run.best_path;
    if (run.accepted_moves == 0) break;
  }
  const auto again = local_optimize(ctx, point, config);
  CHECK(again.accepted_moves == 0);
  CHECK(again.best_path.samples() == point.samples());
  CHECK(again.best_report == ctx.score(point));
}

TEST_CASE("stochastic search leaves the near basin") {
  const auto& ctx = toy();
  const auto run = stochastic_optimize(ctx, toy_optimizer(OptimizerFamily::stochastic, 800, 1));
  check_run_invariants(ctx, run);
  CHECK(run.best_report.fidelity > 0.6 + 0.05);
}

TEST_CASE("hybrid from a good seed reaches local search's final score sooner") {
  const auto& ctx = toy();
  const auto local = local_optimize(ctx, straight_path(ctx.level(), 0.5),
                                    toy_optimizer(OptimizerFamily::local, 5000));
  const auto map = grid_oracle();
  const ControlPath good({ctx.level().start_sample(), map.far_argmax}, PathOrigin::human);
  const auto hybrid = hybrid_optimize(ctx, {good}, toy_optimizer(OptimizerFamily::hybrid, 5000));
  const auto reached = std::find_if(hybrid.trace.begin(), hybrid.trace.end(), [&](const TraceEntry& e) {
    return e.best_score >= local.best_report.total_score;
  });
  REQUIRE(reached != hybrid.trace.end());
  CHECK(reached->index <= local.evaluations_used / 2);
}

TEST_CASE("tunneling seed beats a straight seed on bring_home_water_fast") {
  const auto& entry = Catalog::builtin().at("bring_home_water_fast");
  const ScoringContext ctx(entry.level);
  OptimizerConfig c;
  c.knots = 8;
  c.evaluation_budget = 6;
  const double target_fidelity = 0.5;
  auto first_reaching = [&](const OptimizationRun& run) -> long {
    for (const auto& e : run.trace)
      if (e.best_fidelity >= target_fidelity) return e.index;
    return c.evaluation_budget + 1;
  };
  const auto local = local_optimize(ctx, straight_path(entry.level, entry.reference.duration()), c);
  const auto hybrid = hybrid_optimize(ctx, {entry.reference}, c);
  CHECK(first_reaching(hybrid) < first_reaching(local));
  CHECK(hybrid.seed_origin == PathOrigin::reference);
}

TEST_CASE("trace CSV round-trips with the fixed header") {
  std::vector<TraceEntry> trace{{1, 10, 10, 0, 0}, {2, 5, 10, 0, 0}, {3, 12, 12, 0, 0}};
  const auto text = format_trace_csv(trace);
  CHECK(text == "eval_index,candidate_score,best_score\n1,10,10\n2,5,10\n3,12,12\n");
  const auto back = parse_trace_csv(text);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].index == trace[i].index);
    CHECK(back[i].candidate_score == trace[i].candidate_score);
    CHECK(back[i].best_score == trace[i].best_score);
  }
  CHECK_THROWS_AS(parse_trace_csv("eval_index,candidate_score,best_score\n1,x,3\n"), ParseError);
  CHECK_THROWS_AS(parse_trace_csv("a,b\n"), ParseError);
}

TEST_CASE("convergence report of a single run is its trace") {
  RunSeries run{"ga", "lvl", {{1, 3, 3, 0, 0}, {2, 1, 3, 0, 0}, {3, 7, 7, 0, 0}}};
  const auto report = convergence_report({run}, {});
  REQUIRE(report.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(report.rows[i].n == long(i + 1));
    CHECK(report.rows[i].run_best[0] == run.trace[i].best_score);
    CHECK_FALSE(report.rows[i].player_high);
  }
  CHECK_FALSE(report.crossover[0]);
  CHECK(report.level_id == "lvl");
}

TEST_CASE("a player above the algorithm everywhere means no crossover") {
  RunSeries run{"local", "lvl", {}};
  for (long n = 1; n <= 50; ++n) run.trace.push_back({n, n, n, 0, 0});
  PlayerHistory player{"ann", "lvl", {}};
  for (long n = 1; n <= 50; ++n) player.scores.push_back(n + 100);
  const auto report = convergence_report({run}, {player});
  CHECK_FALSE(report.crossover[0]);
  CHECK(report.format().find("crossover local: none within budget") != std::string::npos);
}

TEST_CASE("players plateau below the optimum and the algorithm crosses late") {
  // Players climb fast to 900 of 1000 and stay there; the run gains 10
  // points per evaluation, so it first matches 900 at n = 90.
  const std::vector<long> a{300, 600, 850, 900, 880, 900, 890};
  const std::vector<long> b{500, 700, 820, 860, 870};
  RunSeries run{"ga", "lvl", {}};
  for (long n = 1; n <= 120; ++n) run.trace.push_back({n, 10 * n, 10 * n, 0, 0});
  const auto report = convergence_report({run}, {{"a", "lvl", a}, {"b", "lvl", b}});
  REQUIRE(report.crossover[0]);
  CHECK(*report.crossover[0] == 90);
  CHECK(report.rows.size() == 120);
  CHECK(report.rows[2].player_high == 850);
  CHECK(report.rows[3].player_high == 900);
  CHECK(report.rows[99].player_best[0] == 900);
  CHECK(report.rows[99].player_best[1] == 870);
  CHECK_FALSE(report.rows[119].run_best.empty());
}

TEST_CASE("convergence inputs must share a level") {
  RunSeries run{"ga", "one", {{1, 1, 1, 0, 0}}};
  PlayerHistory player{"p", "two", {1}};
  CHECK_THROWS_AS(convergence_report({run}, {player}), ArgumentError);
}

TEST_CASE("player CSV groups plays by user in file order") {
  const auto players = parse_player_csv("user_id,score\nann,3\nbob,5\nann,4\n", "lvl");
  REQUIRE(players.size() == 2);
  CHECK(players[0].user_id == "ann");
  CHECK(players[0].scores == std::vector<long>{3, 4});
  CHECK(players[1].scores == std::vector<long>{5});
  CHECK(players[0].level_id == "lvl");
  CHECK_THROWS_AS(parse_player_csv("ann,3\nbob,x\n"), ParseError);
}

TEST_CASE("report CSV has one column per series") {
  RunSeries run{"ga", "", {{1, 2, 2, 0, 0}, {2, 1, 2, 0, 0}}};
  const auto csv = convergence_report({run}, {{"p", "", {5}}}).format_csv();
  CHECK(csv == "n,ga,p,player_high\n1,2,5,5\n2,2,5,5\n");
}
