#include "qmoves/optim/optimizer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "qmoves/errors.hpp"

namespace qmoves {

std::string_view to_string(OptimizerFamily family) {
  switch (family) {
    case OptimizerFamily::local: return "local";
    case OptimizerFamily::stochastic: return "stochastic";
    case OptimizerFamily::hybrid: return "hybrid";
  }
  return "?";
}

OptimizerFamily optimizer_family_from_string(std::string_view name) {
  if (name == "local") return OptimizerFamily::local;
  if (name == "stochastic") return OptimizerFamily::stochastic;
  if (name == "hybrid") return OptimizerFamily::hybrid;
  throw ArgumentError("unknown optimizer family '" + std::string(name) + "'");
}

void OptimizerConfig::validate() const {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be positive");
  };
  if (evaluation_budget < 1) throw ValidationError("evaluation_budget", "must be at least 1");
  if (knots < 1) throw ValidationError("knots", "must be at least 1");
  if (!(min_duration_fraction > 0.0 && min_duration_fraction <= 1.0))
    throw ValidationError("min_duration_fraction", "must be in (0, 1]");
  positive(local.step_x, "local.step_x");
  positive(local.step_A, "local.step_A");
  positive(local.step_time, "local.step_time");
  if (!(local.step_decay > 0.0 && local.step_decay < 1.0))
    throw ValidationError("local.step_decay", "must be in (0, 1)");
  if (local.growth_streak < 1) throw ValidationError("local.growth_streak", "must be at least 1");
  if (!(local.growth_factor >= 1.0)) throw ValidationError("local.growth_factor", "must be >= 1");
  positive(local.min_step_fraction, "local.min_step_fraction");
  if (family == OptimizerFamily::stochastic) {
    if (stochastic.population < 2) throw ValidationError("stochastic.population", "must be at least 2");
    if (!(stochastic.elite_fraction >= 0.0 && stochastic.elite_fraction < 1.0))
      throw ValidationError("stochastic.elite_fraction", "must be in [0, 1)");
    if (!(stochastic.mutation_scale >= 0.0))
      throw ValidationError("stochastic.mutation_scale", "must be >= 0");
    positive(stochastic.mutation_decay, "stochastic.mutation_decay");
    if (!(stochastic.crossover_probability >= 0.0 && stochastic.crossover_probability <= 1.0))
      throw ValidationError("stochastic.crossover_probability", "must be in [0, 1]");
    if (stochastic.tournament_size < 1)
      throw ValidationError("stochastic.tournament_size", "must be at least 1");
  }
}

bool better_report(const ScoreReport& candidate, const ScoreReport& incumbent) {
  if (candidate.total_score != incumbent.total_score)
    return candidate.total_score > incumbent.total_score;
  return candidate.fidelity > incumbent.fidelity + 1e-9;
}

ControlPath straight_path(const Level& level, double duration) {
  const ControlSample start = level.start_sample();
  ControlSample end{duration, start.x0, 0.0};
  if (level.target_trap.kind == Trap::Kind::tweezer) {
    end.x0 = level.target_trap.x0;
    end.A = level.target_trap.A;
  } else {
    const auto& well = level.static_potential.at(level.target_trap.well);
    end.x0 = std::clamp(well.center, level.tweezer.x_min, level.tweezer.x_max);
  }
  return ControlPath({start, end}, PathOrigin::reference);
}

KnotParameterization::KnotParameterization(const Level& level, ControlSample start, int knots,
                                           double min_duration)
    : spec_(level.tweezer),
      start_(start),
      knots_(knots),
      min_duration_(min_duration),
      max_duration_(level.duration_max) {
  if (knots < 1) throw ArgumentError("knot count must be at least 1");
  start_.t = 0.0;
}

double KnotParameterization::lower(std::size_t gene) const {
  if (gene == duration_index()) return min_duration_;
  return gene % 2 == 0 ? spec_.x_min : 0.0;
}

double KnotParameterization::upper(std::size_t gene) const {
  if (gene == duration_index()) return max_duration_;
  return gene % 2 == 0 ? spec_.x_max : spec_.depth_max;
}

std::vector<double> KnotParameterization::from_path(const ControlPath& path) const {
  std::vector<double> genome(size());
  const double d = path.duration();
  for (int k = 1; k <= knots_; ++k) {
    const ControlSample s = path.at(d * k / knots_);
    genome[2 * (k - 1)] = s.x0;
    genome[2 * (k - 1) + 1] = s.A;
  }
  genome[duration_index()] = d;
  clamp(genome);
  return genome;
}

ControlPath KnotParameterization::to_path(const std::vector<double>& genome, PathOrigin origin) const {
  if (genome.size() != size()) throw ArgumentError("genome size mismatch");
  const double d = genome[duration_index()];
  std::vector<ControlSample> samples;
  samples.reserve(knots_ + 1);
  samples.push_back(start_);
  for (int k = 1; k <= knots_; ++k) {
    // The last knot lands on d exactly so the path duration is the gene value.
    const double t = k == knots_ ? d : d * k / knots_;
    samples.push_back({t, genome[2 * (k - 1)], genome[2 * (k - 1) + 1]});
  }
  return ControlPath(std::move(samples), origin);
}

void KnotParameterization::clamp(std::vector<double>& genome) const {
  for (std::size_t g = 0; g < genome.size(); ++g) genome[g] = std::clamp(genome[g], lower(g), upper(g));
}

namespace {

struct Tracker {
  OptimizationRun run;
  bool have_best = false;

  // Records one evaluation; returns true if it became the new best.
  bool record(const ScoreReport& report, const ControlPath& path) {
    const bool improved = !have_best || better_report(report, run.best_report);
    if (improved) {
      run.best_report = report;
      run.best_path = path;
      have_best = true;
    }
    ++run.evaluations_used;
    run.trace.push_back({run.evaluations_used, report.total_score, run.best_report.total_score,
                         report.fidelity, run.best_report.fidelity});
    return improved;
  }

  bool exhausted() const { return run.evaluations_used >= run.config.evaluation_budget; }
};

std::vector<ScoreReport> score_batch(const ScoringContext& context, const std::vector<ControlPath>& paths) {
  std::vector<ScoreReport> reports(paths.size());
  const std::size_t workers =
      std::min<std::size_t>(paths.size(), std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < paths.size(); ++i) reports[i] = context.score(paths[i]);
    return reports;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < paths.size(); i += workers) reports[i] = context.score(paths[i]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return reports;
}

double min_duration(const ScoringContext& context, const OptimizerConfig& config) {
  return config.min_duration_fraction * context.level().duration_max;
}

OptimizationRun local_search(const ScoringContext& context, const ControlPath& seed,
                             const OptimizerConfig& config) {
  config.validate();
  context.check_path(seed);
  Tracker tracker;
  tracker.run.level_id = context.level().id;
  tracker.run.config = config;

  const KnotParameterization param(context.level(), seed[0], config.knots,
                                   std::min(min_duration(context, config), seed.duration()));
  const PathOrigin origin = PathOrigin::local_opt;

  // The seed itself is the first incumbent, so a refinement can never report
  // less than what it started from.
  tracker.record(context.score(seed), seed);
  std::vector<double> current = param.from_path(seed);

  const std::size_t free_genes = config.optimize_duration ? param.size() : param.size() - 1;
  std::vector<double> initial_step(free_genes);
  for (std::size_t g = 0; g < free_genes; ++g) {
    if (g == param.duration_index())
      initial_step[g] = config.local.step_time;
    else
      initial_step[g] = g % 2 == 0 ? config.local.step_x : config.local.step_A;
  }
  std::vector<double> step = initial_step;

  auto try_candidate = [&](const std::vector<double>& genome) {
    const ControlPath path = param.to_path(genome, origin);
    return tracker.record(context.score(path), path);
  };

  while (!tracker.exhausted()) {
    bool any_accept = false;
    for (std::size_t g = 0; g < free_genes && !tracker.exhausted(); ++g) {
      for (const double sign : {1.0, -1.0}) {
        if (tracker.exhausted()) break;
        std::vector<double> candidate = current;
        candidate[g] += sign * step[g];
        param.clamp(candidate);
        if (candidate[g] == current[g]) continue;
        if (!try_candidate(candidate)) continue;

        any_accept = true;
        ++tracker.run.accepted_moves;
        current = candidate;
        int streak = 1;
        while (!tracker.exhausted()) {
          if (streak % config.local.growth_streak == 0)
            step[g] = std::min(step[g] * config.local.growth_factor, initial_step[g]);
          candidate = current;
          candidate[g] += sign * step[g];
          param.clamp(candidate);
          if (candidate[g] == current[g] || !try_candidate(candidate)) break;
          ++tracker.run.accepted_moves;
          current = candidate;
          ++streak;
        }
        break;
      }
    }
    if (!any_accept) {
      bool all_small = true;
      for (std::size_t g = 0; g < free_genes; ++g) {
        step[g] *= config.local.step_decay;
        if (step[g] >= initial_step[g] * config.local.min_step_fraction) all_small = false;
      }
      if (all_small) break;
    }
  }
  return std::move(tracker.run);
}

}  // namespace

OptimizationRun local_optimize(const ScoringContext& context, const ControlPath& seed,
                               const OptimizerConfig& config) {
  return local_search(context, seed, config);
}

OptimizationRun stochastic_optimize(const ScoringContext& context, const OptimizerConfig& config_in) {
  OptimizerConfig config = config_in;
  config.family = OptimizerFamily::stochastic;
  config.validate();
  const Level& level = context.level();
  const StochasticSettings& ga = config.stochastic;

  Tracker tracker;
  tracker.run.level_id = level.id;
  tracker.run.config = config;

  const KnotParameterization param(level, level.start_sample(), config.knots, min_duration(context, config));
  const std::size_t genes = param.size();
  const std::size_t free_genes = config.optimize_duration ? genes : genes - 1;
  std::mt19937_64 rng(config.rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto mutate = [&](std::vector<double>& genome, double scale) {
    for (std::size_t g = 0; g < free_genes; ++g) genome[g] += scale * param.range(g) * normal(rng);
    param.clamp(genome);
  };

  const std::vector<double> base = param.from_path(straight_path(level, 0.5 * level.duration_max));
  std::vector<std::vector<double>> population(ga.population, base);
  if (ga.init == StochasticSettings::Init::uniform) {
    for (std::size_t i = 1; i < population.size(); ++i)
      for (std::size_t g = 0; g < free_genes; ++g) population[i][g] = param.lower(g) + unit(rng) * param.range(g);
  }

  std::vector<ScoreReport> fitness;
  auto evaluate = [&](std::vector<std::vector<double>>& genomes) {
    const long room = config.evaluation_budget - tracker.run.evaluations_used;
    if (long(genomes.size()) > room) genomes.resize(std::max(0L, room));
    std::vector<ControlPath> paths;
    paths.reserve(genomes.size());
    for (const auto& g : genomes) paths.push_back(param.to_path(g, PathOrigin::stochastic_opt));
    auto reports = score_batch(context, paths);
    for (std::size_t i = 0; i < paths.size(); ++i) tracker.record(reports[i], paths[i]);
    return reports;
  };
  fitness = evaluate(population);

  const std::size_t elite_count =
      std::min<std::size_t>(std::size_t(std::lround(ga.elite_fraction * ga.population)), ga.population - 1);
  double scale = ga.mutation_scale;

  while (!tracker.exhausted()) {
    std::vector<std::size_t> order(population.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return better_report(fitness[a], fitness[b]); });

    auto tournament = [&]() -> const std::vector<double>& {
      std::uniform_int_distribution<std::size_t> pick(0, population.size() - 1);
      std::size_t best = pick(rng);
      for (int round = 1; round < ga.tournament_size; ++round) {
        const std::size_t other = pick(rng);
        if (better_report(fitness[other], fitness[best])) best = other;
      }
      return population[best];
    };

    std::vector<std::vector<double>> children;
    children.reserve(ga.population - elite_count);
    while (children.size() < std::size_t(ga.population) - elite_count) {
      const auto& a = tournament();
      const auto& b = tournament();
      std::vector<double> child = a;
      if (unit(rng) < ga.crossover_probability) {
        // BLX-0.5 blend.
        for (std::size_t g = 0; g < free_genes; ++g) {
          const double lo = std::min(a[g], b[g]);
          const double hi = std::max(a[g], b[g]);
          const double spread = 0.5 * (hi - lo);
          child[g] = lo - spread + unit(rng) * (hi - lo + 2.0 * spread);
        }
      }
      mutate(child, scale);
      children.push_back(std::move(child));
    }
    std::vector<ScoreReport> child_fitness = evaluate(children);

    std::vector<std::vector<double>> next;
    std::vector<ScoreReport> next_fitness;
    for (std::size_t i = 0; i < elite_count; ++i) {
      next.push_back(population[order[i]]);
      next_fitness.push_back(fitness[order[i]]);
    }
    for (std::size_t i = 0; i < children.size(); ++i) {
      next.push_back(std::move(children[i]));
      next_fitness.push_back(std::move(child_fitness[i]));
    }
    population = std::move(next);
    fitness = std::move(next_fitness);
    scale *= ga.mutation_decay;
  }
  return std::move(tracker.run);
}

OptimizationRun hybrid_optimize(const ScoringContext& context, const std::vector<ControlPath>& seeds,
                                const OptimizerConfig& config_in) {
  if (seeds.empty()) throw ArgumentError("hybrid optimization needs at least one seed");
  OptimizerConfig config = config_in;
  config.family = OptimizerFamily::hybrid;
  config.validate();
  for (const auto& seed : seeds) context.check_path(seed);

  Tracker tracker;
  tracker.run.level_id = context.level().id;
  tracker.run.config = config;

  std::size_t best_seed = 0;
  std::vector<ScoreReport> seed_reports;
  for (std::size_t i = 0; i < seeds.size() && !tracker.exhausted(); ++i) {
    seed_reports.push_back(context.score(seeds[i]));
    if (tracker.record(seed_reports.back(), seeds[i])) best_seed = i;
  }
  tracker.run.seed_index = int(best_seed);
  tracker.run.seed_origin = seeds[best_seed].origin();
  tracker.run.seed_score = seed_reports[best_seed].total_score;

  const long remaining = config.evaluation_budget - tracker.run.evaluations_used;
  if (remaining <= 0) {
    tracker.run.best_path.set_origin(PathOrigin::hybrid);
    return std::move(tracker.run);
  }

  OptimizerConfig local_config = config;
  local_config.family = OptimizerFamily::local;
  local_config.evaluation_budget = remaining;
  OptimizationRun refined = local_search(context, seeds[best_seed], local_config);

  // The refinement re-scores the chosen seed as its first incumbent, so its
  // best-so-far already dominates every seed scored above.
  OptimizationRun run = std::move(tracker.run);
  const long offset = run.evaluations_used;
  for (TraceEntry entry : refined.trace) {
    entry.index += offset;
    run.trace.push_back(entry);
  }
  run.evaluations_used += refined.evaluations_used;
  run.accepted_moves = refined.accepted_moves;
  run.best_report = refined.best_report;
  run.best_path = refined.best_path;
  run.best_path.set_origin(PathOrigin::hybrid);
  return run;
}

std::string format_trace_csv(const std::vector<TraceEntry>& trace) {
  std::string out = "eval_index,candidate_score,best_score\n";
  for (const auto& e : trace)
    out += std::to_string(e.index) + "," + std::to_string(e.candidate_score) + "," +
           std::to_string(e.best_score) + "\n";
  return out;
}

std::vector<TraceEntry> parse_trace_csv(const std::string& text) {
  std::vector<TraceEntry> trace;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_number == 1 && line.rfind("eval_index", 0) == 0) continue;
    long values[3];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (int i = 0; i < 3; ++i) {
      auto [next, ec] = std::from_chars(p, end, values[i]);
      if (ec != std::errc() || (i < 2 && (next == end || *next != ',')) || (i == 2 && next != end))
        throw ParseError("expected eval_index,candidate_score,best_score", line_number);
      p = next + 1;
    }
    trace.push_back({values[0], values[1], values[2], 0.0, 0.0});
  }
  return trace;
}

}  // namespace qmoves
