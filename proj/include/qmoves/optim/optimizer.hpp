#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmoves/level/scoring.hpp"

namespace qmoves {

enum class OptimizerFamily { local, stochastic, hybrid };
std::string_view to_string(OptimizerFamily family);
OptimizerFamily optimizer_family_from_string(std::string_view name);

struct LocalSettings {
  double step_x = 0.05;
  double step_A = 16.0;
  double step_time = 0.05;
  double step_decay = 0.5;
  /// Consecutive acceptances in one direction before the step grows.
  int growth_streak = 3;
  double growth_factor = 2.0;
  /// Search ends once every step has decayed below this fraction of its start.
  double min_step_fraction = 1e-3;
};

struct StochasticSettings {
  int population = 32;
  double elite_fraction = 0.125;
  /// Mutation standard deviation as a fraction of each gene's range.
  double mutation_scale = 0.05;
  double mutation_decay = 0.99;
  double crossover_probability = 0.7;
  int tournament_size = 2;
  /// Individual 0 is always the straight path; the rest are drawn uniformly
  /// within bounds, or copied from individual 0.
  enum class Init { uniform, clones };
  Init init = Init::uniform;
};

struct OptimizerConfig {
  OptimizerFamily family = OptimizerFamily::local;
  long evaluation_budget = 1000;
  std::uint64_t rng_seed = 1;
  /// Free control knots after the pinned start sample.
  int knots = 32;
  /// When false the duration stays at the seed's value.
  bool optimize_duration = true;
  /// Lower limit on the duration, as a fraction of the level's maximum.
  double min_duration_fraction = 0.05;
  LocalSettings local;
  StochasticSettings stochastic;

  void validate() const;
};

struct TraceEntry {
  long index = 0;  // 1-based evaluation count
  long candidate_score = 0;
  long best_score = 0;
  double candidate_fidelity = 0.0;
  double best_fidelity = 0.0;

  bool operator==(const TraceEntry&) const = default;
};

struct OptimizationRun {
  std::string level_id;
  OptimizerConfig config;
  ControlPath best_path;
  ScoreReport best_report;
  std::vector<TraceEntry> trace;
  long evaluations_used = 0;
  long accepted_moves = 0;
  /// Hybrid runs: the seed refinement started from.
  std::optional<int> seed_index;
  std::optional<PathOrigin> seed_origin;
  std::optional<long> seed_score;
};

/// Fitness order: total score, then fidelity as a tie-break (ignoring
/// differences below 1e-9 so round-off cannot count as progress).
bool better_report(const ScoreReport& candidate, const ScoreReport& incumbent);

/// Straight ramp from the level's start sample to its target trap.
ControlPath straight_path(const Level& level, double duration);

/// Maps a control path onto a flat genome: the start sample is pinned and the
/// remaining controls are `knots` samples evenly spaced in time, followed by
/// the duration. Layout: [x_1, A_1, ..., x_K, A_K, duration].
class KnotParameterization {
 public:
  KnotParameterization(const Level& level, ControlSample start, int knots, double min_duration);

  int knots() const { return knots_; }
  std::size_t size() const { return 2 * std::size_t(knots_) + 1; }
  std::size_t duration_index() const { return size() - 1; }

  std::vector<double> from_path(const ControlPath& path) const;
  ControlPath to_path(const std::vector<double>& genome, PathOrigin origin) const;
  void clamp(std::vector<double>& genome) const;
  double lower(std::size_t gene) const;
  double upper(std::size_t gene) const;
  double range(std::size_t gene) const { return upper(gene) - lower(gene); }

 private:
  TweezerSpec spec_;
  ControlSample start_;
  int knots_;
  double min_duration_;
  double max_duration_;
};

OptimizationRun local_optimize(const ScoringContext& context, const ControlPath& seed,
                               const OptimizerConfig& config);

OptimizationRun stochastic_optimize(const ScoringContext& context, const OptimizerConfig& config);

OptimizationRun hybrid_optimize(const ScoringContext& context, const std::vector<ControlPath>& seeds,
                                const OptimizerConfig& config);

/// `eval_index,candidate_score,best_score` rows with a header line.
std::string format_trace_csv(const std::vector<TraceEntry>& trace);
std::vector<TraceEntry> parse_trace_csv(const std::string& text);

}  // namespace qmoves
