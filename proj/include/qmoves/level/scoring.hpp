#pragma once

#include <functional>
#include <vector>

#include "qmoves/level/level.hpp"
#include "qmoves/path/control_path.hpp"
#include "qmoves/quantum/wave_function.hpp"

namespace qmoves {

struct ScoreReport {
  static constexpr int kNoZone = -1;
  /// Death by probability reaching the edge of the simulated domain.
  static constexpr int kBoundaryZone = -2;

  double fidelity = 0.0;
  double time_used = 0.0;
  double time_penalty = 0.0;
  int bonus_points = 0;
  long total_score = 0;
  int stars = 0;
  bool died = false;
  double death_time = 0.0;
  int death_zone = kNoZone;
  std::vector<double> feedback_trace;

  bool operator==(const ScoreReport&) const = default;
};

struct ScoreOptions {
  /// Steps between observation samples (death checks, pickups, feedback).
  int sample_stride = 50;
  /// Probability mass in a death zone that kills the play.
  double death_threshold = 0.01;
};

int stars_for(double fidelity, const StarThresholds& thresholds);

/// Points for a surviving play: round(max_points * F * (1 - penalty)) + bonus,
/// with penalty = beta * time_used / T.
long total_score(const Level& level, double fidelity, double time_used, int bonus_points);

enum class FeedbackColor { red, yellow, green };
std::string_view to_string(FeedbackColor color);

/// Bar colour: red below F1, yellow on [F1, F2), green from F2 up.
FeedbackColor feedback_color(double bar_value, const StarThresholds& thresholds);

WaveFunction initial_state(const Level& level, const SimConfig& config = {});
WaveFunction target_state(const Level& level, const SimConfig& config = {});

/// A level with its static landscape, initial and target states precomputed.
/// Immutable once built; `score` may be called concurrently.
class ScoringContext {
 public:
  using Observer = std::function<void(double t, const WaveFunction& psi)>;

  explicit ScoringContext(Level level, SimConfig config = {}, ScoreOptions options = {});

  const Level& level() const { return level_; }
  const SimConfig& config() const { return config_; }
  const ScoreOptions& options() const { return options_; }
  const WaveFunction& initial_state() const { return initial_; }
  const WaveFunction& target_state() const { return target_; }
  const PotentialField& static_field() const { return static_field_; }

  /// Throws ArgumentError if the path is longer than the level allows or
  /// leaves the tweezer bounds.
  void check_path(const ControlPath& path) const;

  ScoreReport score(const ControlPath& path) const;

  /// Scores `path`, calling `observe` at every sampled time.
  ScoreReport simulate(const ControlPath& path, const Observer& observe) const;

 private:
  Level level_;
  SimConfig config_;
  ScoreOptions options_;
  PotentialField static_field_;
  WaveFunction initial_;
  WaveFunction target_;
};

ScoreReport score_play(const Level& level, const ControlPath& path, const SimConfig& config = {});

}  // namespace qmoves
