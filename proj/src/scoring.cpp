#include "qmoves/level/scoring.hpp"

#include <cmath>

#include "qmoves/quantum.hpp"

namespace qmoves {

int stars_for(double fidelity, const StarThresholds& thresholds) {
  if (fidelity >= thresholds.three) return 3;
  if (fidelity >= thresholds.two) return 2;
  if (fidelity >= thresholds.one) return 1;
  return 0;
}

long total_score(const Level& level, double fidelity, double time_used, int bonus_points) {
  const double penalty = level.time_penalty_weight * (time_used / level.duration_max);
  return std::lround(level.max_points * fidelity * (1.0 - penalty)) + bonus_points;
}

std::string_view to_string(FeedbackColor color) {
  switch (color) {
    case FeedbackColor::red: return "red";
    case FeedbackColor::yellow: return "yellow";
    case FeedbackColor::green: return "green";
  }
  return "?";
}

FeedbackColor feedback_color(double bar_value, const StarThresholds& thresholds) {
  if (bar_value >= thresholds.two) return FeedbackColor::green;
  if (bar_value >= thresholds.one) return FeedbackColor::yellow;
  return FeedbackColor::red;
}

namespace {

// Lowest eigenstate of the static landscape with most of its mass inside the well.
WaveFunction localized_well_state(const Level& level, int index, const SimConfig& config) {
  const auto& well = level.static_potential.at(index);
  const PotentialField v = static_potential(level, config);
  const int k = std::min(config.grid_points - 1, 24);
  for (const auto& pair : eigenstates(v, config, k)) {
    const double mass =
        zone_probability(pair.state, well.center - 3 * well.width, well.center + 3 * well.width);
    if (mass > 0.5) return pair.state;
  }
  throw ArgumentError("no bound state is localized in static well " + std::to_string(index));
}

WaveFunction trap_state(const Level& level, const Trap& trap, const SimConfig& config) {
  if (trap.kind == Trap::Kind::static_well) return localized_well_state(level, trap.well, config);
  return ground_state(landscape(level, {0.0, trap.x0, trap.A}, config), config);
}

}  // namespace

WaveFunction initial_state(const Level& level, const SimConfig& config) {
  return trap_state(level, level.initial_trap, config);
}

WaveFunction target_state(const Level& level, const SimConfig& config) {
  return trap_state(level, level.target_trap, config);
}

ScoringContext::ScoringContext(Level level, SimConfig config, ScoreOptions options)
    : level_(std::move(level)), config_(config), options_(options) {
  config_.validate();
  level_.validate(config_);
  static_field_ = static_potential(level_, config_);
  initial_ = qmoves::initial_state(level_, config_);
  target_ = qmoves::target_state(level_, config_);
}

void ScoringContext::check_path(const ControlPath& path) const {
  if (path.size() < 2) throw ArgumentError("control path needs at least two samples");
  if (path.duration() > level_.duration_max * (1 + 1e-12))
    throw ArgumentError("path duration " + std::to_string(path.duration()) +
                        " exceeds the level limit " + std::to_string(level_.duration_max));
  path.check_bounds(level_.tweezer);
}

ScoreReport ScoringContext::score(const ControlPath& path) const { return simulate(path, {}); }

ScoreReport ScoringContext::simulate(const ControlPath& path, const Observer& observe) const {
  check_path(path);
  ScoreReport report;
  report.time_used = path.duration();

  const auto x = grid_positions(config_);
  const double sigma = level_.tweezer.sigma;
  PathCursor cursor(path);
  double last_x0 = std::nan(""), last_A = std::nan("");
  auto potential_at = [&](double t, PotentialField& v) {
    const ControlSample s = cursor.at(t);
    if (s.x0 == last_x0 && s.A == last_A) return false;
    last_x0 = s.x0;
    last_A = s.A;
    v = static_field_;
    add_gaussian(v, x, s.x0, s.A, sigma);
    return true;
  };

  std::vector<bool> collected(level_.bonus_pickups.size(), false);
  auto on_sample = [&](double t, const WaveFunction& psi) {
    if (observe) observe(t, psi);
    report.feedback_trace.push_back(fidelity(psi, target_));
    if (!report.died) {
      for (std::size_t z = 0; z < level_.death_zones.size(); ++z) {
        const auto& zone = level_.death_zones[z];
        if (zone_probability(psi, zone.lo, zone.hi) > options_.death_threshold) {
          report.died = true;
          report.death_time = t;
          report.death_zone = int(z);
          break;
        }
      }
    }
    const double mean_x = position_expectation(psi);
    for (std::size_t b = 0; b < collected.size(); ++b) {
      const auto& pickup = level_.bonus_pickups[b];
      if (!collected[b] && std::abs(mean_x - pickup.position) <= pickup.radius) {
        collected[b] = true;
        report.bonus_points += pickup.points;
      }
    }
  };

  EvolveOptions evolve_options;
  evolve_options.stride = options_.sample_stride;
  try {
    if (path.duration() > 0.0) {
      const WaveFunction final_state =
          evolve_observed(initial_, potential_at, path.duration(), config_, evolve_options, on_sample);
      report.fidelity = fidelity(final_state, target_);
    }
  } catch (const EdgeLeakError& leak) {
    if (!report.died) {
      report.died = true;
      report.death_time = leak.time;
      report.death_zone = ScoreReport::kBoundaryZone;
    }
    report.fidelity = report.feedback_trace.empty() ? 0.0 : report.feedback_trace.back();
  }

  report.time_penalty = level_.time_penalty_weight * (report.time_used / level_.duration_max);
  if (report.died) {
    report.total_score = 0;
    report.stars = 0;
  } else {
    report.total_score = total_score(level_, report.fidelity, report.time_used, report.bonus_points);
    report.stars = stars_for(report.fidelity, level_.star_thresholds);
  }
  return report;
}

ScoreReport score_play(const Level& level, const ControlPath& path, const SimConfig& config) {
  return ScoringContext(level, config).score(path);
}

}  // namespace qmoves
