#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qmoves/quantum/grid.hpp"
#include "qmoves/quantum/potential.hpp"

namespace qmoves {

enum class SkillTag { deceleration, tunneling, stabilization };
enum class DisplayMode { ball, wave };

std::string_view to_string(SkillTag tag);
std::string_view to_string(DisplayMode mode);

/// Gaussian feature of the static landscape: a well (-depth) or a barrier (+height).
struct StaticFeature {
  enum class Kind { well, barrier };
  Kind kind = Kind::well;
  double center = 0.0;
  double strength = 0.0;  // depth for wells, height for barriers; always > 0
  double width = 0.05;

  bool operator==(const StaticFeature&) const = default;
};

/// Where a state lives: either the tweezer parked at (x0, A) on top of the
/// static landscape, or the lowest state localized in one static well.
struct Trap {
  enum class Kind { tweezer, static_well };
  Kind kind = Kind::tweezer;
  double x0 = 0.0;
  double A = 0.0;
  int well = -1;

  static Trap tweezer(double x0, double A) { return {Kind::tweezer, x0, A, -1}; }
  static Trap static_well(int index) { return {Kind::static_well, 0.0, 0.0, index}; }

  bool operator==(const Trap&) const = default;
};

struct Zone {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const Zone&) const = default;
};

struct BonusPickup {
  double position = 0.0;
  double radius = 0.0;
  int points = 0;
  bool operator==(const BonusPickup&) const = default;
};

struct StarThresholds {
  double one = 0.5;
  double two = 0.8;
  double three = 0.95;
  bool operator==(const StarThresholds&) const = default;
};

struct Level {
  std::string id;
  std::string title;
  std::vector<StaticFeature> static_potential;
  TweezerSpec tweezer;
  double duration_max = 1.0;
  Trap initial_trap;
  Trap target_trap;
  std::vector<Zone> death_zones;
  std::vector<BonusPickup> bonus_pickups;
  std::vector<SkillTag> skill_tags;
  StarThresholds star_thresholds;
  int max_points = 1000;
  double time_penalty_weight = 0.2;
  DisplayMode display_mode = DisplayMode::wave;

  /// Throws ValidationError naming the first offending field.
  void validate(const SimConfig& config = {}) const;

  bool has_tag(SkillTag tag) const;

  /// Tweezer control at t = 0 when no path is given: the initial trap if it is
  /// a tweezer, otherwise the target tweezer position with zero depth.
  ControlSample start_sample() const;

  bool operator==(const Level&) const = default;
};

/// Static landscape sampled on the grid.
PotentialField static_potential(const Level& level, const SimConfig& config);

/// Static landscape plus the tweezer at `sample`.
PotentialField landscape(const Level& level, const ControlSample& sample, const SimConfig& config);

/// Parses the `qmlevel 1` text format. Errors carry line numbers (syntax) or
/// field names (invariants).
Level parse_level(std::string_view text);

/// Canonical text form: fixed key order, shortest round-trip numbers.
std::string serialize_level(const Level& level);

Level load_level_file(const std::string& path);

}  // namespace qmoves
