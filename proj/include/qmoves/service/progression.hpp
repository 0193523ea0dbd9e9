#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qmoves/level/catalog.hpp"

namespace qmoves {

enum class RecruitmentOrigin { forced_by_talk, voluntary_by_talk, online_media, unknown };

std::string_view to_string(RecruitmentOrigin origin);
RecruitmentOrigin recruitment_origin_from_string(std::string_view name);

/// One of the four conditions of the levels x badges experiment.
struct ExperimentCell {
  enum class Levels { locked, open };
  enum class Badges { on, off };
  Levels levels = Levels::locked;
  Badges badges = Badges::on;

  /// 0..3, levels mode in the high bit.
  int index() const { return 2 * int(levels) + int(badges); }
  static ExperimentCell from_index(int index);

  bool operator==(const ExperimentCell&) const = default;
};

std::string_view to_string(ExperimentCell::Levels mode);
std::string_view to_string(ExperimentCell::Badges mode);

struct Badge {
  enum class Kind { performance, engagement };
  std::string id;
  Kind kind = Kind::engagement;
  std::string criterion;
  std::int64_t awarded_ms = 0;

  bool operator==(const Badge&) const = default;
};

std::string_view to_string(Badge::Kind kind);

/// Best stars reached per level id.
using StarProgress = std::map<std::string, int>;

/// Which levels a player may open given their progress.
///
/// Tutorials unlock one after another. Finishing the last tutorial opens every
/// lab's bachelor levels; finishing all of a lab's bachelor levels opens its
/// master levels. Finishing any one lab's bachelor levels opens the first
/// scientific level; finishing every master level opens all of them.
/// "Finishing" means at least one star.
class UnlockTree {
 public:
  explicit UnlockTree(const Catalog& catalog);

  std::set<std::string> unlocked(const StarProgress& progress) const;

  /// The level that still has to be finished before `level_id` opens, or
  /// nothing if it is already open.
  std::optional<std::string> missing_prerequisite(const std::string& level_id,
                                                  const StarProgress& progress) const;

  std::set<std::string> all() const;

 private:
  const Catalog* catalog_;
};

/// Play-count thresholds of the engagement badges.
inline constexpr int kPlayCountBadges[] = {50, 100, 350, 1000};

/// Badge id for a play-count threshold.
std::string play_count_badge_id(int count);

/// Badges a player has earned given their total play count and progress;
/// timestamps are left zero.
std::vector<Badge> earned_badges(const Catalog& catalog, long play_count, const StarProgress& progress);

}  // namespace qmoves
