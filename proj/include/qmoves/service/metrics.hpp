#pragma once

#include <map>
#include <string>
#include <vector>

#include "qmoves/level/catalog.hpp"
#include "qmoves/path/play_record.hpp"
#include "qmoves/service/game_service.hpp"

namespace qmoves {

struct LevelEngagement {
  std::string level_id;
  long tried = 0;      // users with at least one play
  long completed = 0;  // users with at least one play of one star or more
  double ratio = 0.0;  // completed / tried, 0 when nobody tried
};

struct OriginEngagement {
  RecruitmentOrigin origin = RecruitmentOrigin::unknown;
  long registrants = 0;
  long active_users = 0;
  /// Mean over active users of plays / active days.
  double plays_per_active_day = 0.0;
};

struct EngagementMetrics {
  long registrants = 0;
  long active_users = 0;
  long plays = 0;
  /// Catalog order, then levels the catalog does not know in id order.
  std::vector<LevelEngagement> levels;
  /// Fraction of registrants who finished the last tutorial.
  double tutorial_completion = 0.0;
  /// Per tutorial level: fraction of registrants who finished it.
  std::vector<double> tutorial_dropoff;
  /// Active days (UTC dates with a play) per user id; users without plays have 0.
  std::map<std::string, long> active_days;
  std::vector<OriginEngagement> by_origin;
  /// retention[n - 1] = number of users with at least n active days.
  std::vector<long> retention;
};

/// UTC calendar day number of a millisecond timestamp.
long utc_day(std::int64_t timestamp_ms);

EngagementMetrics engagement_metrics(const std::vector<UserProfile>& users, const std::vector<PlayRecord>& plays,
                                     const Catalog& catalog);

}  // namespace qmoves
