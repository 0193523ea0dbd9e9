#include "qmoves/service/metrics.hpp"

#include <algorithm>
#include <set>

namespace qmoves {

long utc_day(std::int64_t timestamp_ms) {
  constexpr std::int64_t kDay = 86'400'000;
  // Floor division so pre-epoch times land on the right day.
  return long(timestamp_ms >= 0 ? timestamp_ms / kDay : -((-timestamp_ms + kDay - 1) / kDay));
}

EngagementMetrics engagement_metrics(const std::vector<UserProfile>& users, const std::vector<PlayRecord>& plays,
                                     const Catalog& catalog) {
  EngagementMetrics m;
  m.registrants = long(users.size());
  m.plays = long(plays.size());

  std::map<std::string, std::set<long>> days;
  std::map<std::string, long> play_counts;
  std::map<std::string, std::set<std::string>> tried, completed;
  for (const auto& p : plays) {
    days[p.user_id].insert(utc_day(p.timestamp_ms));
    ++play_counts[p.user_id];
    tried[p.level_id].insert(p.user_id);
    if (!p.score.died && p.score.stars >= 1) completed[p.level_id].insert(p.user_id);
  }

  for (const auto& u : users) m.active_days[u.id] = 0;
  for (const auto& [user, d] : days) m.active_days[user] = long(d.size());
  m.active_users = long(days.size());

  auto level_row = [&](const std::string& id) {
    LevelEngagement row{id, long(tried[id].size()), long(completed[id].size()), 0.0};
    if (row.tried > 0) row.ratio = double(row.completed) / double(row.tried);
    return row;
  };
  std::set<std::string> listed;
  for (const auto& e : catalog.entries()) {
    m.levels.push_back(level_row(e.level.id));
    listed.insert(e.level.id);
  }
  std::vector<std::string> extra;
  for (const auto& [id, who] : tried)
    if (!listed.count(id)) extra.push_back(id);
  for (const auto& id : extra) m.levels.push_back(level_row(id));

  const auto tutorials = catalog.tier(Tier::tutorial);
  for (const auto* t : tutorials) {
    const double done = double(completed[t->level.id].size());
    m.tutorial_dropoff.push_back(m.registrants > 0 ? done / double(m.registrants) : 0.0);
  }
  if (!m.tutorial_dropoff.empty()) m.tutorial_completion = m.tutorial_dropoff.back();

  for (RecruitmentOrigin origin : {RecruitmentOrigin::forced_by_talk, RecruitmentOrigin::voluntary_by_talk,
                                   RecruitmentOrigin::online_media, RecruitmentOrigin::unknown}) {
    OriginEngagement g;
    g.origin = origin;
    double sum = 0.0;
    for (const auto& u : users) {
      if (u.origin != origin) continue;
      ++g.registrants;
      auto it = days.find(u.id);
      if (it == days.end()) continue;
      ++g.active_users;
      sum += double(play_counts[u.id]) / double(it->second.size());
    }
    if (g.active_users > 0) g.plays_per_active_day = sum / double(g.active_users);
    m.by_origin.push_back(g);
  }

  long most = 0;
  for (const auto& [user, n] : m.active_days) most = std::max(most, n);
  m.retention.assign(std::size_t(most), 0);
  for (const auto& [user, n] : m.active_days)
    for (long k = 1; k <= n; ++k) ++m.retention[std::size_t(k - 1)];
  return m;
}

}  // namespace qmoves
