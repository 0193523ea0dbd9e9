#include "qmoves/service/json_io.hpp"

#include "qmoves/path/play_record.hpp"
#include "qmoves/quantum.hpp"

namespace qmoves {

using nlohmann::json;

json to_json(const ScoreReport& r) {
  json j = {{"fidelity", r.fidelity},
            {"time_used", r.time_used},
            {"time_penalty", r.time_penalty},
            {"bonus_points", r.bonus_points},
            {"total_score", r.total_score},
            {"stars", r.stars},
            {"died", r.died},
            {"feedback_trace", r.feedback_trace}};
  if (r.died) {
    j["death_time"] = r.death_time;
    j["death_zone"] = r.death_zone;
  }
  return j;
}

json to_json(const Badge& b) {
  return {{"id", b.id}, {"kind", std::string(to_string(b.kind))}, {"criterion", b.criterion},
          {"awarded_ms", b.awarded_ms}};
}

json to_json(const UserProfile& u) {
  json badges = json::array();
  for (const auto& b : u.badges) badges.push_back(to_json(b));
  json stars = json::object();
  for (const auto& [level, n] : u.stars) stars[level] = n;
  return {{"id", u.id},
          {"name", u.name},
          {"registered_ms", u.registered_ms},
          {"recruitment_origin", std::string(to_string(u.origin))},
          {"experiment_cell",
           {{"levels_mode", std::string(to_string(u.cell.levels))},
            {"badges_mode", std::string(to_string(u.cell.badges))}}},
          {"badges", badges},
          {"unlocked", u.unlocked},
          {"stars", stars},
          {"play_count", u.play_count}};
}

json to_json(const LeaderboardEntry& e) {
  return {{"rank", e.rank},         {"level_id", e.level_id},     {"user_id", e.user_id},
          {"best_score", e.best_score}, {"play_count", e.play_count}, {"achieved_ms", e.achieved_ms}};
}

json to_json(const SubmitResult& r) {
  json badges = json::array();
  for (const auto& b : r.new_badges) badges.push_back(to_json(b));
  return {{"play_id", r.play_id},
          {"score", to_json(r.score)},
          {"personal_best", r.personal_best},
          {"new_unlocks", r.new_unlocks},
          {"new_badges", badges}};
}

json to_json(const EngagementMetrics& m) {
  json levels = json::array();
  for (const auto& l : m.levels)
    levels.push_back({{"level_id", l.level_id}, {"tried", l.tried}, {"completed", l.completed}, {"ratio", l.ratio}});
  json origins = json::array();
  for (const auto& g : m.by_origin)
    origins.push_back({{"origin", std::string(to_string(g.origin))},
                       {"registrants", g.registrants},
                       {"active_users", g.active_users},
                       {"plays_per_active_day", g.plays_per_active_day}});
  json days = json::object();
  for (const auto& [user, n] : m.active_days) days[user] = n;
  return {{"registrants", m.registrants},
          {"active_users", m.active_users},
          {"plays", m.plays},
          {"levels", levels},
          {"tutorial_completion", m.tutorial_completion},
          {"tutorial_dropoff", m.tutorial_dropoff},
          {"active_days", days},
          {"by_origin", origins},
          {"retention", m.retention}};
}

json level_json(const CatalogEntry& entry, bool with_file) {
  const Level& l = entry.level;
  json tags = json::array();
  for (SkillTag t : l.skill_tags) tags.push_back(std::string(to_string(t)));
  json j = {{"id", l.id},
            {"title", l.title},
            {"section", entry.section},
            {"tier", std::string(to_string(entry.tier))},
            {"skill_tags", tags},
            {"display_mode", std::string(to_string(l.display_mode))},
            {"duration_max", l.duration_max},
            {"star_thresholds", {l.star_thresholds.one, l.star_thresholds.two, l.star_thresholds.three}},
            {"max_points", l.max_points}};
  if (with_file) {
    j["level_file"] = serialize_level(l);
    j["reference_csv"] = format_path_csv(entry.reference);
  }
  return j;
}

json replay_json(const ScoringContext& context, const PlayRecord& record, long play_id) {
  const SimConfig& c = context.config();
  const auto x = grid_positions(c);
  json frames = json::array();
  PathCursor cursor(record.path);
  const auto report = context.simulate(record.path, [&](double t, const WaveFunction& psi) {
    const ControlSample s = cursor.at(t);
    const auto density = psi.density();
    frames.push_back({{"t", t},
                      {"x0", s.x0},
                      {"A", s.A},
                      {"density", std::vector<double>(density.data(), density.data() + density.size())}});
  });
  const auto& v = context.static_field();
  return {{"play_id", play_id},
          {"level_id", record.level_id},
          {"user_id", record.user_id},
          {"x", std::vector<double>(x.data(), x.data() + x.size())},
          {"static_potential", std::vector<double>(v.data(), v.data() + v.size())},
          {"frames", frames},
          {"score", to_json(report)}};
}

}  // namespace qmoves
