#include "qmoves/service/game_service.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>

#include "qmoves/errors.hpp"

namespace qmoves {

namespace fs = std::filesystem;
using nlohmann::json;

struct GameService::UserState {
  std::string id;
  std::string name;
  std::int64_t registered_ms = 0;
  RecruitmentOrigin origin = RecruitmentOrigin::unknown;
  ExperimentCell cell;
  std::vector<Badge> badges;
  std::set<std::string> unlocked;
  StarProgress stars;
  long play_count = 0;
};

namespace {

constexpr const char* kUsersFile = "users.jsonl";
constexpr const char* kPlaysFile = "plays.qmplay";

void put_u32(std::ofstream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

GameService::GameService(const Catalog& catalog, ServiceOptions options)
    : catalog_(&catalog),
      options_(std::move(options)),
      tree_(catalog),
      assignment_rng_(options_.assignment_seed) {
  options_.sim.validate();
  load();
}

GameService::~GameService() { flush(); }

std::int64_t GameService::now() const {
  if (options_.clock) return options_.clock();
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

void GameService::load() {
  if (options_.data_dir.empty()) return;
  const fs::path dir(options_.data_dir);
  if (!options_.read_only) fs::create_directories(dir);

  if (std::ifstream in(dir / kUsersFile); in) {
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
        auto state = std::make_unique<UserState>();
        state->id = j.at("id").get<std::string>();
        state->name = j.at("name").get<std::string>();
        state->registered_ms = j.at("registered_ms").get<std::int64_t>();
        state->origin = recruitment_origin_from_string(j.at("origin").get<std::string>());
        state->cell = ExperimentCell::from_index(j.at("cell").get<int>());
        state->unlocked = state->cell.levels == ExperimentCell::Levels::open ? tree_.all() : tree_.unlocked({});
        user_by_name_[state->name] = state->id;
        users_[state->id] = std::move(state);
        assignment_rng_.discard(1);
      } catch (const json::exception& e) {
        throw ParseError(std::string(kUsersFile) + ": " + e.what(), line_number);
      } catch (const ArgumentError& e) {
        throw ParseError(std::string(kUsersFile) + ": " + e.what(), line_number);
      }
    }
  }

  const fs::path plays_path = dir / kPlaysFile;
  if (fs::exists(plays_path)) {
    const auto bytes = read_file_bytes(plays_path.string());
    std::size_t complete = 0;
    const auto frames = split_play_batch(bytes, &complete);
    // A crash mid-append leaves a partial frame; drop it.
    if (complete < bytes.size() && !options_.read_only) fs::resize_file(plays_path, complete);
    for (const auto& frame : frames) {
      PlayRecord record = decode_play(frame);
      if (!users_.count(record.user_id))
        throw ParseError(std::string(kPlaysFile) + ": play for unknown user '" + record.user_id + "'");
      apply(std::move(record), false);
    }
  }

  if (options_.read_only) return;
  users_log_.open(dir / kUsersFile, std::ios::app | std::ios::binary);
  plays_log_.open(plays_path, std::ios::app | std::ios::binary);
  if (!users_log_ || !plays_log_) throw Error("cannot open the data files in " + options_.data_dir);
}

void GameService::flush() {
  std::lock_guard lock(log_mutex_);
  if (users_log_.is_open()) users_log_.flush();
  if (plays_log_.is_open()) plays_log_.flush();
}

std::mutex& GameService::user_lock(const std::string& user_id) {
  std::lock_guard lock(locks_mutex_);
  auto& slot = user_locks_[user_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

UserProfile GameService::register_user(const std::string& name, RecruitmentOrigin origin) {
  if (options_.read_only) throw Error("service is read-only");
  if (name.empty()) throw ArgumentError("user name must not be empty");
  std::lock_guard registration(registration_mutex_);
  std::unique_lock lock(state_mutex_);
  if (user_by_name_.count(name)) throw ConflictError("user name '" + name + "' is taken");

  auto state = std::make_unique<UserState>();
  state->id = "u" + std::to_string(users_.size() + 1);
  state->name = name;
  state->registered_ms = now();
  state->origin = origin;
  // 2^64 is a multiple of 4, so the remainder is exactly uniform.
  state->cell = ExperimentCell::from_index(int(assignment_rng_() % 4));
  state->unlocked = state->cell.levels == ExperimentCell::Levels::open ? tree_.all() : tree_.unlocked({});

  if (users_log_.is_open()) {
    const json j = {{"id", state->id},
                    {"name", state->name},
                    {"registered_ms", state->registered_ms},
                    {"origin", std::string(to_string(origin))},
                    {"cell", state->cell.index()}};
    std::lock_guard log(log_mutex_);
    users_log_ << j.dump() << '\n';
    users_log_.flush();
  }
  const UserProfile profile = make_profile(*state);
  user_by_name_[name] = state->id;
  users_[state->id] = std::move(state);
  return profile;
}

const ScoringContext& GameService::context(const std::string& level_id) const {
  const CatalogEntry& entry = catalog_->at(level_id);
  std::lock_guard lock(contexts_mutex_);
  auto& slot = contexts_[level_id];
  if (!slot) slot = std::make_unique<ScoringContext>(entry.level, options_.sim, options_.scoring);
  return *slot;
}

SubmitResult GameService::submit_play(const std::string& user_id, const std::string& level_id,
                                      const ControlPath& path, const std::string& client_version) {
  if (options_.read_only) throw Error("service is read-only");
  {
    std::shared_lock lock(state_mutex_);
    if (!users_.count(user_id)) throw NotFoundError("unknown user '" + user_id + "'");
  }
  const CatalogEntry& entry = catalog_->at(level_id);

  std::lock_guard serial(user_lock(user_id));
  ExperimentCell cell;
  StarProgress stars;
  {
    std::shared_lock lock(state_mutex_);
    const auto& state = *users_.at(user_id);
    cell = state.cell;
    stars = state.stars;
  }
  if (cell.levels == ExperimentCell::Levels::locked) {
    if (auto missing = tree_.missing_prerequisite(entry.level.id, stars))
      throw ProgressionError("level '" + level_id + "' is locked; finish '" + *missing + "' first", *missing);
  }

  const ScoringContext& ctx = context(level_id);
  PlayRecord record;
  record.level_id = level_id;
  record.user_id = user_id;
  record.timestamp_ms = now();
  record.client_version = client_version;
  record.path = path;
  record.score = ctx.score(path);
  return apply(std::move(record), true);
}

SubmitResult GameService::submit_encoded(const std::vector<std::uint8_t>& bytes) {
  const PlayRecord record = decode_play(bytes);
  return submit_play(record.user_id, record.level_id, record.path, record.client_version);
}

SubmitResult GameService::apply(PlayRecord record, bool persist) {
  std::unique_lock lock(state_mutex_);
  SubmitResult result;
  result.play_id = long(plays_.size()) + 1;
  result.score = record.score;

  if (persist && plays_log_.is_open()) {
    const auto bytes = encode_play(record);
    std::lock_guard log(log_mutex_);
    put_u32(plays_log_, std::uint32_t(bytes.size()));
    plays_log_.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    plays_log_.flush();
  }

  UserState& user = *users_.at(record.user_id);
  ++user.play_count;
  int& best_stars = user.stars[record.level_id];
  best_stars = std::max(best_stars, record.score.stars);

  if (user.cell.levels == ExperimentCell::Levels::locked) {
    for (const auto& id : tree_.unlocked(user.stars))
      if (user.unlocked.insert(id).second) result.new_unlocks.push_back(id);
  }

  if (user.cell.badges == ExperimentCell::Badges::on) {
    for (Badge badge : earned_badges(*catalog_, user.play_count, user.stars)) {
      const bool held = std::any_of(user.badges.begin(), user.badges.end(),
                                    [&](const Badge& b) { return b.id == badge.id; });
      if (held) continue;
      badge.awarded_ms = record.timestamp_ms;
      user.badges.push_back(badge);
      result.new_badges.push_back(badge);
    }
  }

  auto [row, first] = boards_[record.level_id].try_emplace(record.user_id);
  ++row->second.play_count;
  if (first || record.score.total_score > row->second.best_score) {
    row->second.best_score = record.score.total_score;
    row->second.achieved_ms = record.timestamp_ms;
    row->second.achieved_play = result.play_id;
    result.personal_best = true;
  }

  plays_.push_back(std::move(record));
  return result;
}

UserProfile GameService::make_profile(const UserState& s) const {
  UserProfile p;
  p.id = s.id;
  p.name = s.name;
  p.registered_ms = s.registered_ms;
  p.origin = s.origin;
  p.cell = s.cell;
  p.badges = s.badges;
  p.unlocked = s.unlocked;
  p.stars = s.stars;
  p.play_count = s.play_count;
  return p;
}

UserProfile GameService::user(const std::string& user_id) const {
  std::shared_lock lock(state_mutex_);
  auto it = users_.find(user_id);
  if (it == users_.end()) throw NotFoundError("unknown user '" + user_id + "'");
  return make_profile(*it->second);
}

std::vector<UserProfile> GameService::users() const {
  std::shared_lock lock(state_mutex_);
  std::vector<UserProfile> out;
  for (const auto& [id, state] : users_) out.push_back(make_profile(*state));
  std::sort(out.begin(), out.end(), [](const UserProfile& a, const UserProfile& b) {
    return std::stol(a.id.substr(1)) < std::stol(b.id.substr(1));
  });
  return out;
}

std::vector<LeaderboardEntry> GameService::leaderboard(const std::string& level_id,
                                                       const std::optional<std::string>& around_user,
                                                       int window) const {
  catalog_->at(level_id);
  if (window < 1) throw ArgumentError("leaderboard window must be at least 1");
  std::vector<LeaderboardEntry> ranked;
  std::vector<long> achieved_play;
  {
    std::shared_lock lock(state_mutex_);
    auto board = boards_.find(level_id);
    if (board != boards_.end()) {
      for (const auto& [user_id, row] : board->second) {
        ranked.push_back({level_id, user_id, row.best_score, row.play_count, 0, row.achieved_ms});
        achieved_play.push_back(row.achieved_play);
      }
    }
  }
  std::vector<std::size_t> order(ranked.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ranked[a].best_score != ranked[b].best_score) return ranked[a].best_score > ranked[b].best_score;
    if (ranked[a].achieved_ms != ranked[b].achieved_ms) return ranked[a].achieved_ms < ranked[b].achieved_ms;
    return achieved_play[a] < achieved_play[b];
  });
  std::vector<LeaderboardEntry> sorted;
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted.push_back(ranked[order[i]]);
    sorted.back().rank = long(i + 1);
  }

  const long n = long(sorted.size());
  long start = 0;
  if (around_user) {
    auto it = std::find_if(sorted.begin(), sorted.end(),
                           [&](const LeaderboardEntry& e) { return e.user_id == *around_user; });
    if (it != sorted.end()) start = long(it - sorted.begin()) - (window - 1) / 2;
  }
  start = std::max(0L, std::min(start, n - window));
  const long stop = std::min(n, start + window);
  return {sorted.begin() + start, sorted.begin() + stop};
}

PlayRecord GameService::play(long play_id) const {
  std::shared_lock lock(state_mutex_);
  if (play_id < 1 || play_id > long(plays_.size()))
    throw NotFoundError("unknown play " + std::to_string(play_id));
  return plays_[std::size_t(play_id - 1)];
}

std::vector<PlayRecord> GameService::plays() const {
  std::shared_lock lock(state_mutex_);
  return plays_;
}

long GameService::play_count() const {
  std::shared_lock lock(state_mutex_);
  return long(plays_.size());
}

std::vector<long> GameService::audit() const {
  std::vector<long> mismatched;
  const auto all = plays();
  for (std::size_t i = 0; i < all.size(); ++i)
    if (!(context(all[i].level_id).score(all[i].path) == all[i].score)) mismatched.push_back(long(i + 1));
  return mismatched;
}

}  // namespace qmoves
