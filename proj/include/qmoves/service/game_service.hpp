#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "qmoves/level/catalog.hpp"
#include "qmoves/level/scoring.hpp"
#include "qmoves/path/play_record.hpp"
#include "qmoves/service/progression.hpp"

namespace qmoves {

struct UserProfile {
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

struct LeaderboardEntry {
  std::string level_id;
  std::string user_id;
  long best_score = 0;
  long play_count = 0;
  long rank = 0;
  std::int64_t achieved_ms = 0;

  bool operator==(const LeaderboardEntry&) const = default;
};

struct SubmitResult {
  long play_id = 0;
  ScoreReport score;
  bool personal_best = false;
  std::vector<std::string> new_unlocks;
  std::vector<Badge> new_badges;
};

struct ServiceOptions {
  /// Where users.jsonl and plays.qmplay live; empty keeps everything in memory.
  std::string data_dir;
  /// Load the data directory without creating or changing any file;
  /// registrations and submissions are refused.
  bool read_only = false;
  SimConfig sim;
  ScoreOptions scoring;
  /// Seeds the experiment-cell draws; the n-th registration always uses the
  /// n-th draw, also across restarts.
  std::uint64_t assignment_seed = 1;
  /// Milliseconds since the Unix epoch; replaceable for tests.
  std::function<std::int64_t()> clock;
};

/// Users, plays and everything derived from them.
///
/// Plays are appended to a log and never rewritten; leaderboards, unlocks and
/// badges are rebuilt from the log on start. Submissions for one user are
/// serialized; different users score concurrently.
class GameService {
 public:
  GameService(const Catalog& catalog, ServiceOptions options = {});
  ~GameService();

  GameService(const GameService&) = delete;
  GameService& operator=(const GameService&) = delete;

  const Catalog& catalog() const { return *catalog_; }
  const ServiceOptions& options() const { return options_; }

  /// Throws ConflictError for a name already taken.
  UserProfile register_user(const std::string& name, RecruitmentOrigin origin);

  /// Throws NotFoundError for an unknown user or level, ProgressionError for a
  /// level still locked for the user, ArgumentError for an unplayable path.
  SubmitResult submit_play(const std::string& user_id, const std::string& level_id, const ControlPath& path,
                           const std::string& client_version = "");

  /// Decodes an encoded play and submits its path for the user and level it
  /// names. The stored record carries the server's score and timestamp.
  SubmitResult submit_encoded(const std::vector<std::uint8_t>& bytes);

  UserProfile user(const std::string& user_id) const;
  std::vector<UserProfile> users() const;

  /// Ranked entries: the top `window` or, with `around_user`, a window of
  /// that size centred on the user's rank. Throws NotFoundError for an
  /// unknown level.
  std::vector<LeaderboardEntry> leaderboard(const std::string& level_id,
                                            const std::optional<std::string>& around_user = {},
                                            int window = 10) const;

  /// Stored play by 1-based id.
  PlayRecord play(long play_id) const;
  std::vector<PlayRecord> plays() const;
  long play_count() const;

  /// Scoring context for a level, built once and shared.
  const ScoringContext& context(const std::string& level_id) const;

  /// Plays whose stored score differs from a fresh re-score of their path.
  std::vector<long> audit() const;

  /// Flushes the log files.
  void flush();

 private:
  struct UserState;
  struct BoardRow {
    long best_score = 0;
    long play_count = 0;
    std::int64_t achieved_ms = 0;
    long achieved_play = 0;
  };

  std::mutex& user_lock(const std::string& user_id);
  UserProfile make_profile(const UserState& state) const;
  void load();
  SubmitResult apply(PlayRecord record, bool persist);
  std::int64_t now() const;

  const Catalog* catalog_;
  ServiceOptions options_;
  UnlockTree tree_;

  mutable std::shared_mutex state_mutex_;
  std::map<std::string, std::unique_ptr<UserState>> users_;
  std::map<std::string, std::string> user_by_name_;
  std::vector<PlayRecord> plays_;
  std::map<std::string, std::map<std::string, BoardRow>> boards_;
  std::mt19937_64 assignment_rng_;

  std::mutex registration_mutex_;
  std::mutex locks_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> user_locks_;

  mutable std::mutex contexts_mutex_;
  mutable std::map<std::string, std::unique_ptr<ScoringContext>> contexts_;

  std::mutex log_mutex_;
  std::ofstream users_log_;
  std::ofstream plays_log_;
};

}  // namespace qmoves
