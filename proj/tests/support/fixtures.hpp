#pragma once

// Shared fixtures for the service, CLI and acceptance tests.

#include <json.hpp>

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qmoves/path/play_record.hpp"
#include "qmoves/service/game_service.hpp"

namespace qmoves::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("qmoves_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

/// Synthetic engagement log with known aggregates.
///
/// 540 registrants, all in open-levels cells. Tutorial 1 is tried by 500 and
/// finished by 490; tutorials 2 to 6 are each tried by 450 and finished by 441;
/// tutorial 7 is tried by 400 and finished by 324. That makes 98% completion
/// on levels 1 to 6, 81% on level 7, and 324 / 540 = 60% of registrants
/// through the tutorial. The first 50 finishers of every level die once before
/// succeeding, so deaths must not count as completions.
struct MetricsFixture {
  std::vector<UserProfile> users;
  std::vector<PlayRecord> plays;

  static constexpr std::int64_t kDay = 86'400'000;
  static constexpr std::int64_t kStart = 1'700'000'000'000;  // 2023-11-14 UTC

  MetricsFixture() {
    const RecruitmentOrigin origins[] = {RecruitmentOrigin::forced_by_talk, RecruitmentOrigin::voluntary_by_talk,
                                         RecruitmentOrigin::online_media, RecruitmentOrigin::unknown};
    for (int i = 1; i <= 540; ++i) {
      UserProfile u;
      u.id = "u" + std::to_string(i);
      u.name = "player" + std::to_string(i);
      u.registered_ms = kStart + i;
      u.origin = origins[i % 4];
      u.cell = ExperimentCell::from_index(2 + i % 2);
      users.push_back(u);
    }
    add_level("tutorial_01", 1, 500, 490);
    for (int k = 2; k <= 6; ++k) add_level("tutorial_0" + std::to_string(k), k, 450, 441);
    add_level("tutorial_07", 7, 400, 324);
  }

  /// Writes users.jsonl and plays.qmplay in the layout GameService reads.
  void write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / "users.jsonl");
    for (const auto& u : users) {
      out << nlohmann::json{{"id", u.id},
                            {"name", u.name},
                            {"registered_ms", u.registered_ms},
                            {"origin", std::string(to_string(u.origin))},
                            {"cell", u.cell.index()}}
                 .dump()
          << '\n';
    }
    write_file_bytes((dir / "plays.qmplay").string(), encode_play_batch(plays));
  }

 private:
  void add_level(const std::string& level, int k, int tried, int finished) {
    for (int i = 1; i <= tried; ++i) {
      // Odd users play one level per day, even users play everything on day 0.
      const std::int64_t day = i % 2 ? k - 1 : 0;
      const std::int64_t t = kStart + day * kDay + std::int64_t(k) * 60'000 + i;
      if (i <= finished && i <= 50) plays.push_back(record(level, i, t, false, true));
      plays.push_back(record(level, i, t + 1000, i <= finished, false));
    }
  }

  static PlayRecord record(const std::string& level, int user, std::int64_t t, bool finished, bool died) {
    PlayRecord r;
    r.level_id = level;
    r.user_id = "u" + std::to_string(user);
    r.timestamp_ms = t;
    r.client_version = "fixture";
    r.path = ControlPath({{0.0, -0.5, 100.0}, {0.5, 0.5, 100.0}});
    r.score.fidelity = finished ? 0.9 : 0.2;
    r.score.time_used = 0.5;
    r.score.total_score = finished ? 850 : 190;
    r.score.stars = finished ? 2 : 0;
    if (died) {
      r.score.fidelity = 0.0;
      r.score.total_score = 0;
      r.score.died = true;
      r.score.death_time = 0.1;
      r.score.death_zone = 0;
    }
    return r;
  }
};

/// Cheap simulation settings for tests that submit many plays.
inline SimConfig cheap_sim() {
  SimConfig c;
  c.grid_points = 64;
  c.dt = 1e-3;
  return c;
}

}  // namespace qmoves::testing
