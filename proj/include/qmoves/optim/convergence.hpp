#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmoves/optim/optimizer.hpp"

namespace qmoves {

/// Best-so-far series of one optimizer run, indexed by evaluation count.
struct RunSeries {
  std::string label;
  std::string level_id;
  std::vector<TraceEntry> trace;

  static RunSeries from_run(std::string label, const OptimizationRun& run);
};

/// One player's scores on one level, in the order the plays were made.
struct PlayerHistory {
  std::string user_id;
  std::string level_id;
  std::vector<long> scores;
};

struct ConvergenceRow {
  long n = 0;
  std::vector<std::optional<long>> run_best;     // per run; empty past its budget
  std::vector<std::optional<long>> player_best;  // per player; holds its last value after they stop
  std::optional<long> player_high;               // best over all players after n plays each
};

struct ConvergenceReport {
  std::string level_id;
  std::vector<std::string> run_labels;
  std::vector<std::string> player_labels;
  std::vector<ConvergenceRow> rows;
  /// Per run: first n where the run's best reaches the players' high score.
  std::vector<std::optional<long>> crossover;

  /// Fixed-width text table followed by one crossover line per run.
  std::string format() const;
  /// The same table as CSV (empty cells for missing values).
  std::string format_csv() const;
};

/// Aligns runs and player histories on n = evaluations = plays. Throws
/// ArgumentError if the inputs name more than one level.
ConvergenceReport convergence_report(const std::vector<RunSeries>& runs,
                                     const std::vector<PlayerHistory>& players);

/// `user_id,score` rows (optional header); plays in file order.
std::vector<PlayerHistory> parse_player_csv(const std::string& text, const std::string& level_id = "");

}  // namespace qmoves
