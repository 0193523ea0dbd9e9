#include "qmoves/optim/convergence.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <sstream>

#include "qmoves/errors.hpp"

namespace qmoves {

RunSeries RunSeries::from_run(std::string label, const OptimizationRun& run) {
  return {std::move(label), run.level_id, run.trace};
}

ConvergenceReport convergence_report(const std::vector<RunSeries>& runs,
                                     const std::vector<PlayerHistory>& players) {
  ConvergenceReport report;
  auto claim_level = [&](const std::string& id) {
    if (id.empty()) return;
    if (report.level_id.empty())
      report.level_id = id;
    else if (report.level_id != id)
      throw ArgumentError("inputs reference different levels: " + report.level_id + " and " + id);
  };
  std::size_t length = 0;
  for (const auto& r : runs) {
    claim_level(r.level_id);
    report.run_labels.push_back(r.label);
    length = std::max(length, r.trace.size());
  }
  for (const auto& p : players) {
    claim_level(p.level_id);
    report.player_labels.push_back(p.user_id);
    length = std::max(length, p.scores.size());
  }

  std::vector<std::optional<long>> player_running(players.size());
  report.crossover.assign(runs.size(), std::nullopt);
  for (std::size_t i = 0; i < length; ++i) {
    ConvergenceRow row;
    row.n = long(i + 1);
    for (const auto& r : runs)
      row.run_best.push_back(i < r.trace.size() ? std::optional<long>(r.trace[i].best_score) : std::nullopt);
    for (std::size_t p = 0; p < players.size(); ++p) {
      if (i < players[p].scores.size())
        player_running[p] = std::max(player_running[p].value_or(players[p].scores[i]), players[p].scores[i]);
      row.player_best.push_back(player_running[p]);
      if (player_running[p]) row.player_high = std::max(row.player_high.value_or(*player_running[p]), *player_running[p]);
    }
    for (std::size_t r = 0; r < runs.size(); ++r) {
      if (!report.crossover[r] && row.run_best[r] && row.player_high && *row.run_best[r] >= *row.player_high)
        report.crossover[r] = row.n;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

std::string cell(const std::optional<long>& v) { return v ? std::to_string(*v) : "-"; }

}  // namespace

std::string ConvergenceReport::format() const {
  std::vector<std::string> header{"n"};
  header.insert(header.end(), run_labels.begin(), run_labels.end());
  header.insert(header.end(), player_labels.begin(), player_labels.end());
  if (!player_labels.empty()) header.push_back("player_high");

  std::vector<std::vector<std::string>> table{header};
  for (const auto& row : rows) {
    std::vector<std::string> line{std::to_string(row.n)};
    for (const auto& v : row.run_best) line.push_back(cell(v));
    for (const auto& v : row.player_best) line.push_back(cell(v));
    if (!player_labels.empty()) line.push_back(cell(row.player_high));
    table.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : table)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());

  std::ostringstream out;
  if (!level_id.empty()) out << "level " << level_id << "\n";
  for (const auto& line : table) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) out << "  ";
      out << std::string(width[c] - line[c].size(), ' ') << line[c];
    }
    out << "\n";
  }
  for (std::size_t r = 0; r < run_labels.size(); ++r) {
    out << "crossover " << run_labels[r] << ": ";
    if (crossover[r])
      out << *crossover[r] << "\n";
    else
      out << "none within budget\n";
  }
  return out.str();
}

std::string ConvergenceReport::format_csv() const {
  std::ostringstream out;
  out << "n";
  for (const auto& l : run_labels) out << "," << l;
  for (const auto& l : player_labels) out << "," << l;
  if (!player_labels.empty()) out << ",player_high";
  out << "\n";
  for (const auto& row : rows) {
    out << row.n;
    auto put = [&](const std::optional<long>& v) {
      out << ",";
      if (v) out << *v;
    };
    for (const auto& v : row.run_best) put(v);
    for (const auto& v : row.player_best) put(v);
    if (!player_labels.empty()) put(row.player_high);
    out << "\n";
  }
  return out.str();
}

std::vector<PlayerHistory> parse_player_csv(const std::string& text, const std::string& level_id) {
  std::vector<PlayerHistory> players;
  std::map<std::string, std::size_t> index;
  std::istringstream in(text);
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("expected user_id,score", line_number);
    const std::string user = line.substr(0, comma);
    const std::string value = line.substr(comma + 1);
    long score = 0;
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), score);
    if (ec != std::errc() || end != value.data() + value.size()) {
      if (line_number == 1) continue;  // header
      throw ParseError("bad score '" + value + "'", line_number);
    }
    if (user.empty()) throw ParseError("empty user id", line_number);
    auto [it, inserted] = index.try_emplace(user, players.size());
    if (inserted) players.push_back({user, level_id, {}});
    players[it->second].scores.push_back(score);
  }
  return players;
}

}  // namespace qmoves
