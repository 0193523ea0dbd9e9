#pragma once

#include <json.hpp>

#include "qmoves/level/catalog.hpp"
#include "qmoves/level/scoring.hpp"
#include "qmoves/service/game_service.hpp"
#include "qmoves/service/metrics.hpp"

namespace qmoves {

nlohmann::json to_json(const ScoreReport& report);
nlohmann::json to_json(const Badge& badge);
nlohmann::json to_json(const UserProfile& user);
nlohmann::json to_json(const LeaderboardEntry& entry);
nlohmann::json to_json(const SubmitResult& result);
nlohmann::json to_json(const EngagementMetrics& metrics);

/// Catalog listing fields of a level; `with_file` adds its canonical text and
/// reference path.
nlohmann::json level_json(const CatalogEntry& entry, bool with_file);

/// Density frames of a stored play for rendering.
nlohmann::json replay_json(const ScoringContext& context, const PlayRecord& record, long play_id);

}  // namespace qmoves
