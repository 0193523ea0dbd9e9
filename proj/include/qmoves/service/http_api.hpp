#pragma once

// Eigen must come first: httplib pulls in <resolv.h>, whose _res macro
// collides with Eigen parameter names.
#include "qmoves/service/game_service.hpp"

#include <httplib.h>

namespace qmoves {

/// Registers the /v1 routes on `server`:
///
///   GET  /v1/health
///   GET  /v1/levels, /v1/levels/{id}
///   POST /v1/users                       {"name", "origin"}
///   GET  /v1/users/{id}
///   POST /v1/plays                       encoded play record (octet-stream)
///   GET  /v1/plays/{id}                  the stored record, encoded
///   GET  /v1/plays/{id}/replay           density frames
///   GET  /v1/leaderboards/{level}?around={user}&window={k}
///   GET  /v1/metrics
///
/// Errors come back as {"error", "message"} with 400 (bad input), 403 (locked
/// level, plus "missing_prerequisite"), 404, 409 (name taken) or 500.
void mount_api(httplib::Server& server, GameService& service);

}  // namespace qmoves
