#include "qmoves/service/http_api.hpp"

#include "qmoves/errors.hpp"
#include "qmoves/service/json_io.hpp"
#include "qmoves/service/metrics.hpp"

namespace qmoves {

using nlohmann::json;

namespace {

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& kind, const std::string& message,
                json extra = json::object()) {
  extra["error"] = kind;
  extra["message"] = message;
  send_json(res, extra, status);
}

template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const ProgressionError& e) {
      send_error(res, 403, "locked", e.what(), {{"missing_prerequisite", e.missing_prerequisite}});
    } catch (const NotFoundError& e) {
      send_error(res, 404, "not_found", e.what());
    } catch (const ConflictError& e) {
      send_error(res, 409, "conflict", e.what());
    } catch (const ValidationError& e) {
      send_error(res, 400, "validation", e.what(), {{"field", e.field}});
    } catch (const UnsupportedVersionError& e) {
      send_error(res, 400, "unsupported_version", e.what(), {{"version", e.version}});
    } catch (const ParseError& e) {
      send_error(res, 400, "parse", e.what());
    } catch (const ArgumentError& e) {
      send_error(res, 400, "argument", e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "parse", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal", e.what());
    }
  };
}

long parse_id(const std::string& text) {
  std::size_t used = 0;
  long id = 0;
  try {
    id = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw NotFoundError("unknown play '" + text + "'");
  return id;
}

}  // namespace

void mount_api(httplib::Server& server, GameService& service) {
  server.Get("/v1/health", guarded([](const httplib::Request&, httplib::Response& res) {
               send_json(res, {{"status", "ok"}});
             }));

  server.Get("/v1/levels", guarded([&service](const httplib::Request&, httplib::Response& res) {
               json levels = json::array();
               for (const auto& e : service.catalog().entries()) levels.push_back(level_json(e, false));
               send_json(res, {{"levels", levels}});
             }));

  server.Get(R"(/v1/levels/([A-Za-z0-9_\-]+))", guarded([&service](const httplib::Request& req, httplib::Response& res) {
               send_json(res, level_json(service.catalog().at(req.matches[1].str()), true));
             }));

  server.Post("/v1/users", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                const json body = json::parse(req.body);
                const auto origin = recruitment_origin_from_string(body.value("origin", std::string("unknown")));
                send_json(res, to_json(service.register_user(body.at("name").get<std::string>(), origin)), 201);
              }));

  server.Get(R"(/v1/users/([A-Za-z0-9_\-]+))", guarded([&service](const httplib::Request& req, httplib::Response& res) {
               send_json(res, to_json(service.user(req.matches[1].str())));
             }));

  server.Post("/v1/plays", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                const std::vector<std::uint8_t> bytes(req.body.begin(), req.body.end());
                send_json(res, to_json(service.submit_encoded(bytes)), 201);
              }));

  server.Get(R"(/v1/plays/([0-9A-Za-z]+))", guarded([&service](const httplib::Request& req, httplib::Response& res) {
               const auto bytes = encode_play(service.play(parse_id(req.matches[1].str())));
               res.set_content(std::string(bytes.begin(), bytes.end()), "application/octet-stream");
             }));

  server.Get(R"(/v1/plays/([0-9A-Za-z]+)/replay)",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               const long id = parse_id(req.matches[1].str());
               const PlayRecord record = service.play(id);
               send_json(res, replay_json(service.context(record.level_id), record, id));
             }));

  server.Get(R"(/v1/leaderboards/([A-Za-z0-9_\-]+))",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               std::optional<std::string> around;
               if (req.has_param("around")) around = req.get_param_value("around");
               int window = 10;
               if (req.has_param("window")) {
                 try {
                   window = std::stoi(req.get_param_value("window"));
                 } catch (const std::exception&) {
                   throw ArgumentError("window must be an integer");
                 }
               }
               const std::string level = req.matches[1].str();
               json entries = json::array();
               for (const auto& e : service.leaderboard(level, around, window)) entries.push_back(to_json(e));
               send_json(res, {{"level_id", level}, {"entries", entries}});
             }));

  server.Get("/v1/metrics", guarded([&service](const httplib::Request&, httplib::Response& res) {
               send_json(res, to_json(engagement_metrics(service.users(), service.plays(), service.catalog())));
             }));
}

}  // namespace qmoves
