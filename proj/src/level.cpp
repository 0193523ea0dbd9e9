#include "qmoves/level/level.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace qmoves {

std::string_view to_string(SkillTag tag) {
  switch (tag) {
    case SkillTag::deceleration: return "deceleration";
    case SkillTag::tunneling: return "tunneling";
    case SkillTag::stabilization: return "stabilization";
  }
  return "?";
}

std::string_view to_string(DisplayMode mode) { return mode == DisplayMode::ball ? "ball" : "wave"; }

void Level::validate(const SimConfig& config) const {
  if (id.empty()) throw ValidationError("id", "must not be empty");
  for (char c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      throw ValidationError("id", "may only contain letters, digits, '_' and '-'");
  tweezer.validate(config);
  if (!(duration_max > 0.0)) throw ValidationError("duration_max", "must be positive");
  const auto in_domain = [&](double x) { return x >= config.domain_min && x <= config.domain_max; };
  for (const auto& f : static_potential) {
    if (!in_domain(f.center)) throw ValidationError("static_potential", "feature centre outside the domain");
    if (!(f.strength > 0.0)) throw ValidationError("static_potential", "feature strength must be positive");
    if (!(f.width > 0.0)) throw ValidationError("static_potential", "feature width must be positive");
  }
  const auto check_trap = [&](const Trap& trap, const char* field) {
    if (trap.kind == Trap::Kind::static_well) {
      if (trap.well < 0 || trap.well >= int(static_potential.size()) ||
          static_potential[trap.well].kind != StaticFeature::Kind::well)
        throw ValidationError(field, "references a static well that does not exist");
    } else {
      try {
        check_sample_bounds(tweezer, {0.0, trap.x0, trap.A});
      } catch (const BoundsError& e) {
        throw ValidationError(field, e.what());
      }
    }
  };
  check_trap(initial_trap, "initial_trap");
  check_trap(target_trap, "target_trap");
  for (const auto& z : death_zones)
    if (!(z.lo < z.hi) || !in_domain(z.lo) || !in_domain(z.hi))
      throw ValidationError("death_zones", "zone must satisfy lo < hi within the domain");
  for (const auto& b : bonus_pickups)
    if (!in_domain(b.position) || !(b.radius > 0.0) || b.points < 0)
      throw ValidationError("bonus_pickups", "pickup must lie in the domain with positive radius");
  const auto& s = star_thresholds;
  if (!(0.0 < s.one && s.one < s.two && s.two < s.three && s.three <= 1.0))
    throw ValidationError("star_thresholds", "must satisfy 0 < F1 < F2 < F3 <= 1");
  if (max_points < 0) throw ValidationError("max_points", "must be non-negative");
  if (!(time_penalty_weight >= 0.0 && time_penalty_weight <= 1.0))
    throw ValidationError("time_penalty_weight", "must lie in [0, 1]");
}

bool Level::has_tag(SkillTag tag) const {
  return std::find(skill_tags.begin(), skill_tags.end(), tag) != skill_tags.end();
}

ControlSample Level::start_sample() const {
  if (initial_trap.kind == Trap::Kind::tweezer) return {0.0, initial_trap.x0, initial_trap.A};
  if (target_trap.kind == Trap::Kind::tweezer) return {0.0, target_trap.x0, 0.0};
  return {0.0, std::clamp(0.0, tweezer.x_min, tweezer.x_max), 0.0};
}

PotentialField static_potential(const Level& level, const SimConfig& config) {
  const auto x = grid_positions(config);
  PotentialField v = PotentialField::Zero(config.grid_points);
  for (const auto& f : level.static_potential) {
    const double signed_depth = f.kind == StaticFeature::Kind::well ? f.strength : -f.strength;
    add_gaussian(v, x, f.center, signed_depth, f.width);
  }
  return v;
}

PotentialField landscape(const Level& level, const ControlSample& sample, const SimConfig& config) {
  return static_potential(level, config) + tweezer_potential(level.tweezer, sample, config);
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double parse_number(std::string_view s, int line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError("expected a number, got '" + std::string(s) + "'", line);
  return v;
}

int parse_int(std::string_view s, int line) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("expected an integer, got '" + std::string(s) + "'", line);
  return v;
}

// "a=1 b=2" with exactly the given keys, in any order.
std::map<std::string, std::string> parse_assignments(const std::vector<std::string>& words,
                                                     std::size_t first,
                                                     std::initializer_list<const char*> keys,
                                                     int line) {
  std::map<std::string, std::string> out;
  for (std::size_t i = first; i < words.size(); ++i) {
    const auto eq = words[i].find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value, got '" + words[i] + "'", line);
    auto key = words[i].substr(0, eq);
    if (std::find_if(keys.begin(), keys.end(), [&](const char* k) { return key == k; }) == keys.end())
      throw ParseError("unknown attribute '" + key + "'", line);
    if (!out.emplace(key, words[i].substr(eq + 1)).second)
      throw ParseError("duplicate attribute '" + key + "'", line);
  }
  for (const char* k : keys)
    if (!out.count(k)) throw ParseError(std::string("missing attribute '") + k + "'", line);
  return out;
}

Trap parse_trap(const std::string& value, int line) {
  const auto w = split_words(value);
  if (w.size() == 2 && w[0] == "well") return Trap::static_well(parse_int(w[1], line));
  if (!w.empty() && w[0] == "tweezer") {
    auto a = parse_assignments(w, 1, {"x0", "A"}, line);
    return Trap::tweezer(parse_number(a["x0"], line), parse_number(a["A"], line));
  }
  throw ParseError("trap must be 'well <index>' or 'tweezer x0=<x> A=<depth>'", line);
}

std::string format_trap(const Trap& trap) {
  if (trap.kind == Trap::Kind::static_well) return "well " + std::to_string(trap.well);
  return "tweezer x0=" + format_number(trap.x0) + " A=" + format_number(trap.A);
}

SkillTag parse_tag(const std::string& w, int line) {
  for (auto tag : {SkillTag::deceleration, SkillTag::tunneling, SkillTag::stabilization})
    if (to_string(tag) == w) return tag;
  throw ParseError("unknown skill tag '" + w + "'", line);
}

const std::set<std::string> kScalarKeys = {
    "id", "title", "display_mode", "duration_max", "tweezer", "initial_trap", "target_trap",
    "skill_tags", "star_thresholds", "max_points", "time_penalty_weight"};
const std::set<std::string> kListKeys = {"static_potential", "death_zones", "bonus_pickups"};

}  // namespace

Level parse_level(std::string_view text) {
  Level level;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  bool header = false;
  std::string list_key;
  std::set<std::string> seen;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    if (!header) {
      const auto w = split_words(line);
      if (w.size() != 2 || w[0] != "qmlevel") throw ParseError("expected header 'qmlevel 1'", line_no);
      const int version = parse_int(w[1], line_no);
      if (version != 1) throw UnsupportedVersionError(version);
      header = true;
      continue;
    }

    if (line[0] == '-') {
      if (list_key.empty()) throw ParseError("list item outside a list", line_no);
      const auto w = split_words(line.substr(1));
      if (list_key == "static_potential") {
        if (w.empty() || (w[0] != "well" && w[0] != "barrier"))
          throw ParseError("static feature must start with 'well' or 'barrier'", line_no);
        StaticFeature f;
        f.kind = w[0] == "well" ? StaticFeature::Kind::well : StaticFeature::Kind::barrier;
        const char* strength = f.kind == StaticFeature::Kind::well ? "depth" : "height";
        auto a = parse_assignments(w, 1, {"center", strength, "width"}, line_no);
        f.center = parse_number(a["center"], line_no);
        f.strength = parse_number(a[strength], line_no);
        f.width = parse_number(a["width"], line_no);
        level.static_potential.push_back(f);
      } else if (list_key == "death_zones") {
        auto a = parse_assignments(w, 0, {"lo", "hi"}, line_no);
        level.death_zones.push_back({parse_number(a["lo"], line_no), parse_number(a["hi"], line_no)});
      } else {
        auto a = parse_assignments(w, 0, {"position", "radius", "points"}, line_no);
        level.bonus_pickups.push_back({parse_number(a["position"], line_no),
                                       parse_number(a["radius"], line_no),
                                       parse_int(a["points"], line_no)});
      }
      continue;
    }

    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'key: value'", line_no);
    const std::string key = trim(std::string_view(line).substr(0, colon));
    const std::string value = trim(std::string_view(line).substr(colon + 1));
    if (!kScalarKeys.count(key) && !kListKeys.count(key))
      throw ParseError("unknown key '" + key + "'", line_no);
    if (!seen.insert(key).second) throw ParseError("duplicate key '" + key + "'", line_no);
    list_key.clear();

    if (kListKeys.count(key)) {
      if (!value.empty()) throw ParseError("list key '" + key + "' takes items on following lines", line_no);
      list_key = key;
    } else if (key == "id") {
      level.id = value;
    } else if (key == "title") {
      level.title = value;
    } else if (key == "display_mode") {
      if (value != "ball" && value != "wave") throw ParseError("display_mode must be ball or wave", line_no);
      level.display_mode = value == "ball" ? DisplayMode::ball : DisplayMode::wave;
    } else if (key == "duration_max") {
      level.duration_max = parse_number(value, line_no);
    } else if (key == "tweezer") {
      auto a = parse_assignments(split_words(value), 0, {"sigma", "depth_max", "x_min", "x_max"}, line_no);
      level.tweezer = {parse_number(a["sigma"], line_no), parse_number(a["depth_max"], line_no),
                       parse_number(a["x_min"], line_no), parse_number(a["x_max"], line_no)};
    } else if (key == "initial_trap") {
      level.initial_trap = parse_trap(value, line_no);
    } else if (key == "target_trap") {
      level.target_trap = parse_trap(value, line_no);
    } else if (key == "skill_tags") {
      for (const auto& w : split_words(value)) {
        const SkillTag tag = parse_tag(w, line_no);
        if (level.has_tag(tag)) throw ParseError("duplicate skill tag '" + w + "'", line_no);
        level.skill_tags.push_back(tag);
      }
    } else if (key == "star_thresholds") {
      const auto w = split_words(value);
      if (w.size() != 3) throw ParseError("star_thresholds needs three values", line_no);
      level.star_thresholds = {parse_number(w[0], line_no), parse_number(w[1], line_no),
                               parse_number(w[2], line_no)};
    } else if (key == "max_points") {
      level.max_points = parse_int(value, line_no);
    } else if (key == "time_penalty_weight") {
      level.time_penalty_weight = parse_number(value, line_no);
    }
  }
  if (!header) throw ParseError("missing header 'qmlevel 1'", line_no == 0 ? 1 : line_no);
  for (const char* required : {"id", "title", "duration_max", "tweezer", "initial_trap", "target_trap"})
    if (!seen.count(required)) throw ValidationError(required, "missing required field");

  std::sort(level.skill_tags.begin(), level.skill_tags.end());
  level.validate();
  return level;
}

std::string serialize_level(const Level& level) {
  std::ostringstream out;
  out << "qmlevel 1\n";
  out << "id: " << level.id << "\n";
  out << "title: " << level.title << "\n";
  out << "display_mode: " << to_string(level.display_mode) << "\n";
  out << "duration_max: " << format_number(level.duration_max) << "\n";
  const auto& tw = level.tweezer;
  out << "tweezer: sigma=" << format_number(tw.sigma) << " depth_max=" << format_number(tw.depth_max)
      << " x_min=" << format_number(tw.x_min) << " x_max=" << format_number(tw.x_max) << "\n";
  out << "initial_trap: " << format_trap(level.initial_trap) << "\n";
  out << "target_trap: " << format_trap(level.target_trap) << "\n";
  out << "static_potential:\n";
  for (const auto& f : level.static_potential) {
    const bool well = f.kind == StaticFeature::Kind::well;
    out << "  - " << (well ? "well" : "barrier") << " center=" << format_number(f.center)
        << (well ? " depth=" : " height=") << format_number(f.strength)
        << " width=" << format_number(f.width) << "\n";
  }
  out << "death_zones:\n";
  for (const auto& z : level.death_zones)
    out << "  - lo=" << format_number(z.lo) << " hi=" << format_number(z.hi) << "\n";
  out << "bonus_pickups:\n";
  for (const auto& b : level.bonus_pickups)
    out << "  - position=" << format_number(b.position) << " radius=" << format_number(b.radius)
        << " points=" << b.points << "\n";
  auto tags = level.skill_tags;
  std::sort(tags.begin(), tags.end());
  out << "skill_tags:";
  for (auto t : tags) out << " " << to_string(t);
  out << "\n";
  const auto& s = level.star_thresholds;
  out << "star_thresholds: " << format_number(s.one) << " " << format_number(s.two) << " "
      << format_number(s.three) << "\n";
  out << "max_points: " << level.max_points << "\n";
  out << "time_penalty_weight: " << format_number(level.time_penalty_weight) << "\n";
  return out.str();
}

Level load_level_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open level file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_level(buf.str());
}

}  // namespace qmoves
