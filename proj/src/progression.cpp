#include "qmoves/service/progression.hpp"

#include <array>

#include "qmoves/errors.hpp"

namespace qmoves {

namespace {

constexpr std::array<std::string_view, 4> kOrigins = {"forced_by_talk", "voluntary_by_talk",
                                                       "online_media", "unknown"};

bool finished(const StarProgress& progress, const std::string& id) {
  auto it = progress.find(id);
  return it != progress.end() && it->second >= 1;
}

// First level in `levels` that is not finished, if any.
std::optional<std::string> first_unfinished(const std::vector<const CatalogEntry*>& levels,
                                            const StarProgress& progress) {
  for (const auto* e : levels)
    if (!finished(progress, e->level.id)) return e->level.id;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(RecruitmentOrigin origin) { return kOrigins.at(std::size_t(origin)); }

RecruitmentOrigin recruitment_origin_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kOrigins.size(); ++i)
    if (kOrigins[i] == name) return RecruitmentOrigin(i);
  throw ArgumentError("unknown recruitment origin '" + std::string(name) + "'");
}

ExperimentCell ExperimentCell::from_index(int index) {
  if (index < 0 || index > 3) throw ArgumentError("experiment cell index must be 0..3");
  return {Levels(index / 2), Badges(index % 2)};
}

std::string_view to_string(ExperimentCell::Levels mode) {
  return mode == ExperimentCell::Levels::locked ? "locked" : "open";
}

std::string_view to_string(ExperimentCell::Badges mode) {
  return mode == ExperimentCell::Badges::on ? "on" : "off";
}

std::string_view to_string(Badge::Kind kind) {
  return kind == Badge::Kind::performance ? "performance" : "engagement";
}

UnlockTree::UnlockTree(const Catalog& catalog) : catalog_(&catalog) {}

std::set<std::string> UnlockTree::all() const {
  std::set<std::string> out;
  for (const auto& e : catalog_->entries()) out.insert(e.level.id);
  return out;
}

std::optional<std::string> UnlockTree::missing_prerequisite(const std::string& level_id,
                                                            const StarProgress& progress) const {
  const CatalogEntry& entry = catalog_->at(level_id);
  const auto tutorials = catalog_->tier(Tier::tutorial);
  switch (entry.tier) {
    case Tier::tutorial: {
      for (std::size_t i = 0; i < tutorials.size(); ++i) {
        if (tutorials[i]->level.id == level_id) return std::nullopt;
        if (!finished(progress, tutorials[i]->level.id)) return tutorials[i]->level.id;
      }
      return std::nullopt;
    }
    case Tier::bachelor:
      return first_unfinished(tutorials, progress);
    case Tier::master:
      if (auto t = first_unfinished(tutorials, progress)) return t;
      return first_unfinished(catalog_->section(entry.section, Tier::bachelor), progress);
    case Tier::scientific: {
      if (auto t = first_unfinished(tutorials, progress)) return t;
      const auto scientific = catalog_->tier(Tier::scientific);
      if (!scientific.empty() && scientific.front()->level.id == level_id) {
        std::optional<std::string> first_missing;
        for (const auto& lab : catalog_->labs()) {
          auto missing = first_unfinished(catalog_->section(lab, Tier::bachelor), progress);
          if (!missing) return std::nullopt;
          if (!first_missing) first_missing = missing;
        }
        return first_missing;
      }
      return first_unfinished(catalog_->tier(Tier::master), progress);
    }
  }
  return std::nullopt;
}

std::set<std::string> UnlockTree::unlocked(const StarProgress& progress) const {
  std::set<std::string> out;
  for (const auto& e : catalog_->entries())
    if (!missing_prerequisite(e.level.id, progress)) out.insert(e.level.id);
  return out;
}

std::string play_count_badge_id(int count) {
  return count == 350 ? "quantum_frenzy_350" : "plays_" + std::to_string(count);
}

std::vector<Badge> earned_badges(const Catalog& catalog, long play_count, const StarProgress& progress) {
  std::vector<Badge> out;
  for (int count : kPlayCountBadges) {
    if (play_count < count) break;
    const std::string title = count == 350 ? "Quantum Frenzy 350" : std::to_string(count) + " plays";
    out.push_back({play_count_badge_id(count), Badge::Kind::engagement, title, 0});
  }
  for (const auto& lab : catalog.labs()) {
    for (Tier tier : {Tier::bachelor, Tier::master}) {
      const auto levels = catalog.section(lab, tier);
      if (levels.empty() || first_unfinished(levels, progress)) continue;
      out.push_back({std::string(to_string(tier)) + "_" + lab, Badge::Kind::performance,
                     "every " + std::string(to_string(tier)) + " level of the " + lab + " lab finished", 0});
    }
  }
  // One badge per skill: three stars on any non-tutorial level with that tag.
  for (SkillTag tag : {SkillTag::deceleration, SkillTag::tunneling, SkillTag::stabilization}) {
    for (const auto& e : catalog.entries()) {
      if (e.tier == Tier::tutorial || !e.level.has_tag(tag)) continue;
      auto it = progress.find(e.level.id);
      if (it != progress.end() && it->second == 3) {
        out.push_back({"skill_" + std::string(to_string(tag)), Badge::Kind::performance,
                       "three stars on a " + std::string(to_string(tag)) + " level", 0});
        break;
      }
    }
  }
  return out;
}

}  // namespace qmoves
