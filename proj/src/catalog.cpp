#include "qmoves/level/catalog.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmoves/errors.hpp"
#include "qmoves/path/play_record.hpp"

namespace qmoves {

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::tutorial: return "tutorial";
    case Tier::bachelor: return "bachelor";
    case Tier::master: return "master";
    case Tier::scientific: return "scientific";
  }
  return "?";
}

Tier tier_from_string(std::string_view name) {
  if (name == "tutorial") return Tier::tutorial;
  if (name == "bachelor") return Tier::bachelor;
  if (name == "master") return Tier::master;
  if (name == "scientific") return Tier::scientific;
  throw ArgumentError("unknown tier '" + std::string(name) + "'");
}

Catalog Catalog::load(const std::string& directory) {
  namespace fs = std::filesystem;
  const fs::path dir(directory);
  std::ifstream manifest(dir / "catalog.txt");
  if (!manifest) throw NotFoundError("no catalog manifest in " + directory);

  Catalog catalog;
  std::string line;
  int line_number = 0;
  while (std::getline(manifest, line)) {
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string id, section, tier, extra;
    if (!(fields >> id)) continue;
    if (!(fields >> section >> tier) || (fields >> extra))
      throw ParseError("expected: id section tier", line_number);
    if (catalog.find(id)) throw ParseError("duplicate level id '" + id + "'", line_number);

    CatalogEntry entry;
    entry.level = load_level_file((dir / (id + ".qmlevel")).string());
    if (entry.level.id != id)
      throw ParseError("file for '" + id + "' declares id '" + entry.level.id + "'", line_number);
    entry.section = section;
    try {
      entry.tier = tier_from_string(tier);
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), line_number);
    }
    const auto ref_bytes = read_file_bytes((dir / (id + ".ref.csv")).string());
    entry.reference = parse_path_csv(std::string(ref_bytes.begin(), ref_bytes.end()), PathOrigin::reference);
    catalog.entries_.push_back(std::move(entry));
  }
  return catalog;
}

const Catalog& Catalog::builtin() {
  static const Catalog catalog = load(QMOVES_CATALOG_DIR);
  return catalog;
}

const CatalogEntry* Catalog::find(std::string_view id) const {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const CatalogEntry& e) { return e.level.id == id; });
  return it == entries_.end() ? nullptr : &*it;
}

const CatalogEntry& Catalog::at(std::string_view id) const {
  if (const auto* e = find(id)) return *e;
  throw NotFoundError("unknown level '" + std::string(id) + "'");
}

std::vector<const CatalogEntry*> Catalog::tier(Tier t) const {
  std::vector<const CatalogEntry*> out;
  for (const auto& e : entries_)
    if (e.tier == t) out.push_back(&e);
  return out;
}

std::vector<const CatalogEntry*> Catalog::section(std::string_view name, std::optional<Tier> t) const {
  std::vector<const CatalogEntry*> out;
  for (const auto& e : entries_)
    if (e.section == name && (!t || e.tier == *t)) out.push_back(&e);
  return out;
}

std::vector<std::string> Catalog::labs() const {
  std::vector<std::string> out;
  for (const auto& e : entries_)
    if ((e.tier == Tier::bachelor || e.tier == Tier::master) &&
        std::find(out.begin(), out.end(), e.section) == out.end())
      out.push_back(e.section);
  return out;
}

}  // namespace qmoves
