#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmoves/level/level.hpp"
#include "qmoves/path/control_path.hpp"

namespace qmoves {

/// Position of a level in the progression tree.
enum class Tier { tutorial, bachelor, master, scientific };

std::string_view to_string(Tier tier);
Tier tier_from_string(std::string_view name);

struct CatalogEntry {
  Level level;
  /// "tutorial", a lab name ("cool", "tunneling", "control") or "scientific".
  std::string section;
  Tier tier = Tier::tutorial;
  ControlPath reference;
};

/// The built-in levels, in manifest order.
///
/// A catalog directory holds `catalog.txt` (one `id section tier` line per
/// level, `#` comments allowed) plus `<id>.qmlevel` and `<id>.ref.csv` for
/// every listed id.
class Catalog {
 public:
  static Catalog load(const std::string& directory);
  /// The catalog installed with the library (QMOVES_CATALOG_DIR).
  static const Catalog& builtin();

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  const CatalogEntry* find(std::string_view id) const;
  /// Throws NotFoundError for an unknown id.
  const CatalogEntry& at(std::string_view id) const;

  std::vector<const CatalogEntry*> tier(Tier t) const;
  std::vector<const CatalogEntry*> section(std::string_view name, std::optional<Tier> t = {}) const;
  std::vector<std::string> labs() const;

 private:
  std::vector<CatalogEntry> entries_;
};

}  // namespace qmoves
