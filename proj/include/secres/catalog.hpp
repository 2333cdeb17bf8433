#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "secres/elements.hpp"

namespace secres {

inline constexpr double kSunPerJupiterMass = 1.0 / 1047.3486;

// One record per line, '#' starts a comment:
//   name m0 units  m1 a1 e1 M1 varpi1  m2 a2 e2 M2 varpi2
// `units` is "<frame>,<planet mass>,<angle>" with frame au-yr (G = 4 pi^2),
// planet mass msun or mjup, angle deg or rad. Star mass is always in Msun.
// Planet 1 must be the inner one.
class Catalog {
 public:
  static Catalog parse(std::istream& is, const std::string& source = "catalog");
  static Catalog load(const std::string& path);

  const std::vector<SystemEntry>& systems() const { return systems_; }
  // Name lookup ignores case, spaces, underscores and hyphens.
  const SystemEntry& find(const std::string& name) const;
  bool contains(const std::string& name) const;

 private:
  std::vector<SystemEntry> systems_;
};

std::string normalize_system_name(const std::string& name);

// SECRES_CATALOG if set, else the catalog shipped with the sources.
std::string default_catalog_path();

}  // namespace secres
