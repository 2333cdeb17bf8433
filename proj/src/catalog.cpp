#include "secres/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace secres {

namespace {

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& tok, const std::string& source, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    fail(source, line, "expected a number, got '" + tok + "'");
  }
  if (used != tok.size()) fail(source, line, "expected a number, got '" + tok + "'");
  return v;
}

}  // namespace

std::string normalize_system_name(const std::string& name) {
  std::string out;
  for (char c : name)
    if (c != ' ' && c != '_' && c != '-') out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Catalog Catalog::parse(std::istream& is, const std::string& source) {
  Catalog cat;
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 13) fail(source, line, "expected 13 fields, found " + std::to_string(tok.size()));

    SystemEntry s;
    s.name = tok[0];
    s.m0 = parse_number(tok[1], source, line);

    std::vector<std::string> units;
    {
      std::stringstream us(tok[2]);
      for (std::string u; std::getline(us, u, ',');) units.push_back(u);
    }
    if (units.size() != 3) fail(source, line, "units must look like au-yr,mjup,deg");
    if (units[0] != "au-yr") fail(source, line, "unknown frame '" + units[0] + "'");
    double mass_unit = 1.0;
    if (units[1] == "mjup")
      mass_unit = kSunPerJupiterMass;
    else if (units[1] != "msun")
      fail(source, line, "unknown mass unit '" + units[1] + "'");
    double angle_unit = 1.0;
    if (units[2] == "deg")
      angle_unit = std::numbers::pi / 180.0;
    else if (units[2] != "rad")
      fail(source, line, "unknown angle unit '" + units[2] + "'");

    for (int j = 0; j < 2; ++j) {
      auto& p = s.planet[j];
      const int o = 3 + 5 * j;
      p.m = parse_number(tok[o], source, line) * mass_unit;
      p.a = parse_number(tok[o + 1], source, line);
      p.e = parse_number(tok[o + 2], source, line);
      p.M = parse_number(tok[o + 3], source, line) * angle_unit;
      p.omega = parse_number(tok[o + 4], source, line) * angle_unit;
      if (!(p.m >= 0.0)) fail(source, line, "negative planet mass");
      if (!(p.a > 0.0)) fail(source, line, "semi-major axis must be positive");
      if (!(p.e >= 0.0 && p.e < 1.0)) fail(source, line, "eccentricity outside [0, 1)");
    }
    if (!(s.m0 > 0.0)) fail(source, line, "star mass must be positive");
    if (!(s.planet[0].a < s.planet[1].a)) fail(source, line, "planet 1 must be the inner planet");
    if (cat.contains(s.name)) fail(source, line, "duplicate system '" + s.name + "'");
    cat.systems_.push_back(std::move(s));
  }
  return cat;
}

Catalog Catalog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog '" + path + "'");
  return parse(in, path);
}

bool Catalog::contains(const std::string& name) const {
  const std::string key = normalize_system_name(name);
  return std::any_of(systems_.begin(), systems_.end(),
                     [&](const SystemEntry& s) { return normalize_system_name(s.name) == key; });
}

const SystemEntry& Catalog::find(const std::string& name) const {
  const std::string key = normalize_system_name(name);
  for (const auto& s : systems_)
    if (normalize_system_name(s.name) == key) return s;
  throw std::runtime_error("system '" + name + "' not in catalog");
}

std::string default_catalog_path() {
  if (const char* env = std::getenv("SECRES_CATALOG"); env && *env) return env;
#ifdef SECRES_DATA_DIR
  return std::string(SECRES_DATA_DIR) + "/catalog.txt";
#else
  return "data/catalog.txt";
#endif
}

}  // namespace secres
