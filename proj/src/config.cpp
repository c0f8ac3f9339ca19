#include "gapwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "gapwave/error.hpp"

namespace gapwave {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

// Drops trailing "; comment" / "# comment" that the INI reader keeps in values.
std::string strip_comment(const std::string& v) {
  const auto pos = v.find_first_of(";#");
  return trim(pos == std::string::npos ? v : v.substr(0, pos));
}

std::string field(const std::string& section, const std::string& key) { return section + "." + key; }

}  // namespace

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("", "cannot open config file '" + file.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), file.parent_path());
}

ScenarioConfig ScenarioConfig::parse(const std::string& text, std::filesystem::path base_dir) {
  ScenarioConfig c;
  c.base_dir_ = std::move(base_dir);
  std::istringstream in(text);
  try {
    pt::read_ini(in, c.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", "line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [name, sub] : c.tree_) {
    if (sub.empty() && !sub.data().empty())
      throw ConfigError(name, "keys must live inside a [section]");
  }
  return c;
}

bool ScenarioConfig::has_section(const std::string& section) const {
  return tree_.get_child_optional(pt::ptree::path_type(section, '\0')).has_value();
}

bool ScenarioConfig::has(const std::string& section, const std::string& key) const {
  auto sec = tree_.get_child_optional(pt::ptree::path_type(section, '\0'));
  if (!sec) return false;
  return sec->get_child_optional(pt::ptree::path_type(key, '\0')).has_value();
}

void ScenarioConfig::require_section(const std::string& section) const {
  if (!has_section(section)) throw ConfigError(section, "required section [" + section + "] is missing");
}

std::string ScenarioConfig::raw(const std::string& section, const std::string& key) const {
  require_section(section);
  if (!has(section, key)) throw ConfigError(field(section, key), "required key is missing");
  const auto& sec = tree_.get_child(pt::ptree::path_type(section, '\0'));
  return strip_comment(sec.get_child(pt::ptree::path_type(key, '\0')).data());
}

std::string ScenarioConfig::get_string(const std::string& section, const std::string& key) const {
  std::string v = raw(section, key);
  if (v.empty()) throw ConfigError(field(section, key), "value is empty");
  return v;
}

double ScenarioConfig::get_double(const std::string& section, const std::string& key) const {
  const std::string v = get_string(section, key);
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc{} || r.ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(field(section, key), "expected a finite number, got '" + v + "'");
  return out;
}

std::uint64_t ScenarioConfig::get_u64(const std::string& section, const std::string& key) const {
  const std::string v = get_string(section, key);
  std::uint64_t out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc{} || r.ptr != v.data() + v.size())
    throw ConfigError(field(section, key), "expected a non-negative integer, got '" + v + "'");
  return out;
}

std::size_t ScenarioConfig::get_count(const std::string& section, const std::string& key) const {
  return static_cast<std::size_t>(get_u64(section, key));
}

bool ScenarioConfig::get_bool(const std::string& section, const std::string& key) const {
  std::string v = get_string(section, key);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw ConfigError(field(section, key), "expected true/false, got '" + v + "'");
}

std::string ScenarioConfig::string_or(const std::string& section, const std::string& key,
                                      std::string fallback) const {
  return has(section, key) ? get_string(section, key) : std::move(fallback);
}

double ScenarioConfig::double_or(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

std::size_t ScenarioConfig::count_or(const std::string& section, const std::string& key,
                                     std::size_t fallback) const {
  return has(section, key) ? get_count(section, key) : fallback;
}

bool ScenarioConfig::bool_or(const std::string& section, const std::string& key, bool fallback) const {
  return has(section, key) ? get_bool(section, key) : fallback;
}

std::optional<double> ScenarioConfig::find_double(const std::string& section, const std::string& key) const {
  if (!has(section, key)) return std::nullopt;
  return get_double(section, key);
}

std::vector<std::size_t> ScenarioConfig::count_list(const std::string& section, const std::string& key) const {
  const std::string v = get_string(section, key);
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t n = 0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), n);
    if (item.empty() || r.ec != std::errc{} || r.ptr != item.data() + item.size())
      throw ConfigError(field(section, key), "expected a comma-separated list of counts, got '" + v + "'");
    out.push_back(n);
  }
  return out;
}

Grid ScenarioConfig::grid() const {
  const double lo = get_double("grid", "x_min");
  const double hi = get_double("grid", "x_max");
  const std::size_t n = get_count("grid", "n_points");
  try {
    return make_grid(lo, hi, n);
  } catch (const InvalidArgument& e) {
    throw ConfigError("grid", e.what());
  }
}

PhysicalConstants ScenarioConfig::constants() const {
  PhysicalConstants c;
  if (has_section("constants")) {
    c.hbar = double_or("constants", "hbar", 1.0);
    c.mass = double_or("constants", "mass", 1.0);
  }
  try {
    validate_constants(c);
  } catch (const InvalidArgument& e) {
    throw ConfigError("constants", e.what());
  }
  return c;
}

Potential ScenarioConfig::potential(const Grid& g, const PhysicalConstants& c) const {
  const std::string kind = get_string("potential", "kind");
  Potential u;
  if (kind == "free") {
    u = potentials::Free{};
  } else if (kind == "box") {
    u = potentials::Box{};
  } else if (kind == "harmonic") {
    u = potentials::HarmonicOscillator{get_double("potential", "omega")};
  } else if (kind == "double_well") {
    u = potentials::DoubleWell{get_double("potential", "barrier_height"),
                               get_double("potential", "well_separation")};
  } else if (kind == "tabulated") {
    const auto file = resolve(get_string("potential", "file"));
    try {
      u = load_tabulated_potential(file, g);
    } catch (const FormatError& e) {
      throw ConfigError("potential.file", e.what());
    }
  } else {
    throw ConfigError("potential.kind",
                      "unknown potential '" + kind + "' (free, box, harmonic, double_well, tabulated)");
  }
  try {
    (void)evaluate_potential(u, g, c);
  } catch (const InvalidArgument& e) {
    throw ConfigError("potential", e.what());
  }
  return u;
}

std::filesystem::path ScenarioConfig::resolve(const std::string& path) const {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir_.empty()) return p;
  return base_dir_ / p;
}

}  // namespace gapwave
