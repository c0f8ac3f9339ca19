#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "gapwave/hamiltonian.hpp"

namespace gapwave {

/// INI-style scenario file: [grid], [constants], [potential], [run], plus
/// command-specific sections such as [slit1] and [slit2]. Accessors throw
/// ConfigError naming the "section.key" they failed on.
class ScenarioConfig {
 public:
  ScenarioConfig() = default;

  static ScenarioConfig load(const std::filesystem::path& file);
  static ScenarioConfig parse(const std::string& text, std::filesystem::path base_dir = {});

  bool empty() const { return tree_.empty(); }
  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key) const;
  std::size_t get_count(const std::string& section, const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key) const;

  std::string string_or(const std::string& section, const std::string& key, std::string fallback) const;
  double double_or(const std::string& section, const std::string& key, double fallback) const;
  std::size_t count_or(const std::string& section, const std::string& key, std::size_t fallback) const;
  bool bool_or(const std::string& section, const std::string& key, bool fallback) const;
  std::optional<double> find_double(const std::string& section, const std::string& key) const;

  // Comma-separated list of counts, e.g. "4, 8, 16".
  std::vector<std::size_t> count_list(const std::string& section, const std::string& key) const;

  Grid grid() const;
  PhysicalConstants constants() const;
  Potential potential(const Grid& g, const PhysicalConstants& c) const;

  // Paths in the file are relative to the config's directory.
  std::filesystem::path resolve(const std::string& path) const;

 private:
  std::string raw(const std::string& section, const std::string& key) const;
  void require_section(const std::string& section) const;

  boost::property_tree::ptree tree_;
  std::filesystem::path base_dir_;
};

}  // namespace gapwave
