#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gapwave/bipartite.hpp"
#include "gapwave/schmidt.hpp"
#include "gapwave/spectrum.hpp"

namespace gapwave::io {

using nlohmann::json;

// Shortest string that round-trips to the same double.
std::string format_double(double v);

void write_text(const std::filesystem::path& file, const std::string& content);
void write_json(const std::filesystem::path& file, const json& j);

// One row per gap: lambda, multiplicity of its cluster, n, m (blank when unattributed).
std::string gap_spectrum_csv(const GapSpectrum& g);
json to_json(const GapSpectrum& g);
json to_json(const MatchReport& r);
json to_json(const Grid& g);

std::string density_csv(const Grid& g, std::span<const double> density);

struct TrajectoryRow {
  double time = 0.0;
  double norm = 0.0;
  double overlap_modulus = 0.0;
  double overlap_phase = 0.0;
};
std::string trajectory_csv(std::span<const TrajectoryRow> rows);

/// Sidecar for a snapshot file: little-endian complex doubles (re, im),
/// each snapshot row-major with `rows` x `cols` entries.
struct SnapshotMeta {
  Grid grid;
  std::string kind = "bipartite";  // or "one_body"
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> times;
  double dt = 0.0;
  std::size_t record_every = 0;
};

json to_json(const SnapshotMeta& m);
SnapshotMeta snapshot_meta_from_json(const json& j);

// Sidecar path convention: "<file>.json".
std::filesystem::path sidecar_path(const std::filesystem::path& bin);

class SnapshotWriter {
 public:
  SnapshotWriter(std::filesystem::path bin, SnapshotMeta meta);
  void append(double t, const WaveFunction& psi);
  void append(double t, const BipartiteWave& psi);
  // Writes the sidecar; called by the destructor if not called explicitly.
  void finish();
  ~SnapshotWriter();

  SnapshotWriter(const SnapshotWriter&) = delete;
  SnapshotWriter& operator=(const SnapshotWriter&) = delete;

 private:
  void put(const cd& v);

  std::filesystem::path bin_;
  SnapshotMeta meta_;
  std::ofstream out_;
  bool finished_ = false;
};

struct SnapshotFile {
  SnapshotMeta meta;
  std::vector<Eigen::MatrixXcd> snapshots;  // rows x cols each
};

SnapshotFile read_snapshots(const std::filesystem::path& bin);

// Loads snapshot `index` as a bipartite state (kind must be "bipartite").
BipartiteWave load_bipartite(const std::filesystem::path& bin, std::size_t index = 0);

// Writes left/right state families as snapshot files next to `json_file`
// and returns the JSON document referencing them.
json write_schmidt(const std::filesystem::path& dir, const std::string& stem, const SchmidtDecomposition& d);

}  // namespace gapwave::io
