#include "gapwave/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <sstream>

#include "gapwave/error.hpp"

namespace gapwave::io {

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, r.ptr};
}

void write_text(const std::filesystem::path& file, const std::string& content) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write '" + file.string() + "'");
  out << content;
  if (!out) throw Error("write failed for '" + file.string() + "'");
}

void write_json(const std::filesystem::path& file, const json& j) { write_text(file, j.dump(2) + "\n"); }

std::string gap_spectrum_csv(const GapSpectrum& g) {
  std::ostringstream s;
  s << "lambda,multiplicity,n,m\n";
  for (std::size_t k = 0; k < g.gaps.size(); ++k) {
    s << format_double(g.gaps[k]) << ',' << g.multiplicity_at(k) << ',';
    if (g.attributed() && g.attributions[k]) s << g.attributions[k]->n << ',' << g.attributions[k]->m;
    else s << ',';
    s << '\n';
  }
  return s.str();
}

json to_json(const GapSpectrum& g) {
  json j;
  j["gaps"] = g.gaps;
  j["cluster_tol"] = g.cluster_tol;
  json clusters = json::array();
  for (const auto& c : g.clusters) clusters.push_back({{"lambda", c.lambda}, {"multiplicity", c.multiplicity}});
  j["clusters"] = clusters;
  if (g.attributed()) {
    json a = json::array();
    for (const auto& p : g.attributions) {
      if (p) a.push_back({p->n, p->m});
      else a.push_back(nullptr);
    }
    j["attributions"] = a;
  }
  return j;
}

json to_json(const MatchReport& r) {
  return {{"matched", r.matched},
          {"max_abs_deviation", r.max_abs_deviation},
          {"matched_pairs", r.pairs.size()},
          {"residuals_a", r.residuals_a},
          {"residuals_b", r.residuals_b}};
}

json to_json(const Grid& g) {
  return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"n_points", g.n_points}, {"dx", g.dx}};
}

std::string density_csv(const Grid& g, std::span<const double> density) {
  if (density.size() != g.n_points) throw GridMismatch("density_csv: length mismatch");
  std::ostringstream s;
  s << "x,density\n";
  for (std::size_t i = 0; i < density.size(); ++i)
    s << format_double(g.site(i)) << ',' << format_double(density[i]) << '\n';
  return s.str();
}

std::string trajectory_csv(std::span<const TrajectoryRow> rows) {
  std::ostringstream s;
  s << "time,norm,overlap_modulus,overlap_phase\n";
  for (const auto& r : rows)
    s << format_double(r.time) << ',' << format_double(r.norm) << ',' << format_double(r.overlap_modulus) << ','
      << format_double(r.overlap_phase) << '\n';
  return s.str();
}

json to_json(const SnapshotMeta& m) {
  return {{"format", "complex128-le-rowmajor"},
          {"grid", to_json(m.grid)},
          {"kind", m.kind},
          {"rows", m.rows},
          {"cols", m.cols},
          {"count", m.times.size()},
          {"times", m.times},
          {"dt", m.dt},
          {"record_every", m.record_every}};
}

SnapshotMeta snapshot_meta_from_json(const json& j) {
  try {
    SnapshotMeta m;
    const auto& g = j.at("grid");
    m.grid = make_grid(g.at("x_min").get<double>(), g.at("x_max").get<double>(),
                       g.at("n_points").get<std::size_t>());
    m.kind = j.at("kind").get<std::string>();
    m.rows = j.at("rows").get<std::size_t>();
    m.cols = j.at("cols").get<std::size_t>();
    m.times = j.at("times").get<std::vector<double>>();
    m.dt = j.value("dt", 0.0);
    m.record_every = j.value("record_every", std::size_t{0});
    if (m.kind != "bipartite" && m.kind != "one_body") throw FormatError("unknown snapshot kind '" + m.kind + "'");
    if (m.rows != m.grid.n_points) throw FormatError("snapshot rows do not match the grid");
    if (j.at("count").get<std::size_t>() != m.times.size()) throw FormatError("snapshot count/times disagree");
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("snapshot sidecar: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("snapshot sidecar: ") + e.what());
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& bin) {
  std::filesystem::path p = bin;
  p += ".json";
  return p;
}

SnapshotWriter::SnapshotWriter(std::filesystem::path bin, SnapshotMeta meta)
    : bin_(std::move(bin)), meta_(std::move(meta)) {
  meta_.times.clear();
  if (bin_.has_parent_path()) std::filesystem::create_directories(bin_.parent_path());
  out_.open(bin_, std::ios::binary);
  if (!out_) throw Error("cannot write '" + bin_.string() + "'");
}

void SnapshotWriter::put(const cd& v) {
  for (double part : {v.real(), v.imag()}) {
    const auto bits = std::bit_cast<std::uint64_t>(part);
    char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
    out_.write(bytes, 8);
  }
}

void SnapshotWriter::append(double t, const WaveFunction& psi) {
  if (meta_.kind != "one_body" || meta_.cols != 1) throw InvalidArgument("SnapshotWriter: not a one-body file");
  require_same_grid(meta_.grid, psi.grid, "SnapshotWriter::append");
  for (Eigen::Index i = 0; i < psi.values.size(); ++i) put(psi.values[i]);
  meta_.times.push_back(t);
}

void SnapshotWriter::append(double t, const BipartiteWave& psi) {
  if (meta_.kind != "bipartite") throw InvalidArgument("SnapshotWriter: not a bipartite file");
  require_same_grid(meta_.grid, psi.grid, "SnapshotWriter::append");
  for (Eigen::Index i = 0; i < psi.amplitudes.rows(); ++i)
    for (Eigen::Index j = 0; j < psi.amplitudes.cols(); ++j) put(psi.amplitudes(i, j));
  meta_.times.push_back(t);
}

void SnapshotWriter::finish() {
  if (finished_) return;
  finished_ = true;
  out_.close();
  write_json(sidecar_path(bin_), to_json(meta_));
}

SnapshotWriter::~SnapshotWriter() {
  try {
    finish();
  } catch (...) {
  }
}

SnapshotFile read_snapshots(const std::filesystem::path& bin) {
  std::ifstream side(sidecar_path(bin));
  if (!side) throw FormatError("missing snapshot sidecar '" + sidecar_path(bin).string() + "'");
  json j;
  try {
    side >> j;
  } catch (const json::exception& e) {
    throw FormatError("snapshot sidecar is not JSON: " + std::string(e.what()));
  }
  SnapshotFile f;
  f.meta = snapshot_meta_from_json(j);
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw FormatError("cannot open snapshot file '" + bin.string() + "'");
  const std::size_t per = f.meta.rows * f.meta.cols;
  const auto expected = static_cast<std::uintmax_t>(per * f.meta.times.size() * 16);
  if (std::filesystem::file_size(bin) != expected)
    throw FormatError("snapshot file '" + bin.string() + "' has the wrong size for its sidecar");
  auto get = [&]() {
    double parts[2];
    for (double& part : parts) {
      unsigned char bytes[8];
      in.read(reinterpret_cast<char*>(bytes), 8);
      std::uint64_t bits = 0;
      for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
      part = std::bit_cast<double>(bits);
    }
    return cd(parts[0], parts[1]);
  };
  for (std::size_t s = 0; s < f.meta.times.size(); ++s) {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(f.meta.rows), static_cast<Eigen::Index>(f.meta.cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index k = 0; k < m.cols(); ++k) m(i, k) = get();
    if (!m.allFinite()) throw FormatError("snapshot " + std::to_string(s) + " has non-finite entries");
    f.snapshots.push_back(std::move(m));
  }
  return f;
}

BipartiteWave load_bipartite(const std::filesystem::path& bin, std::size_t index) {
  SnapshotFile f = read_snapshots(bin);
  if (f.meta.kind != "bipartite") throw FormatError("'" + bin.string() + "' does not hold bipartite states");
  if (index >= f.snapshots.size())
    throw FormatError("snapshot index " + std::to_string(index) + " out of range in '" + bin.string() + "'");
  return {f.meta.grid, std::move(f.snapshots[index])};
}

json write_schmidt(const std::filesystem::path& dir, const std::string& stem, const SchmidtDecomposition& d) {
  const std::string left_name = stem + "_left_states.bin";
  const std::string right_name = stem + "_right_states.bin";
  SnapshotMeta meta;
  meta.grid = d.grid;
  meta.kind = "one_body";
  meta.rows = d.grid.n_points;
  meta.cols = 1;
  {
    SnapshotWriter left(dir / left_name, meta);
    SnapshotWriter right(dir / right_name, meta);
    for (std::size_t k = 0; k < d.rank(); ++k) {
      left.append(static_cast<double>(k), d.left_states[k]);
      right.append(static_cast<double>(k), d.right_states[k]);
    }
  }
  return {{"coefficients", d.coefficients},
          {"rank", d.rank()},
          {"right_states_conjugated_on_reconstruction", true},
          {"left_states", left_name},
          {"right_states", right_name}};
}

}  // namespace gapwave::io
