#include <doctest.h>

#include <bit>
#include <charconv>
#include <cstring>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "gapwave/error.hpp"
#include "gapwave/io.hpp"
#include "test_support.hpp"

using namespace gapwave;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("format_double round-trips every finite double it is given") {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<std::uint64_t> bits;
  int checked = 0;
  while (checked < 20000) {
    const double v = std::bit_cast<double>(bits(rng));
    if (!std::isfinite(v)) continue;
    const std::string s = io::format_double(v);
    double back = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(r.ec == std::errc{});
    REQUIRE(std::bit_cast<std::uint64_t>(back) == std::bit_cast<std::uint64_t>(v));
    ++checked;
  }
  for (double v : {0.0, -0.0, 1.0, 0.1, 1e-300, 5e-324, std::numeric_limits<double>::max()}) {
    double back = 0.0;
    const std::string s = io::format_double(v);
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(std::bit_cast<std::uint64_t>(back) == std::bit_cast<std::uint64_t>(v));
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(2.0) == "2");
}

TEST_CASE("gap spectrum CSV has one row per gap with blank pairs when unattributed") {
  GapSpectrum g;
  g.gaps = {-1.5, 0.0, 0.0, 1.5};
  g.clusters = cluster_gaps(g.gaps, 1e-12);
  CHECK(io::gap_spectrum_csv(g) == "lambda,multiplicity,n,m\n-1.5,1,,\n0,2,,\n0,2,,\n1.5,1,,\n");
  g.attributions = {GapPair{0, 1}, GapPair{0, 0}, std::nullopt, GapPair{1, 0}};
  CHECK(io::gap_spectrum_csv(g) == "lambda,multiplicity,n,m\n-1.5,1,0,1\n0,2,0,0\n0,2,,\n1.5,1,1,0\n");
  const auto j = io::to_json(g);
  CHECK(j["attributions"][2].is_null());
  CHECK(j["clusters"].size() == 3);
}

TEST_CASE("match report JSON") {
  MatchReport r;
  r.matched = false;
  r.max_abs_deviation = 1e-9;
  r.pairs = {{0, 0}, {1, 1}};
  r.residuals_a = {3.0};
  const auto j = io::to_json(r);
  CHECK(j["matched"] == false);
  CHECK(j["matched_pairs"] == 2);
  CHECK(j["residuals_a"][0] == 3.0);
  CHECK(j["residuals_b"].empty());
}

TEST_CASE("density and trajectory CSV") {
  const Grid g = make_grid(0.0, 3.0, 2);
  const std::vector<double> d{0.25, 0.5};
  CHECK(io::density_csv(g, d) == "x,density\n1,0.25\n2,0.5\n");
  CHECK_THROWS_AS(io::density_csv(g, std::vector<double>{1.0}), GridMismatch);
  const std::vector<io::TrajectoryRow> rows{{0.0, 1.0, 1.0, 0.0}, {0.5, 1.0, 0.75, -0.25}};
  CHECK(io::trajectory_csv(rows) == "time,norm,overlap_modulus,overlap_phase\n0,1,1,0\n0.5,1,0.75,-0.25\n");
}

TEST_CASE("snapshot files round-trip bit for bit") {
  const auto dir = test::scratch_dir("snapshots");
  std::mt19937_64 rng(72);
  const Grid g = make_grid(-1.0, 2.0, 7);
  std::vector<BipartiteWave> states;
  {
    io::SnapshotWriter w(dir / "b.bin", {g, "bipartite", 7, 7, {}, 0.1, 3});
    for (int k = 0; k < 4; ++k) {
      states.push_back(random_bipartite(g, rng));
      w.append(0.3 * k, states.back());
    }
  }
  const io::SnapshotFile f = io::read_snapshots(dir / "b.bin");
  CHECK(f.meta.grid == g);
  CHECK(f.meta.kind == "bipartite");
  CHECK(f.meta.record_every == 3);
  REQUIRE(f.snapshots.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(f.snapshots[static_cast<std::size_t>(k)] == states[static_cast<std::size_t>(k)].amplitudes);
  CHECK(f.meta.times[2] == 0.3 * 2);
  CHECK(io::load_bipartite(dir / "b.bin", 3).amplitudes == states[3].amplitudes);
  CHECK_THROWS_AS(io::load_bipartite(dir / "b.bin", 4), FormatError);

  // Row-major little-endian layout: entry (0, 1) of the first snapshot follows (0, 0).
  const std::string raw = slurp(dir / "b.bin");
  double re = 0.0;
  std::memcpy(&re, raw.data() + 16, 8);
  CHECK(re == states[0].amplitudes(0, 1).real());

  {
    io::SnapshotWriter w(dir / "o.bin", {g, "one_body", 7, 1, {}, 0.1, 1});
    w.append(0.0, random_wave(g, rng));
  }
  CHECK_THROWS_AS(io::load_bipartite(dir / "o.bin"), FormatError);
}

TEST_CASE("corrupt snapshot files are format errors") {
  const auto dir = test::scratch_dir("corrupt");
  std::mt19937_64 rng(73);
  const Grid g = make_grid(0.0, 1.0, 3);
  {
    io::SnapshotWriter w(dir / "s.bin", {g, "bipartite", 3, 3, {}, 0.1, 1});
    w.append(0.0, random_bipartite(g, rng));
  }
  CHECK_NOTHROW(io::read_snapshots(dir / "s.bin"));
  CHECK_THROWS_AS(io::read_snapshots(dir / "absent.bin"), FormatError);

  std::filesystem::copy_file(dir / "s.bin.json", dir / "t.bin.json");
  { std::ofstream(dir / "t.bin", std::ios::binary) << "short"; }
  CHECK_THROWS_AS(io::read_snapshots(dir / "t.bin"), FormatError);

  std::filesystem::copy_file(dir / "s.bin", dir / "u.bin");
  { std::ofstream(dir / "u.bin.json") << "{ not json"; }
  CHECK_THROWS_AS(io::read_snapshots(dir / "u.bin"), FormatError);

  std::filesystem::copy_file(dir / "s.bin", dir / "v.bin");
  auto j = io::to_json(io::SnapshotMeta{g, "bipartite", 3, 3, {0.0}, 0.1, 1});
  j["kind"] = "tripartite";
  io::write_json(dir / "v.bin.json", j);
  CHECK_THROWS_AS(io::read_snapshots(dir / "v.bin"), FormatError);

  std::filesystem::copy_file(dir / "s.bin", dir / "w.bin");
  std::filesystem::copy_file(dir / "s.bin.json", dir / "w.bin.json");
  {
    std::fstream f(dir / "w.bin", std::ios::binary | std::ios::in | std::ios::out);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    f.write(reinterpret_cast<const char*>(&nan), 8);
  }
  CHECK_THROWS_AS(io::read_snapshots(dir / "w.bin"), FormatError);
}

TEST_CASE("Schmidt families are written as one-body snapshot files") {
  const auto dir = test::scratch_dir("schmidt-io");
  std::mt19937_64 rng(74);
  const Grid g = make_grid(0.0, 1.0, 5);
  const SchmidtDecomposition d = schmidt_decompose(random_bipartite(g, rng));
  const auto j = io::write_schmidt(dir, "s", d);
  CHECK(j["rank"] == 5);
  const io::SnapshotFile left = io::read_snapshots(dir / j["left_states"].get<std::string>());
  CHECK(left.meta.kind == "one_body");
  REQUIRE(left.snapshots.size() == 5);
  CHECK(left.snapshots[2].col(0) == d.left_states[2].values);
  const io::SnapshotFile right = io::read_snapshots(dir / j["right_states"].get<std::string>());
  CHECK(right.snapshots[4].col(0) == d.right_states[4].values);
}

TEST_CASE("write_text creates parent directories") {
  const auto dir = test::scratch_dir("write");
  io::write_text(dir / "a" / "b" / "c.txt", "hello");
  CHECK(slurp(dir / "a" / "b" / "c.txt") == "hello");
}
