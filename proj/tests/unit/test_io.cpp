#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "gkdv/errors.hpp"
#include "gkdv/io.hpp"

using namespace gkdv;

namespace {

std::vector<Snapshot> sample_snapshots() {
  const Grid g = make_grid(16, 3.0);
  return {{0.0, Field::from_function(g, [](double x) { return std::sin(x) / 3.0; })},
          {0.125, Field::from_function(g, [](double x) { return std::exp(x) * 1e-7; })}};
}

}  // namespace

TEST(Csv, HeaderAndFullPrecision) {
  std::ostringstream os;
  const auto snaps = sample_snapshots();
  write_csv(os, snaps);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,x,u");
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string t, x, u;
    std::getline(row, t, ',');
    std::getline(row, x, ',');
    std::getline(row, u, ',');
    const auto& s = snaps[static_cast<std::size_t>(rows / 16)];
    const std::size_t j = static_cast<std::size_t>(rows % 16);
    EXPECT_EQ(std::stod(t), s.t);
    EXPECT_EQ(std::stod(x), s.field.grid().point(j));
    EXPECT_EQ(std::stod(u), s.field[j]);  // 17 digits round-trip exactly
    ++rows;
  }
  EXPECT_EQ(rows, 32);
}

TEST(Binary, RoundTripIsBitExact) {
  std::stringstream buf;
  const auto snaps = sample_snapshots();
  write_binary(buf, snaps);
  EXPECT_EQ(buf.str().size(), 8u + 8 + 8 + 8 + 2 * 17 * 8);
  EXPECT_EQ(buf.str().substr(0, 8), "GKDVTRJ1");
  const auto back = read_binary(buf);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].t, snaps[i].t);
    EXPECT_EQ(back[i].field.grid().length(), 3.0);
    for (std::size_t j = 0; j < 16; ++j) EXPECT_EQ(back[i].field[j], snaps[i].field[j]);
  }
}

TEST(Binary, MalformedInputIsAnIoError) {
  std::stringstream bad_magic("NOTMAGIC and some more bytes here............");
  EXPECT_THROW(read_binary(bad_magic), IoError);
  std::stringstream buf;
  write_binary(buf, sample_snapshots());
  std::stringstream truncated(buf.str().substr(0, buf.str().size() - 5));
  EXPECT_THROW(read_binary(truncated), IoError);
}

TEST(Files, MissingPathsRaiseIoError) {
  EXPECT_THROW(read_binary_file("/nonexistent/traj.bin"), IoError);
  EXPECT_THROW(write_csv_file("/nonexistent/dir/out.csv", sample_snapshots()), IoError);
}

TEST(Files, BinaryFileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "gkdv_io_test.bin";
  write_binary_file(path, sample_snapshots());
  EXPECT_EQ(read_binary_file(path).size(), 2u);
  std::filesystem::remove(path);
}

TEST(Snapshots, FromTrajectory) {
  const Grid g = make_grid(32, 10.0);
  SolverConfig cfg;
  cfg.dt = 0.1;
  cfg.t_end = 0.4;
  cfg.snapshot_every = 2;
  const Trajectory tr = evolve(Field(g), kdv_model(), DispersionParams({0.1}), cfg);
  const auto snaps = snapshots_of(tr);
  ASSERT_EQ(snaps.size(), 3u);
  EXPECT_DOUBLE_EQ(snaps[1].t, 0.2);
}
