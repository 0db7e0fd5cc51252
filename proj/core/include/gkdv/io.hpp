#pragma once

// Field and trajectory export.
//
// CSV: header "t,x,u", one row per grid point and snapshot, 17 significant
// digits.
//
// Binary (little-endian, no padding):
//   char[8]  magic   "GKDVTRJ1"
//   uint64   n_points
//   float64  length
//   uint64   count   (number of snapshots)
//   then count records of (1 + n_points) float64: t, u_0 .. u_{n-1}
// Sample j sits at x_j = -length/2 + j * length / n_points.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "gkdv/solver.hpp"

namespace gkdv {

inline constexpr char kBinaryMagic[8] = {'G', 'K', 'D', 'V', 'T', 'R', 'J', '1'};

struct Snapshot {
  double t;
  Field field;
};

void write_csv(std::ostream& os, std::span<const Snapshot> snapshots);
void write_binary(std::ostream& os, std::span<const Snapshot> snapshots);

/// Reads a binary dump back. Throws IoError on malformed input.
std::vector<Snapshot> read_binary(std::istream& is);

std::vector<Snapshot> snapshots_of(const Trajectory& traj);

/// File helpers; throw IoError if the file cannot be opened.
void write_csv_file(const std::filesystem::path& path, std::span<const Snapshot> snapshots);
void write_binary_file(const std::filesystem::path& path, std::span<const Snapshot> snapshots);
std::vector<Snapshot> read_binary_file(const std::filesystem::path& path);

}  // namespace gkdv
