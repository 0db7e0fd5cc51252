#include "gkdv/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "gkdv/errors.hpp"

namespace gkdv {

static_assert(std::endian::native == std::endian::little, "binary dump assumes a little-endian host");

namespace {

template <class T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T value{};
  if (!is.read(reinterpret_cast<char*>(&value), sizeof(T))) throw IoError("read_binary: truncated input");
  return value;
}

void require_common_grid(std::span<const Snapshot> snapshots) {
  for (const auto& s : snapshots) {
    if (!(s.field.grid() == snapshots.front().field.grid())) {
      throw InvalidArgument("export: snapshots must share one grid");
    }
  }
}

}  // namespace

std::vector<Snapshot> snapshots_of(const Trajectory& traj) {
  std::vector<Snapshot> out;
  out.reserve(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) out.push_back({traj.times[i], traj.states[i]});
  return out;
}

void write_csv(std::ostream& os, std::span<const Snapshot> snapshots) {
  require_common_grid(snapshots);
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << "t,x,u\n" << std::setprecision(17);
  for (const auto& s : snapshots) {
    const Grid& g = s.field.grid();
    for (std::size_t j = 0; j < g.n_points(); ++j) os << s.t << ',' << g.point(j) << ',' << s.field[j] << '\n';
  }
  os.flags(old_flags);
  os.precision(old_prec);
}

void write_binary(std::ostream& os, std::span<const Snapshot> snapshots) {
  if (snapshots.empty()) throw InvalidArgument("write_binary: nothing to write");
  require_common_grid(snapshots);
  const Grid& g = snapshots.front().field.grid();
  os.write(kBinaryMagic, sizeof(kBinaryMagic));
  put<std::uint64_t>(os, g.n_points());
  put<double>(os, g.length());
  put<std::uint64_t>(os, snapshots.size());
  for (const auto& s : snapshots) {
    put<double>(os, s.t);
    os.write(reinterpret_cast<const char*>(s.field.samples().data()),
             static_cast<std::streamsize>(s.field.size() * sizeof(double)));
  }
}

std::vector<Snapshot> read_binary(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kBinaryMagic, sizeof(magic)) != 0) {
    throw IoError("read_binary: bad magic");
  }
  const auto n = get<std::uint64_t>(is);
  const auto length = get<double>(is);
  const auto count = get<std::uint64_t>(is);
  Grid grid = [&] {
    try {
      return make_grid(n, length);
    } catch (const InvalidArgument& e) {
      throw IoError(std::string("read_binary: bad header: ") + e.what());
    }
  }();
  std::vector<Snapshot> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double t = get<double>(is);
    std::vector<double> samples(n);
    if (!is.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(n * sizeof(double)))) {
      throw IoError("read_binary: truncated input");
    }
    out.push_back({t, Field(grid, std::move(samples))});
  }
  return out;
}

void write_csv_file(const std::filesystem::path& path, std::span<const Snapshot> snapshots) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(os, snapshots);
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

void write_binary_file(const std::filesystem::path& path, std::span<const Snapshot> snapshots) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_binary(os, snapshots);
  if (!os) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<Snapshot> read_binary_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  return read_binary(is);
}

}  // namespace gkdv
