#include "mhdbl/mhdb.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace mhdbl {

static_assert(std::endian::native == std::endian::little, "MHDB I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'M', 'H', 'D', 'B'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is, const std::filesystem::path& path) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
    throw std::runtime_error("MHDB: truncated header in " + path.string());
  return v;
}

}  // namespace

void write_mhdb(const Field& f, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("MHDB: cannot open " + path.string() + " for writing");
  const Grid& g = f.grid();
  os.write(kMagic, 4);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.kind()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.nx()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.ny()));
  put<double>(os, g.L());
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.stretching()));
  put<double>(os, g.beta());
  os.write(reinterpret_cast<const char*>(f.data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (!os) throw std::runtime_error("MHDB: write failed for " + path.string());
}

Field read_mhdb(const std::filesystem::path& path, std::string label) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("MHDB: cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("MHDB: bad magic in " + path.string());
  auto version = get<std::uint32_t>(is, path);
  if (version != kVersion) throw std::runtime_error("MHDB: unsupported version " + std::to_string(version));
  auto kind = get<std::uint32_t>(is, path);
  auto nx = get<std::uint32_t>(is, path);
  auto ny = get<std::uint32_t>(is, path);
  auto L = get<double>(is, path);
  auto st = get<std::uint32_t>(is, path);
  auto beta = get<double>(is, path);
  if (kind > 1 || st > 1) throw std::runtime_error("MHDB: bad grid kind or stretching code in " + path.string());
  auto grid = std::make_shared<Grid>(static_cast<GridKind>(kind), static_cast<int>(nx), static_cast<int>(ny), L,
                                     static_cast<Stretching>(st), beta);
  std::vector<double> v(grid->size());
  if (!is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double))))
    throw std::runtime_error("MHDB: truncated data in " + path.string());
  if (label.empty()) label = path.stem().string();
  return Field(grid, std::move(v), std::move(label));
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("manifest: cannot open " + path.string());
  os << "time,quantity,file\n";
  os << std::setprecision(17);
  for (const auto& e : entries) os << e.time << ',' << e.quantity << ',' << e.file << '\n';
  if (!os) throw std::runtime_error("manifest: write failed for " + path.string());
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("manifest: cannot open " + path.string());
  std::string line;
  std::getline(is, line);
  if (line != "time,quantity,file") throw std::runtime_error("manifest: bad header in " + path.string());
  std::vector<ManifestEntry> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    ManifestEntry e;
    std::string t;
    if (!std::getline(ls, t, ',') || !std::getline(ls, e.quantity, ',') || !std::getline(ls, e.file))
      throw std::runtime_error("manifest: malformed line '" + line + "'");
    e.time = std::stod(t);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace mhdbl
