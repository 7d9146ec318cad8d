#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mhdbl/field.hpp"

namespace mhdbl {

/// "MHDB" v1 binary dump: magic, u32 version, u32 grid kind, u32 nx, u32 ny,
/// f64 L, u32 stretching, f64 beta, then nx*ny f64 values with x fastest.
/// All little-endian.
void write_mhdb(const Field& f, const std::filesystem::path& path);
Field read_mhdb(const std::filesystem::path& path, std::string label = {});

struct ManifestEntry {
  double time = 0.0;
  std::string quantity;
  std::string file;
};

/// UTF-8 CSV with header "time,quantity,file"; times are written with full
/// round-trip precision.
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

}  // namespace mhdbl
