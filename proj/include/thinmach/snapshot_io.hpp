#pragma once

#include <filesystem>
#include <string>

#include "thinmach/compressible.hpp"
#include "thinmach/pressure.hpp"

namespace thinmach {

/// Metadata written next to a snapshot binary as JSON.
struct SnapshotMeta {
  double time = 0.0;
  double epsilon = 1.0;
  double delta = 1.0;
  std::string law_name;
  double gamma = 2.0;
  double law_coefficient = 1.0;
  double rho_tilde = 1.0;
  std::string scheme;
  int scheme_version = 1;
};

/// Little-endian binary: "THNMSNP1", u32 version (1), u32 component count (4), u64 nx, ny, nz,
/// then rho, m1, m2, m3 as f64 blocks in storage order (x3 fastest). The sidecar `<path>.json`
/// holds the metadata and the grid.
void write_snapshot(const std::filesystem::path& path, const FluidState3D& state, const SnapshotMeta& meta);

struct LoadedSnapshot {
  FluidState3D state;
  SnapshotMeta meta;
};

/// Reads a snapshot and its sidecar; ErrorKind::io on malformed files.
LoadedSnapshot read_snapshot(const std::filesystem::path& path);

}  // namespace thinmach
