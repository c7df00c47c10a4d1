#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nv2d/grid.hpp"

namespace nv2d {

// Binary snapshot format: magic bytes "NV2D", format version u32, the grid
// extents as u32 (N, M for a field; N_x1, N_x2, N_p1, N_p2 for an f slice),
// then row-major little-endian IEEE f64 samples.
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const Grid2D& g);
void write_snapshot(const std::string& path, const Grid4D& f);

struct SnapshotData {
    std::vector<std::uint32_t> extents;
    std::vector<double> samples;
};
SnapshotData read_snapshot(const std::string& path);

} // namespace nv2d
