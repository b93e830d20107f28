#pragma once

#include <cstdint>
#include <filesystem>

#include "kss/field.hpp"

namespace kss {

/// Binary snapshot layout (all integers and floats little-endian):
///
///   offset  size  content
///        0     4  magic "KSSF"
///        4     4  u32 format version (1)
///        8     4  u32 dimension (2 or 3)
///       12     4  u32 reserved (0)
///       16    24  u64 cells per axis x3 (inactive axis = 1)
///       40     4  u32 field kind
///       44     4  u32 reserved (0)
///       48     8  f64 snapshot time
///       56     8  reserved (0)
///       64     -  f64 payload, row-major, last axis fastest
///
/// Velocity snapshots store the face components one after the other in axis
/// order; component d has cells+1 entries along axis d.
enum class SnapshotKind : std::uint32_t { density = 1, signal = 2, pressure = 3, velocity = 4 };

inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 64;

void write_snapshot(const std::filesystem::path& path, const ScalarField& s, SnapshotKind kind,
                    double time);
void write_snapshot(const std::filesystem::path& path, const VectorField& v, double time);

struct SnapshotHeader {
    std::uint32_t version = 0;
    std::uint32_t dim = 0;
    std::array<std::uint64_t, 3> cells{};
    SnapshotKind kind = SnapshotKind::density;
    double time = 0.0;
};

SnapshotHeader read_snapshot_header(const std::filesystem::path& path);

/// Reads a scalar snapshot back onto `grid` (which must match the header).
ScalarField read_scalar_snapshot(const std::filesystem::path& path, const Grid& grid,
                                 ScalarBc bc = ScalarBc::neumann_zero);
VectorField read_vector_snapshot(const std::filesystem::path& path, const Grid& grid);

}  // namespace kss
