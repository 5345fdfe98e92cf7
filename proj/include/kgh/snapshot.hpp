#pragma once

// Binary field snapshots.
//
// Layout (all little-endian):
//   bytes 0..3   magic "KGH1"
//   u32          n
//   f64          box length L
//   f64          gamma
//   f64          time stamp t
//   u8           kind (0 = position, 1 = velocity)
//   f64 * n^3    values, row-major, x fastest
//
// Truncated or wrong-magic files are rejected with a diagnostic.

#include <cstdint>
#include <string>

#include "kgh/field.hpp"

namespace kgh {

enum class SnapshotKind : std::uint8_t { position = 0, velocity = 1 };

void write_snapshot(const std::string& path, const RealField& f, double t, SnapshotKind kind);

struct Snapshot {
  RealField field;
  double t;
  SnapshotKind kind;
};

Snapshot read_snapshot(const std::string& path);

}  // namespace kgh
