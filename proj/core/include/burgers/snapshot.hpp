#pragma once

#include "burgers/field.hpp"

#include <filesystem>
#include <iosfwd>

namespace burgers {

/// Binary snapshot layout, all little-endian:
///   bytes 0..3   magic "BRG1"
///   bytes 4..7   u32 N
///   bytes 8..15  f64 time
///   then N f64 physical samples.
struct Snapshot {
    double time = 0.0;
    /// Samples exactly as stored, with no mean projection applied.
    std::vector<double> samples;

    Grid grid() const { return Grid(samples.size()); }
    Field field() const { return Field::from_samples(grid(), samples); }
};

void write_snapshot(std::ostream& out, const Field& field, double time);
void write_snapshot(const std::filesystem::path& path, const Field& field, double time);

/// Throws std::runtime_error on a bad magic, truncated payload or invalid N.
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

/// One "x,value" line per grid point, full precision.
void write_text(std::ostream& out, const Field& field);
void write_text(const std::filesystem::path& path, const Field& field);

}  // namespace burgers
