#pragma once

// FNS1 checkpoint files.
//
// Layout (all little-endian):
//   bytes 0..3   magic "FNS1"
//   u32          n
//   f64          time
//   3 * n^3 f64  physical samples, component order u1, u2, u3, x1 index fastest

#include "fracns/grid.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace fracns {

class CheckpointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Checkpoint {
    PhysicalField field;
    double time = 0.0;
};

void write_checkpoint(const std::filesystem::path& path, const PhysicalField& field, double time);
/// Throws CheckpointError on a bad magic, unsupported n, or truncated file.
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// The state a run resumes from when it loads `field`: to_spectral followed by
/// removal of the mean mode. The run loop applies the same map at every
/// checkpoint so resumed and uninterrupted trajectories coincide bit for bit.
SpectralField checkpoint_state(const PhysicalField& field);

}  // namespace fracns
