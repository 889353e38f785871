#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lstcn/config.hpp"
#include "lstcn/data.hpp"
#include "lstcn/model.hpp"

namespace lstcn {

/// Everything needed to forecast from raw data: the trained model, the
/// configuration it was trained with, and the normalization it expects.
///
/// Stored as versioned text: a `lstcn-snapshot 1` line, `key=value`
/// metadata, one `patch=` line per fitted patch and the four live-block
/// matrices (w1, b1, w2, b2). Matrix entries use shortest round-trip
/// formatting, so a reload reproduces them bit for bit.
struct Snapshot {
  LstcnModel model;
  PipelineConfig config;
  std::vector<std::string> variables;
  NormalizationParams normalization;
};

inline constexpr int kSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const Snapshot& snapshot);
Snapshot read_snapshot(std::istream& in);

void save_snapshot(const std::filesystem::path& path, const Snapshot& snapshot);
Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace lstcn
