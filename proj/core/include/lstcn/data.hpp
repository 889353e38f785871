#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lstcn/linalg.hpp"

namespace lstcn {

// Seconds since the Unix epoch (UTC).
using Timestamp = std::int64_t;

/// Multivariate series stored with variables as rows and time as columns.
/// Raw series may hold NaN for missing values; clean() removes them.
struct TimeSeries {
  std::vector<std::string> variables;
  std::vector<Timestamp> timestamps;
  Matrix values;  // M x T

  Eigen::Index num_variables() const { return values.rows(); }
  Eigen::Index length() const { return values.cols(); }

  // Columns [begin, end) as a new series.
  TimeSeries slice(Eigen::Index begin, Eigen::Index end) const;
  // Keeps only the named variables, in the given order.
  TimeSeries select(const std::vector<std::string>& names) const;
};

// Throws unless names/timestamps/values agree in size and M, T >= 1.
void validate_shape(const TimeSeries& series);

/// Parses a CSV with a header row naming a `timestamp` column plus one
/// numeric column per variable. Timestamps are ISO-8601
/// (YYYY-MM-DD[T ]hh:mm[:ss][Z|+hh:mm]) or integer epoch seconds. Empty
/// fields are read as missing (NaN). Rows are kept in file order.
TimeSeries load_csv(const std::filesystem::path& path);
TimeSeries parse_csv(std::istream& in);

Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);  // ISO-8601, UTC, "Z" suffix

/// Sorts by time, drops duplicate timestamps (first occurrence in file order
/// wins), inserts every missing point of the regular grid and imputes values:
/// interior gaps are linearly interpolated, a leading gap is back-filled and
/// a trailing gap forward-filled. Timestamps off the grid anchored at the
/// first timestamp are rejected.
TimeSeries clean(const TimeSeries& raw, Timestamp expected_interval);

struct NormalizationParams {
  RowVector min;
  RowVector max;
};

// Per-variable range over columns [0, split_end).
NormalizationParams normalize_fit(const TimeSeries& series, Eigen::Index split_end);
// Affine map of the fitted range onto [0, 1], clamped. Degenerate ranges map to 0.
TimeSeries normalize_apply(const TimeSeries& series, const NormalizationParams& params);
// Inverse of the affine part; `values` is M x T like TimeSeries::values.
Matrix normalize_invert(const Eigen::Ref<const Matrix>& values, const NormalizationParams& params);

// Trailing moving average of width w; the first w-1 points average what is available.
TimeSeries moving_average(const TimeSeries& series, Eigen::Index w);

/// Flattened (input, target) window pairs.
///
/// Anchor t_q = r + q * stride. Row q of `inputs` holds columns
/// [t_q - r, t_q) and row q of `targets` columns [t_q, t_q + l), each
/// flattened time-major: all M variables of the earliest step first.
struct WindowSet {
  Matrix inputs;   // Q x (M * r)
  Matrix targets;  // Q x (M * l)
  Eigen::Index num_variables = 0;
  Eigen::Index r = 0;
  Eigen::Index l = 0;
  Eigen::Index stride = 1;

  Eigen::Index size() const { return inputs.rows(); }
};

// floor((T - r - l) / stride) + 1, or 0 when T < r + l.
Eigen::Index window_count(Eigen::Index length, Eigen::Index r, Eigen::Index l, Eigen::Index stride);

WindowSet make_windows(const TimeSeries& series, Eigen::Index r, Eigen::Index l,
                       Eigen::Index stride);

// Inverse of the time-major flattening: a 1 x (M * steps) row back to M x steps.
Matrix unflatten(const Eigen::Ref<const RowVector>& row, Eigen::Index num_variables);

struct TimePatch {
  Matrix p1;
  Matrix p2;
  std::size_t index = 0;

  Eigen::Index rows() const { return p1.rows(); }
  Eigen::Index width() const { return p1.cols(); }
};

// Consecutive groups of c rows; the last patch may be shorter. Requires r == l.
std::vector<TimePatch> partition(const WindowSet& windows, Eigen::Index c);

// All windows as a single patch (used for the warm-up fit and for evaluation).
TimePatch as_patch(const WindowSet& windows);

/// Prepared-window export: a small `key=value` metadata header followed by
/// the Q x (M (r + l)) flattened matrix, one comma-separated row per window.
/// Numbers use the shortest round-trip representation, so reading the file
/// back reproduces every entry bit for bit.
struct PreparedWindows {
  std::vector<std::string> variables;
  WindowSet windows;
};

void write_prepared(const std::filesystem::path& path, const PreparedWindows& prepared);
PreparedWindows read_prepared(const std::filesystem::path& path);

}  // namespace lstcn
