#include "lstcn/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "lstcn/error.hpp"
#include "lstcn/number_format.hpp"

namespace lstcn {

void validate_shape(const TimeSeries& series) {
  const auto m = series.values.rows();
  const auto t = series.values.cols();
  if (m < 1 || t < 1) throw ValidationError("time series must have M >= 1 and T >= 1");
  if (static_cast<Eigen::Index>(series.variables.size()) != m) {
    throw ShapeError("time series has " + std::to_string(series.variables.size()) +
                     " variable names for " + std::to_string(m) + " rows");
  }
  if (static_cast<Eigen::Index>(series.timestamps.size()) != t) {
    throw ShapeError("time series has " + std::to_string(series.timestamps.size()) +
                     " timestamps for " + std::to_string(t) + " columns");
  }
}

TimeSeries TimeSeries::slice(Eigen::Index begin, Eigen::Index end) const {
  if (begin < 0 || end > length() || begin > end) {
    throw ValidationError("slice [" + std::to_string(begin) + ", " + std::to_string(end) +
                          ") out of range for length " + std::to_string(length()));
  }
  TimeSeries out;
  out.variables = variables;
  out.timestamps.assign(timestamps.begin() + begin, timestamps.begin() + end);
  out.values = values.middleCols(begin, end - begin);
  return out;
}

TimeSeries TimeSeries::select(const std::vector<std::string>& names) const {
  TimeSeries out;
  out.timestamps = timestamps;
  out.values.resize(static_cast<Eigen::Index>(names.size()), length());
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto it = std::find(variables.begin(), variables.end(), names[i]);
    if (it == variables.end()) throw ValidationError("unknown variable '" + names[i] + "'");
    out.values.row(static_cast<Eigen::Index>(i)) = values.row(it - variables.begin());
    out.variables.push_back(names[i]);
  }
  return out;
}

namespace {

// Fills NaN runs of one variable in place. Returns false if every entry is NaN.
bool impute(Eigen::Ref<RowVector> row) {
  const Eigen::Index t = row.cols();
  Eigen::Index prev = -1;  // last observed index
  for (Eigen::Index i = 0; i <= t; ++i) {
    if (i < t && std::isnan(row(i))) continue;
    const Eigen::Index gap_begin = prev + 1;
    if (i > gap_begin) {
      if (prev < 0 && i == t) return false;
      if (prev < 0) {
        row.segment(0, i).setConstant(row(i));
      } else if (i == t) {
        row.segment(gap_begin, t - gap_begin).setConstant(row(prev));
      } else {
        const double a = row(prev);
        const double b = row(i);
        const double span = static_cast<double>(i - prev);
        for (Eigen::Index k = gap_begin; k < i; ++k) {
          row(k) = a + (b - a) * static_cast<double>(k - prev) / span;
        }
      }
    }
    prev = i;
  }
  return true;
}

}  // namespace

TimeSeries clean(const TimeSeries& raw, Timestamp expected_interval) {
  if (expected_interval <= 0) throw ValidationError("expected interval must be > 0");
  validate_shape(raw);

  const auto t = raw.length();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(t));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return raw.timestamps[static_cast<std::size_t>(a)] < raw.timestamps[static_cast<std::size_t>(b)];
  });

  const Timestamp first = raw.timestamps[static_cast<std::size_t>(order.front())];
  const Timestamp last = raw.timestamps[static_cast<std::size_t>(order.back())];
  const Eigen::Index grid_len = static_cast<Eigen::Index>((last - first) / expected_interval) + 1;

  TimeSeries out;
  out.variables = raw.variables;
  out.timestamps.resize(static_cast<std::size_t>(grid_len));
  for (Eigen::Index k = 0; k < grid_len; ++k) {
    out.timestamps[static_cast<std::size_t>(k)] = first + k * expected_interval;
  }
  out.values = Matrix::Constant(raw.num_variables(), grid_len,
                                std::numeric_limits<double>::quiet_NaN());

  Timestamp previous = std::numeric_limits<Timestamp>::min();
  for (const Eigen::Index src : order) {
    const Timestamp ts = raw.timestamps[static_cast<std::size_t>(src)];
    if (ts == previous) continue;  // duplicate; stable sort keeps the first occurrence
    previous = ts;
    if ((ts - first) % expected_interval != 0) {
      throw ValidationError("timestamp " + format_timestamp(ts) +
                            " is not on the sampling grid starting at " + format_timestamp(first));
    }
    out.values.col((ts - first) / expected_interval) = raw.values.col(src);
  }

  for (Eigen::Index v = 0; v < out.num_variables(); ++v) {
    if (!impute(out.values.row(v))) {
      throw ValidationError("variable '" + out.variables[static_cast<std::size_t>(v)] +
                            "' has no observed values");
    }
  }
  return out;
}

NormalizationParams normalize_fit(const TimeSeries& series, Eigen::Index split_end) {
  if (split_end < 1 || split_end > series.length()) {
    throw ValidationError("normalization split end " + std::to_string(split_end) +
                          " outside [1, " + std::to_string(series.length()) + "]");
  }
  const auto fit = series.values.leftCols(split_end);
  require_finite(fit, "normalization fit range");
  NormalizationParams params;
  params.min = fit.rowwise().minCoeff().transpose();
  params.max = fit.rowwise().maxCoeff().transpose();
  return params;
}

TimeSeries normalize_apply(const TimeSeries& series, const NormalizationParams& params) {
  if (params.min.cols() != series.num_variables() || params.max.cols() != series.num_variables()) {
    throw ShapeError("normalization parameters do not match the number of variables");
  }
  TimeSeries out = series;
  for (Eigen::Index v = 0; v < series.num_variables(); ++v) {
    const double lo = params.min(v);
    const double range = params.max(v) - lo;
    if (!(range > 0.0)) {
      out.values.row(v).setZero();
      continue;
    }
    out.values.row(v) = ((series.values.row(v).array() - lo) / range).min(1.0).max(0.0);
  }
  return out;
}

Matrix normalize_invert(const Eigen::Ref<const Matrix>& values, const NormalizationParams& params) {
  if (params.min.cols() != values.rows() || params.max.cols() != values.rows()) {
    throw ShapeError("normalization parameters do not match the number of variables");
  }
  Matrix out(values.rows(), values.cols());
  for (Eigen::Index v = 0; v < values.rows(); ++v) {
    const double lo = params.min(v);
    const double range = params.max(v) - lo;
    out.row(v) = (range > 0.0) ? RowVector(values.row(v).array() * range + lo)
                               : RowVector::Constant(values.cols(), lo);
  }
  return out;
}

TimeSeries moving_average(const TimeSeries& series, Eigen::Index w) {
  if (w < 1) throw ValidationError("moving average window must be >= 1");
  TimeSeries out = series;
  const Eigen::Index t = series.length();
  for (Eigen::Index v = 0; v < series.num_variables(); ++v) {
    const auto row = series.values.row(v);
    for (Eigen::Index i = 0; i < t; ++i) {
      const Eigen::Index begin = std::max<Eigen::Index>(0, i - w + 1);
      out.values(v, i) = row.segment(begin, i - begin + 1).mean();
    }
  }
  return out;
}

Eigen::Index window_count(Eigen::Index length, Eigen::Index r, Eigen::Index l,
                          Eigen::Index stride) {
  if (r < 1 || l < 1 || stride < 1) throw ValidationError("r, l and stride must be >= 1");
  if (length < r + l) return 0;
  return (length - r - l) / stride + 1;
}

WindowSet make_windows(const TimeSeries& series, Eigen::Index r, Eigen::Index l,
                       Eigen::Index stride) {
  const Eigen::Index q = window_count(series.length(), r, l, stride);
  const Eigen::Index m = series.num_variables();
  WindowSet ws;
  ws.num_variables = m;
  ws.r = r;
  ws.l = l;
  ws.stride = stride;
  ws.inputs.resize(q, m * r);
  ws.targets.resize(q, m * l);
  for (Eigen::Index i = 0; i < q; ++i) {
    const Eigen::Index anchor = r + i * stride;
    for (Eigen::Index s = 0; s < r; ++s) {
      ws.inputs.row(i).segment(s * m, m) = series.values.col(anchor - r + s).transpose();
    }
    for (Eigen::Index s = 0; s < l; ++s) {
      ws.targets.row(i).segment(s * m, m) = series.values.col(anchor + s).transpose();
    }
  }
  return ws;
}

Matrix unflatten(const Eigen::Ref<const RowVector>& row, Eigen::Index num_variables) {
  if (num_variables < 1 || row.cols() % num_variables != 0) {
    throw ShapeError("row width " + std::to_string(row.cols()) + " is not a multiple of " +
                     std::to_string(num_variables));
  }
  const Eigen::Index steps = row.cols() / num_variables;
  Matrix out(num_variables, steps);
  for (Eigen::Index s = 0; s < steps; ++s) {
    out.col(s) = row.segment(s * num_variables, num_variables).transpose();
  }
  return out;
}

std::vector<TimePatch> partition(const WindowSet& windows, Eigen::Index c) {
  if (c < 1) throw ValidationError("patch size must be >= 1");
  if (windows.inputs.cols() != windows.targets.cols()) {
    throw ShapeError("patches need equal input and output widths (r == l)");
  }
  std::vector<TimePatch> patches;
  const Eigen::Index q = windows.size();
  for (Eigen::Index begin = 0; begin < q; begin += c) {
    const Eigen::Index rows = std::min(c, q - begin);
    TimePatch patch;
    patch.p1 = windows.inputs.middleRows(begin, rows);
    patch.p2 = windows.targets.middleRows(begin, rows);
    patch.index = patches.size();
    patches.push_back(std::move(patch));
  }
  return patches;
}

TimePatch as_patch(const WindowSet& windows) {
  if (windows.inputs.cols() != windows.targets.cols()) {
    throw ShapeError("patches need equal input and output widths (r == l)");
  }
  return TimePatch{windows.inputs, windows.targets, 0};
}

namespace {

constexpr std::string_view kPreparedMagic = "# lstcn-prepared v1";

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ',';
    out += names[i];
  }
  return out;
}

}  // namespace

void write_prepared(const std::filesystem::path& path, const PreparedWindows& prepared) {
  const WindowSet& ws = prepared.windows;
  if (static_cast<Eigen::Index>(prepared.variables.size()) != ws.num_variables) {
    throw ShapeError("prepared export: variable names do not match M");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << kPreparedMagic << '\n'
      << "M=" << ws.num_variables << '\n'
      << "R=" << ws.r << '\n'
      << "L=" << ws.l << '\n'
      << "stride=" << ws.stride << '\n'
      << "Q=" << ws.size() << '\n'
      << "variables=" << join(prepared.variables) << '\n'
      << "---\n";
  for (Eigen::Index i = 0; i < ws.size(); ++i) {
    const Eigen::Index width_in = ws.inputs.cols();
    const Eigen::Index width = width_in + ws.targets.cols();
    for (Eigen::Index j = 0; j < width; ++j) {
      if (j) out << ',';
      out << format_double(j < width_in ? ws.inputs(i, j) : ws.targets(i, j - width_in));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

PreparedWindows read_prepared(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line != kPreparedMagic) {
    throw ParseError("not a prepared-window file", 1);
  }
  std::map<std::string, std::string, std::less<>> meta;
  while (std::getline(in, line)) {
    ++line_no;
    if (line == "---") break;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  const auto get = [&](std::string_view key) -> const std::string& {
    const auto it = meta.find(key);
    if (it == meta.end()) throw ParseError("missing metadata key '" + std::string(key) + "'");
    return it->second;
  };

  PreparedWindows prepared;
  WindowSet& ws = prepared.windows;
  ws.num_variables = parse_integer(get("M"));
  ws.r = parse_integer(get("R"));
  ws.l = parse_integer(get("L"));
  ws.stride = parse_integer(get("stride"));
  const Eigen::Index q = parse_integer(get("Q"));
  for (const auto name : split(get("variables"), ',')) prepared.variables.emplace_back(name);
  if (ws.num_variables < 1 || ws.r < 1 || ws.l < 1 || ws.stride < 1 || q < 0 ||
      static_cast<Eigen::Index>(prepared.variables.size()) != ws.num_variables) {
    throw ParseError("inconsistent prepared-window metadata");
  }

  const Eigen::Index width_in = ws.num_variables * ws.r;
  const Eigen::Index width_out = ws.num_variables * ws.l;
  ws.inputs.resize(q, width_in);
  ws.targets.resize(q, width_out);
  for (Eigen::Index i = 0; i < q; ++i) {
    if (!std::getline(in, line)) throw ParseError("expected " + std::to_string(q) + " rows");
    ++line_no;
    const auto fields = split(line, ',');
    if (static_cast<Eigen::Index>(fields.size()) != width_in + width_out) {
      throw ParseError("row has " + std::to_string(fields.size()) + " fields", line_no);
    }
    for (Eigen::Index j = 0; j < width_in + width_out; ++j) {
      const double v = parse_double(fields[static_cast<std::size_t>(j)], line_no);
      if (j < width_in) ws.inputs(i, j) = v; else ws.targets(i, j - width_in) = v;
    }
  }
  return prepared;
}

}  // namespace lstcn
