#include "lstcn/snapshot.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include "lstcn/error.hpp"
#include "lstcn/number_format.hpp"

namespace lstcn {
namespace {

constexpr std::string_view kMagic = "lstcn-snapshot";

void write_row(std::ostream& out, const Eigen::Ref<const Matrix>& m, Eigen::Index i) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (j) out << ',';
    out << format_double(m(i, j));
  }
  out << '\n';
}

void write_matrix(std::ostream& out, std::string_view name, const Eigen::Ref<const Matrix>& m) {
  out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) write_row(out, m, i);
}

std::string join_doubles(const Eigen::Ref<const RowVector>& v) {
  std::string out;
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    if (j) out += ',';
    out += format_double(v(j));
  }
  return out;
}

RowVector parse_doubles(std::string_view text, std::size_t line) {
  const auto fields = split(text, ',');
  RowVector v(static_cast<Eigen::Index>(fields.size()));
  for (std::size_t j = 0; j < fields.size(); ++j) {
    v(static_cast<Eigen::Index>(j)) = parse_double(fields[j], line);
  }
  return v;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string line;
    if (!std::getline(in_, line)) throw ParseError("unexpected end of snapshot", line_ + 1);
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

Matrix read_matrix(LineReader& reader, std::string_view expected_name, Eigen::Index rows,
                   Eigen::Index cols) {
  const std::string header = reader.next();
  const auto parts = split(header, ' ');
  if (parts.size() != 4 || parts[0] != "matrix" || parts[1] != expected_name) {
    throw ParseError("expected matrix '" + std::string(expected_name) + "'", reader.line());
  }
  if (parse_integer(parts[2], reader.line()) != rows ||
      parse_integer(parts[3], reader.line()) != cols) {
    throw ParseError("matrix '" + std::string(expected_name) + "' has the wrong shape",
                     reader.line());
  }
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const RowVector row = parse_doubles(reader.next(), reader.line());
    if (row.cols() != cols) throw ParseError("matrix row has the wrong width", reader.line());
    m.row(i) = row;
  }
  return m;
}

}  // namespace

void write_snapshot(std::ostream& out, const Snapshot& snapshot) {
  const LstcnModel& model = snapshot.model;
  const StcnWeights& live = model.live_block();
  out << kMagic << ' ' << kSnapshotVersion << '\n';
  out << "N=" << model.width() << '\n';
  for (const auto& [key, value] : to_key_values(snapshot.config)) {
    out << "config." << key << '=' << value << '\n';
  }
  // The activation config held by the model is authoritative.
  out << "activation.lambda=" << format_double(model.config().lambda) << '\n';
  out << "activation.epsilon=" << format_double(model.config().logit_epsilon) << '\n';
  std::string names;
  for (std::size_t i = 0; i < snapshot.variables.size(); ++i) {
    if (i) names += ',';
    names += snapshot.variables[i];
  }
  out << "variables=" << names << '\n';
  out << "norm.min=" << join_doubles(snapshot.normalization.min) << '\n';
  out << "norm.max=" << join_doubles(snapshot.normalization.max) << '\n';
  out << "patches=" << model.patches_seen() << '\n';
  for (const PatchMetrics& p : model.history()) {
    out << "patch=" << p.patch_index << ',' << p.rows << ',' << format_double(p.train_mae) << ','
        << format_double(p.fit_seconds) << '\n';
  }
  write_matrix(out, "w1", live.w1);
  write_matrix(out, "b1", live.b1);
  write_matrix(out, "w2", live.w2);
  write_matrix(out, "b2", live.b2);
  out << "end\n";
}

Snapshot read_snapshot(std::istream& in) {
  LineReader reader(in);
  {
    const std::string magic = reader.next();
    const auto parts = split(magic, ' ');
    if (parts.size() != 2 || parts[0] != kMagic) throw ParseError("not an lstcn snapshot", 1);
    const long long version = parse_integer(parts[1], 1);
    if (version != kSnapshotVersion) {
      throw ParseError("unsupported snapshot version " + std::to_string(version), 1);
    }
  }

  Eigen::Index n = 0;
  PipelineConfig config;
  ActivationConfig activation;
  std::vector<std::string> variables;
  NormalizationParams norm;
  std::optional<long long> patches;
  std::vector<PatchMetrics> history;

  while (!patches || static_cast<long long>(history.size()) < *patches) {
    const std::string line = reader.next();
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", reader.line());
    const std::string_view key = std::string_view(line).substr(0, eq);
    const std::string_view value = std::string_view(line).substr(eq + 1);
    if (key == "N") {
      n = parse_integer(value, reader.line());
    } else if (key.substr(0, 7) == "config.") {
      apply_setting(config, key.substr(7), value);
    } else if (key == "activation.lambda") {
      activation.lambda = parse_double(value, reader.line());
    } else if (key == "activation.epsilon") {
      activation.logit_epsilon = parse_double(value, reader.line());
    } else if (key == "variables") {
      for (const auto name : split(value, ',')) variables.emplace_back(name);
    } else if (key == "norm.min") {
      norm.min = parse_doubles(value, reader.line());
    } else if (key == "norm.max") {
      norm.max = parse_doubles(value, reader.line());
    } else if (key == "patches") {
      patches = parse_integer(value, reader.line());
      if (*patches < 1) throw ParseError("snapshot holds no fitted patch", reader.line());
    } else if (key == "patch") {
      const auto f = split(value, ',');
      if (f.size() != 4) throw ParseError("malformed patch record", reader.line());
      history.push_back({static_cast<std::size_t>(parse_integer(f[0], reader.line())),
                         static_cast<Eigen::Index>(parse_integer(f[1], reader.line())),
                         parse_double(f[2], reader.line()), parse_double(f[3], reader.line())});
    } else {
      throw ParseError("unknown snapshot key '" + std::string(key) + "'", reader.line());
    }
  }
  if (n < 1) throw ParseError("snapshot width N missing");
  const auto m = static_cast<Eigen::Index>(variables.size());
  if (m < 1 || norm.min.cols() != m || norm.max.cols() != m || n != m * config.r) {
    throw ParseError("snapshot metadata is inconsistent");
  }

  StcnWeights live;
  live.w1 = read_matrix(reader, "w1", n, n);
  live.b1 = read_matrix(reader, "b1", 1, n);
  live.w2 = read_matrix(reader, "w2", n, n);
  live.b2 = read_matrix(reader, "b2", 1, n);
  if (reader.next() != "end") throw ParseError("missing snapshot terminator", reader.line());

  config.activation = activation;
  return Snapshot{LstcnModel::restore(std::move(live), activation, std::move(history)), config,
                  std::move(variables), std::move(norm)};
}

void save_snapshot(const std::filesystem::path& path, const Snapshot& snapshot) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  write_snapshot(out, snapshot);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_snapshot(in);
}

}  // namespace lstcn
