#include "ogflow/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace ogflow::io {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw IoError("could not format value");
  return std::string(buf.data(), end);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

double parse_double(const std::string& text, std::size_t row) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first < last && *first == ' ') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw IoError("row " + std::to_string(row) + ": cannot parse '" + text + "'");
  }
  return v;
}

}  // namespace

void write_samples_csv(std::ostream& out, const ParticleEnsemble& samples) {
  for (Eigen::Index k = 0; k < samples.dim(); ++k) {
    out << (k ? "," : "") << 'x' << k;
  }
  out << '\n';
  const Matrix& pts = samples.points();
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index k = 0; k < pts.cols(); ++k) {
      out << (k ? "," : "") << format_double(pts(i, k));
    }
    out << '\n';
  }
}

void write_samples_csv(const std::filesystem::path& path, const ParticleEnsemble& samples) {
  auto out = open_for_write(path);
  write_samples_csv(out, samples);
  if (!out) throw IoError("failed writing " + path.string());
}

ParticleEnsemble read_samples_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty samples file: missing header");
  strip_cr(line);
  const auto header = split_commas(line);
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] != "x" + std::to_string(k)) {
      throw IoError("bad header: expected x0..x{d-1}, got '" + line + "'");
    }
  }
  const auto d = static_cast<Eigen::Index>(header.size());
  if (d == 0) throw IoError("bad header: no columns");

  std::vector<double> values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    ++row;
    const auto fields = split_commas(line);
    if (static_cast<Eigen::Index>(fields.size()) != d) {
      throw IoError("row " + std::to_string(row) + ": expected " + std::to_string(d) +
                    " columns, got " + std::to_string(fields.size()));
    }
    for (const auto& f : fields) values.push_back(parse_double(f, row));
  }
  if (row == 0) throw IoError("samples file has no rows");

  Matrix pts(static_cast<Eigen::Index>(row), d);
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index k = 0; k < d; ++k) {
      pts(i, k) = values[static_cast<std::size_t>(i * d + k)];
    }
  }
  try {
    return ParticleEnsemble(std::move(pts));
  } catch (const InvalidArgument& e) {
    throw IoError(e.what());
  }
}

ParticleEnsemble read_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_samples_csv(in);
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricSeries>& series) {
  // iteration -> (series index, value), kept in series order per iteration.
  std::map<std::size_t, std::vector<std::pair<std::size_t, double>>> rows;
  for (std::size_t s = 0; s < series.size(); ++s) {
    for (const auto& [iteration, value] : series[s].values) {
      rows[iteration].emplace_back(s, value);
    }
  }
  out << "iteration,metric,value\n";
  for (const auto& [iteration, entries] : rows) {
    for (const auto& [s, value] : entries) {
      out << iteration << ',' << series[s].name << ',' << format_double(value) << '\n';
    }
  }
}

void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<MetricSeries>& series) {
  auto out = open_for_write(path);
  write_metrics_csv(out, series);
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace ogflow::io
