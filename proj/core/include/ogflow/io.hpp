#pragma once

#include "ogflow/ensemble.hpp"
#include "ogflow/metrics.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ogflow::io {

/// Thrown on malformed CSV input or an unwritable output path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// Header row x0,...,x{d-1}, then one particle per row.
void write_samples_csv(std::ostream& out, const ParticleEnsemble& samples);
void write_samples_csv(const std::filesystem::path& path, const ParticleEnsemble& samples);

/// Requires the x0..x{d-1} header and d values on every row.
ParticleEnsemble read_samples_csv(std::istream& in);
ParticleEnsemble read_samples_csv(const std::filesystem::path& path);

/// Tidy long format: header iteration,metric,value; rows ordered by
/// iteration, then by series order.
void write_metrics_csv(std::ostream& out, const std::vector<MetricSeries>& series);
void write_metrics_csv(const std::filesystem::path& path,
                       const std::vector<MetricSeries>& series);

}  // namespace ogflow::io
