#pragma once

#include "dremkit/scenarios.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace dremkit::io {

/// Significant digits written for every floating-point field.
inline constexpr int kCsvDigits = 17;

/// A column-major numeric table with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  const std::vector<double>& column(const std::string& name) const;
};

/// Locale-independent decimal text with kCsvDigits significant digits.
std::string format_double(double value);
double parse_double(std::string_view text);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// Header t, theta_hat_1..m, theta_tilde_1..m, then the aux columns.
CsvTable series_table(const EstimatorSeries& series);
/// Same, restricted to samples [begin, end).
CsvTable series_table(const EstimatorSeries& series, Index begin, Index end);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

struct ManifestEntry {
  std::string file;
  std::vector<std::string> columns;  // empty for non-tabular files
  std::size_t rows = 0;
};

struct Manifest {
  std::string tool_version;
  std::string config_hash;
  std::string command;
  std::vector<ManifestEntry> files;
};

/// Writes manifest.json into `dir`; the manifest lists itself.
void write_manifest(const std::filesystem::path& dir, Manifest manifest);
Manifest read_manifest(const std::filesystem::path& path);

}  // namespace dremkit::io
