#include "dremkit/io.hpp"

#include "json.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dremkit::io {

namespace fs = std::filesystem;

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return columns[i];
  throw std::out_of_range("CsvTable: no column named " + name);
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, kCsvDigits);
  if (res.ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last)
    throw std::invalid_argument("parse_double: not a number: '" + std::string(text) + "'");
  return value;
}

void write_csv(const fs::path& path, const CsvTable& table) {
  if (table.header.size() != table.columns.size())
    throw std::invalid_argument("write_csv: header and column counts differ");
  for (const auto& c : table.columns)
    if (c.size() != table.rows()) throw std::invalid_argument("write_csv: ragged columns");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (std::size_t j = 0; j < table.header.size(); ++j) out << (j ? "," : "") << table.header[j];
  out << '\n';
  std::string line;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    line.clear();
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      if (j) line += ',';
      line += format_double(table.columns[j][r]);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header");
  for (auto f : split(line)) table.header.emplace_back(f);
  table.columns.resize(table.header.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != table.header.size())
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(table.header.size()) + " fields");
    for (std::size_t j = 0; j < fields.size(); ++j) table.columns[j].push_back(parse_double(fields[j]));
  }
  return table;
}

CsvTable series_table(const EstimatorSeries& series) { return series_table(series, 0, series.theta_hat.count()); }

CsvTable series_table(const EstimatorSeries& series, Index begin, Index end) {
  const Trajectory& est = series.theta_hat;
  if (begin < 0 || end > est.count() || begin > end) throw std::out_of_range("series_table: bad sample range");
  const Index m = est.rows();
  CsvTable table;
  const auto add = [&](std::string name, auto&& value) {
    table.header.push_back(std::move(name));
    std::vector<double> col;
    col.reserve(static_cast<std::size_t>(end - begin));
    for (Index k = begin; k < end; ++k) col.push_back(value(k));
    table.columns.push_back(std::move(col));
  };
  add("t", [&](Index k) { return est.time(k); });
  for (Index i = 0; i < m; ++i)
    add("theta_hat_" + std::to_string(i + 1), [&](Index k) { return est.samples()(i, k); });
  for (Index i = 0; i < m; ++i)
    add("theta_tilde_" + std::to_string(i + 1), [&](Index k) { return series.theta_tilde.samples()(i, k); });
  for (const auto& aux : series.aux) {
    const Index rows = aux.values.samples().rows();
    for (Index i = 0; i < rows; ++i) {
      const std::string name = rows == 1 ? aux.name : aux.name + "_" + std::to_string(i + 1);
      add(name, [&](Index k) { return aux.values.samples()(i, k); });
    }
  }
  return table;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_manifest(const fs::path& dir, Manifest manifest) {
  manifest.files.push_back({"manifest.json", {}, 0});
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& f : manifest.files)
    files.push_back({{"file", f.file}, {"columns", f.columns}, {"rows", f.rows}});
  const nlohmann::ordered_json doc = {{"tool", "dremkit"},
                                      {"version", manifest.tool_version},
                                      {"command", manifest.command},
                                      {"config_hash", manifest.config_hash},
                                      {"csv_significant_digits", kCsvDigits},
                                      {"files", files}};
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  out << doc.dump(2) << '\n';
}

Manifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const auto doc = nlohmann::json::parse(in);
  Manifest m{doc.at("version"), doc.at("config_hash"), doc.at("command"), {}};
  for (const auto& f : doc.at("files"))
    m.files.push_back({f.at("file"), f.at("columns").get<std::vector<std::string>>(), f.at("rows")});
  return m;
}

}  // namespace dremkit::io
