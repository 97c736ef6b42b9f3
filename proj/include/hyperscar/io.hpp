// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hyperscar::io {

/// 17 significant digits (%.17g); round-trips every finite double.
[[nodiscard]] std::string format_double(double v);

[[nodiscard]] std::string hex_word(std::uint64_t w);

/// Header plus rows of string cells. Blank lines and lines starting with '#' are skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position by name; throws DomainError if absent.
  [[nodiscard]] std::size_t column(std::string_view name) const;
  [[nodiscard]] bool has_column(std::string_view name) const noexcept;
};

/// Throws DomainError on unreadable files or ragged rows.
[[nodiscard]] CsvTable read_csv(const std::string& path);

[[nodiscard]] double parse_double(const std::string& cell);
[[nodiscard]] long long parse_int(const std::string& cell);

/// Minimal CSV writer: every value goes through format_double.
class CsvWriter {
 public:
  /// Throws DomainError if the file cannot be opened.
  explicit CsvWriter(const std::string& path);

  void header(std::span<const std::string> names);
  void row(std::span<const double> values);
  /// First cell verbatim, the rest formatted as doubles.
  void row(std::string_view first, std::span<const double> values);
  void raw_line(std::string_view line);

 private:
  std::ofstream out_;
};

/**
 * Binary dump of retained states. Layout (little endian):
 *   char[8]  magic "HSCARST1"
 *   uint32   version (1)
 *   uint32   bytes per complex component (8 = complex128)
 *   uint64   dimension
 *   uint64   number of records
 * then per record: float64 t_ns followed by `dimension` (re, im) float64 pairs.
 */
void write_state_dump(const std::string& path, std::span<const double> times,
                      std::span<const std::vector<std::complex<double>>> states);

struct StateDump {
  std::vector<double> times;
  std::vector<std::vector<std::complex<double>>> states;
};

[[nodiscard]] StateDump read_state_dump(const std::string& path);

}  // namespace hyperscar::io
