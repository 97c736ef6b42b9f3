// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperscar/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "hyperscar/errors.hpp"

namespace hyperscar::io {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

constexpr std::array<char, 8> kMagic{'H', 'S', 'C', 'A', 'R', 'S', 'T', '1'};

}  // namespace

std::string format_double(double v) {
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

std::string hex_word(std::uint64_t w) {
  std::array<char, 24> buf{};
  std::snprintf(buf.data(), buf.size(), "0x%llx", static_cast<unsigned long long>(w));
  return buf.data();
}

std::size_t CsvTable::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw DomainError("CSV column '" + std::string(name) + "' missing");
  return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_column(std::string_view name) const noexcept {
  return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open CSV file '" + path + "'");
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto cells = split(t);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw DomainError("CSV file '" + path + "': row has " + std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw DomainError("CSV file '" + path + "' has no header");
  return table;
}

double parse_double(const std::string& cell) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw DomainError("");
    return v;
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + cell + "'");
  }
}

long long parse_int(const std::string& cell) {
  long long v = 0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end) throw DomainError("not an integer: '" + cell + "'");
  return v;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
  if (!out_) throw DomainError("cannot write '" + path + "'");
}

void CsvWriter::header(std::span<const std::string> names) {
  for (std::size_t k = 0; k < names.size(); ++k) out_ << (k ? "," : "") << names[k];
  out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  for (std::size_t k = 0; k < values.size(); ++k) out_ << (k ? "," : "") << format_double(values[k]);
  out_ << '\n';
}

void CsvWriter::row(std::string_view first, std::span<const double> values) {
  out_ << first;
  for (double v : values) out_ << ',' << format_double(v);
  out_ << '\n';
}

void CsvWriter::raw_line(std::string_view line) { out_ << line << '\n'; }

void write_state_dump(const std::string& path, std::span<const double> times,
                      std::span<const std::vector<std::complex<double>>> states) {
  if (times.size() != states.size()) throw DomainError("state dump: times and states differ in length");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write '" + path + "'");
  const std::uint32_t version = 1;
  const std::uint32_t component_bytes = 8;
  const std::uint64_t dim = states.empty() ? 0 : states.front().size();
  const std::uint64_t records = states.size();
  out.write(kMagic.data(), kMagic.size());
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&component_bytes), sizeof component_bytes);
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  out.write(reinterpret_cast<const char*>(&records), sizeof records);
  for (std::size_t r = 0; r < states.size(); ++r) {
    if (states[r].size() != dim) throw DomainError("state dump: ragged state dimensions");
    out.write(reinterpret_cast<const char*>(&times[r]), sizeof(double));
    out.write(reinterpret_cast<const char*>(states[r].data()),
              static_cast<std::streamsize>(dim * sizeof(std::complex<double>)));
  }
}

StateDump read_state_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::array<char, 8> magic{};
  std::uint32_t version = 0;
  std::uint32_t component_bytes = 0;
  std::uint64_t dim = 0;
  std::uint64_t records = 0;
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&component_bytes), sizeof component_bytes);
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  in.read(reinterpret_cast<char*>(&records), sizeof records);
  if (!in || magic != kMagic || version != 1 || component_bytes != 8) {
    throw DomainError("'" + path + "' is not a version-1 state dump");
  }
  StateDump dump;
  dump.times.resize(records);
  dump.states.assign(records, std::vector<std::complex<double>>(dim));
  for (std::uint64_t r = 0; r < records; ++r) {
    in.read(reinterpret_cast<char*>(&dump.times[r]), sizeof(double));
    in.read(reinterpret_cast<char*>(dump.states[r].data()),
            static_cast<std::streamsize>(dim * sizeof(std::complex<double>)));
  }
  if (!in) throw DomainError("state dump '" + path + "' is truncated");
  return dump;
}

}  // namespace hyperscar::io
