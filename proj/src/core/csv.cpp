#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"

namespace mbl {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error(ErrorCode::InvalidArgument, "no column named " + name);
}

double CsvTable::number(std::size_t row, const std::string& name) const {
  require(row < rows.size(), ErrorCode::OutOfRange, "row index out of range");
  const std::string& s = rows[row][column(name)];
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == s.size() && !s.empty(), ErrorCode::InvalidArgument,
          "cell is not a number: '" + s + "' in column " + name);
  return v;
}

const std::string& CsvTable::text(std::size_t row, const std::string& name) const {
  require(row < rows.size(), ErrorCode::OutOfRange, "row index out of range");
  return rows[row][column(name)];
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::trunc);
  require(out.good(), ErrorCode::Io, "cannot write " + path);
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  emit(table.header);
  for (const auto& r : table.rows) {
    require(r.size() == table.header.size(), ErrorCode::Internal, "ragged CSV row for " + path);
    emit(r);
  }
  require(out.good(), ErrorCode::Io, "write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::Io, "cannot read " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      require(cells.size() == table.header.size(), ErrorCode::InvalidArgument,
              "row width differs from header in " + path);
      table.rows.push_back(std::move(cells));
    }
  }
  require(!first, ErrorCode::InvalidArgument, "CSV has no header: " + path);
  return table;
}

}  // namespace mbl
