#include "sticky1d/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace sticky::csv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Writer::Impl {
  std::ofstream out;
  std::size_t width = 0;
  std::string path;
};

Writer::Writer(const std::string& path, const std::vector<std::string>& columns)
    : impl_(new Impl) {
  impl_->out.open(path, std::ios::binary);  // '\n' endings on every platform
  impl_->path = path;
  if (!impl_->out)
    throw std::runtime_error("csv: cannot open for writing: " + path);
  impl_->width = columns.size();
  impl_->out << "schema_v=1\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    impl_->out << columns[i] << (i + 1 < columns.size() ? "," : "");
  impl_->out << "\n";
}

Writer::~Writer() { delete impl_; }

void Writer::row(const std::vector<std::string>& cells) {
  if (cells.size() != impl_->width)
    throw std::invalid_argument("csv: row width mismatch in " + impl_->path);
  for (std::size_t i = 0; i < cells.size(); ++i)
    impl_->out << cells[i] << (i + 1 < cells.size() ? "," : "");
  impl_->out << "\n";
}

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return static_cast<int>(i);
  return -1;
}

double Table::number(std::size_t row, int col) const {
  if (col < 0 || row >= rows.size() ||
      static_cast<std::size_t>(col) >= rows[row].size())
    throw std::out_of_range("csv: cell out of range");
  const std::string& cell = rows[row][static_cast<std::size_t>(col)];
  if (cell.empty()) return std::nan("");
  return std::strtod(cell.c_str(), nullptr);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return cells;
}

}  // namespace

Table read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("csv: cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "schema_v=1")
    throw std::runtime_error("csv: missing schema_v=1 line in " + path);
  Table t;
  if (!std::getline(in, line))
    throw std::runtime_error("csv: missing header in " + path);
  t.columns = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    t.rows.push_back(split_line(line));
  }
  return t;
}

}  // namespace sticky::csv
