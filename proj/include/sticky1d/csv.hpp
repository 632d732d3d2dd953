#pragma once

// Minimal CSV emission and ingestion for the run artifacts. Files carry a
// version line ("schema_v=1"), then a header row, then data rows. Floats are
// written with 17 significant digits so re-reading round-trips exactly.

#include <string>
#include <vector>

namespace sticky::csv {

std::string format_double(double v);

class Writer {
 public:
  Writer(const std::string& path, const std::vector<std::string>& columns);
  ~Writer();

  void row(const std::vector<std::string>& cells);  // must match column count

 private:
  struct Impl;
  Impl* impl_;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
  double number(std::size_t row, int col) const;
};

Table read(const std::string& path);

}  // namespace sticky::csv
