#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bplat/errors.hpp"

namespace bplat {

// Column-oriented CSV with a single header row.  Values are written with
// %.12g so reruns of the same computation are byte-identical.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(const std::vector<std::string>& names) {
    for (size_t i = 0; i < names.size(); ++i)
      os_ << (i ? "," : "") << names[i];
    os_ << "\n";
  }

  void row(const std::vector<double>& values) {
    char buf[32];
    for (size_t i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.12g", values[i]);
      os_ << (i ? "," : "") << buf;
    }
    os_ << "\n";
  }

 private:
  std::ostream& os_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV file: " + path, path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (first) {
      while (std::getline(ss, cell, ',')) table.header.push_back(cell);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("non-numeric CSV cell '" + cell + "' in " + path,
                          path);
      }
    }
    if (row.size() != table.header.size())
      throw ConfigError("ragged CSV row in " + path, path);
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace bplat
