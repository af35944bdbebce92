#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cuavsim/metrics.hpp"

namespace cuavsim {

// Writes the per-slot metric series with a fixed five-column schema. The
// moving-average column is recomputed from the raw rewards with the given
// window; all values use six fractional digits so identical runs produce
// identical bytes.
inline void write_csv(const std::vector<SlotMetrics>& series, int smoothing_window,
                      const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_csv: cannot open " + path);
  os << "slot,avg_reward,avg_reward_ma,sensing_accuracy,channel_utilization\n";
  std::vector<double> rewards;
  rewards.reserve(series.size());
  for (const auto& s : series) rewards.push_back(s.avg_reward);
  const auto ma = moving_average(rewards, smoothing_window);
  char line[256];
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::snprintf(line, sizeof(line), "%lld,%.6f,%.6f,%.6f,%.6f\n", series[i].slot,
                  series[i].avg_reward, ma[i], series[i].sensing_accuracy,
                  series[i].channel_utilization);
    os << line;
  }
  if (!os) throw std::runtime_error("write_csv: write failed for " + path);
}

// Column-labelled numeric table, as read back from write_csv output.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // column-major

  std::size_t n_rows() const { return columns.empty() ? 0 : columns.front().size(); }

  const std::vector<double>& column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return columns[i];
    throw std::out_of_range("CsvTable: no column named " + name);
  }
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("read_csv: cannot open " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("read_csv: empty file " + path);
  {
    std::stringstream header(line);
    std::string name;
    while (std::getline(header, name, ',')) table.header.push_back(name);
  }
  table.columns.resize(table.header.size());
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::size_t col = 0;
    while (std::getline(row, cell, ',')) {
      if (col >= table.columns.size())
        throw std::runtime_error("read_csv: too many columns in " + path);
      table.columns[col++].push_back(std::stod(cell));
    }
    if (col != table.columns.size())
      throw std::runtime_error("read_csv: ragged row in " + path);
  }
  return table;
}

}  // namespace cuavsim
