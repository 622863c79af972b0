#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "spinwave/config.hpp"

namespace spinwave {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// `#` metadata lines (command, config digest), then the header and rows.
/// Doubles are written with 17 significant digits.
void write_csv(std::ostream& out, const Table& table, const std::string& command, const RunConfig& config);

/// {"command", "config_digest", "config", "columns", "rows"}; non-finite doubles become null.
void write_json(std::ostream& out, const Table& table, const std::string& command, const RunConfig& config);

void write_table(std::ostream& out, const Table& table, const std::string& command, const RunConfig& config);

std::string format_double(double x);

}  // namespace spinwave
