#include "spinwave/output.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace spinwave {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return csv_field(std::get<std::string>(c));
}

nlohmann::ordered_json config_json(const RunConfig& config) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  const std::string text = serialize_config(config);
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    const std::string line = text.substr(start, nl - start);
    start = nl + 1;
    const auto eq = line.find(" = ");
    out[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("table row width does not match its header");
  rows.push_back(std::move(row));
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const Table& table, const std::string& command, const RunConfig& config) {
  out << "# command: " << command << "\n";
  out << "# config_digest: " << config_digest(config) << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_field(table.columns[i]);
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << "\n";
  }
}

void write_json(std::ostream& out, const Table& table, const std::string& command, const RunConfig& config) {
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["config_digest"] = config_digest(config);
  doc["config"] = config_json(config);
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto r = nlohmann::ordered_json::array();
    for (const auto& c : row) {
      if (const auto* d = std::get_if<double>(&c)) {
        if (std::isfinite(*d)) r.push_back(*d);
        else r.push_back(nullptr);
      } else if (const auto* i = std::get_if<long long>(&c)) {
        r.push_back(*i);
      } else {
        r.push_back(std::get<std::string>(c));
      }
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << "\n";
}

void write_table(std::ostream& out, const Table& table, const std::string& command, const RunConfig& config) {
  if (config.format == OutputFormat::json) write_json(out, table, command, config);
  else write_csv(out, table, command, config);
}

}  // namespace spinwave
