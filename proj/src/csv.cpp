#include "subres/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "subres/error.hpp"

namespace subres::csv {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

double parse_number(std::string_view text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
    throw DomainError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

namespace {

void append_row(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += cells[i];
  }
  out += '\n';
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::string write(const Table& table) {
  std::string out;
  append_row(out, table.header);
  for (const auto& row : table.rows) append_row(out, row);
  return out;
}

Table parse(std::string_view text) {
  Table table;
  bool first = true;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    auto cells = split(line);
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != table.header.size()) {
        throw DomainError("ragged CSV row: expected " + std::to_string(table.header.size()) +
                          " cells, got " + std::to_string(cells.size()));
      }
      table.rows.push_back(std::move(cells));
    }
  }
  if (first) throw DomainError("empty CSV document");
  return table;
}

Table trajectory_table(const Trajectory& trajectory) {
  Table table{{"t", "u", "du", "envelope"}, {}};
  table.rows.reserve(trajectory.samples.size());
  for (const auto& s : trajectory.samples) {
    table.rows.push_back(
        {format_number(s.t), format_number(s.u), format_number(s.du), format_number(s.envelope)});
  }
  return table;
}

Table envelope_table(const EnvelopeRun& run, bool theta_form) {
  Table table{{theta_form ? "theta" : "tau", "w", "v", "log_norm"}, {}};
  table.rows.reserve(run.states.size());
  for (const auto& s : run.states) {
    const double scale = std::exp(s.log_scale);
    table.rows.push_back({format_number(s.tau), format_number(s.w * scale),
                          format_number(s.v * scale), format_number(s.log_norm())});
  }
  return table;
}

Table stability_table(const StabilityMap& map) {
  Table table{{"delta", "epsilon", "verdict", "envelope_ratio"}, {}};
  for (std::size_t i = 0; i < map.grid.delta_count; ++i) {
    for (std::size_t j = 0; j < map.grid.epsilon_count; ++j) {
      table.rows.push_back({format_number(map.grid.delta_at(i)),
                            format_number(map.grid.epsilon_at(j)), to_string(map.verdict(i, j)),
                            format_number(map.ratio(i, j))});
    }
  }
  return table;
}

void write_file(const std::string& path, const Table& table) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open '" + path + "' for writing");
  file << write(table);
  if (!file) throw Error("failed writing '" + path + "'");
}

}  // namespace subres::csv
