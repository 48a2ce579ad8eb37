#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "subres/direct_solver.hpp"
#include "subres/envelope_model.hpp"
#include "subres/sweep.hpp"

namespace subres::csv {

/// A header row plus text cells. Numbers are written in the shortest decimal
/// form that parses back to the same double, with '.' as separator and LF
/// line endings, independent of the C++ locale.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_number(double value);

/// Parses a full decimal number; throws DomainError on trailing garbage.
double parse_number(std::string_view text);

std::string write(const Table& table);

/// Throws DomainError on ragged rows or an empty document.
Table parse(std::string_view text);

Table trajectory_table(const Trajectory& trajectory);
Table envelope_table(const EnvelopeRun& run, bool theta_form);
Table stability_table(const StabilityMap& map);

void write_file(const std::string& path, const Table& table);

}  // namespace subres::csv
