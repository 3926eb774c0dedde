#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace phasebound::cli {

/// 17 significant digits, '.' separator, independent of the global locale.
std::string format_number(double x);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Comment lines first ("# " prefixed), then the header row and the data rows.
void write_csv(std::ostream& out, const std::vector<std::string>& comments, const CsvTable& table);

}  // namespace phasebound::cli
