#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "pjd/simulate.hpp"

namespace pjd {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Comma-separated values without quoting. Throws Error(Parse) on ragged rows.
CsvTable read_csv(std::istream& in);

/// Shortest round-trip decimal form.
std::string format_number(double v);

/// Header "T,value".
void write_moment_csv(std::ostream& os, std::span<const double> horizons, std::span<const double> values);
/// Header "time,path_id,x_1..x_d".
void write_paths_csv(std::ostream& os, const PathSet& paths);

struct PriceRow {
  double tenor = 0.0, P = 1.0, F = 0.0, Ptilde = 0.0;
};
/// Header "tenor,P,F,Ptilde".
void write_price_csv(std::ostream& os, const std::vector<PriceRow>& rows);

}  // namespace pjd
