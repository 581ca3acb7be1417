#include "pjd/csv.hpp"

#include <charconv>
#include <sstream>

#include "pjd/error.hpp"

namespace pjd {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (first) {
      t.header = std::move(cells);
      first = false;
      continue;
    }
    if (cells.size() != t.header.size())
      throw Error(ErrorCode::Parse, "CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                        std::to_string(t.header.size()));
    t.rows.push_back(std::move(cells));
  }
  if (first) throw Error(ErrorCode::Parse, "empty CSV");
  return t;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_moment_csv(std::ostream& os, std::span<const double> horizons, std::span<const double> values) {
  os << "T,value\n";
  for (std::size_t i = 0; i < horizons.size(); ++i) os << format_number(horizons[i]) << "," << format_number(values[i]) << "\n";
}

void write_paths_csv(std::ostream& os, const PathSet& paths) {
  os << "time,path_id";
  for (int i = 1; i <= paths.coords; ++i) os << ",x_" << i;
  os << "\n";
  for (int p = 0; p < paths.n_paths; ++p) {
    for (std::size_t ti = 0; ti < paths.times.size(); ++ti) {
      os << format_number(paths.times[ti]) << "," << p;
      for (double v : paths.state(p, ti)) os << "," << format_number(v);
      os << "\n";
    }
  }
}

void write_price_csv(std::ostream& os, const std::vector<PriceRow>& rows) {
  os << "tenor,P,F,Ptilde\n";
  for (const auto& r : rows)
    os << format_number(r.tenor) << "," << format_number(r.P) << "," << format_number(r.F) << "," << format_number(r.Ptilde)
       << "\n";
}

}  // namespace pjd
