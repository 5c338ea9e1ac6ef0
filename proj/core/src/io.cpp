#include "sparse_ar/io.hpp"

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include "sparse_ar/error.hpp"
#include "sparse_ar/montecarlo.hpp"

namespace sparse_ar {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

TimeSeries read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x") throw InvalidInput("series CSV must start with the header `x`");
  std::vector<double> values;
  std::size_t line_no = 1;
  bool saw_blank = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string cell = trim(line);
    if (cell.empty()) {
      saw_blank = true;
      continue;
    }
    if (saw_blank) throw InvalidInput("series CSV has a blank line before line " + std::to_string(line_no));
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (*begin == '+') ++begin;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end) {
      throw InvalidInput("series CSV line " + std::to_string(line_no) + " is not a number: '" + cell + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw InvalidInput("series CSV contains no observations");
  return TimeSeries(std::move(values));
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open series file " + path.string());
  return read_series_csv(in);
}

void write_series_csv(std::ostream& out, const TimeSeries& series) {
  out << "x\n";
  for (double v : series.values()) out << format_double(v) << '\n';
}

void write_series_csv(const std::filesystem::path& path, const TimeSeries& series) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write series file " + path.string());
  write_series_csv(out, series);
}

}  // namespace sparse_ar
