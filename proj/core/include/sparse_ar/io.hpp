#pragma once

#include <filesystem>
#include <istream>
#include <ostream>

#include "sparse_ar/ar_model.hpp"

namespace sparse_ar {

/// Single-column CSV: header line `x`, then one decimal observation per line.
/// Blank trailing lines are ignored; anything else malformed is InvalidInput.
TimeSeries read_series_csv(std::istream& in);
TimeSeries read_series_csv(const std::filesystem::path& path);

/// Writes values in shortest round-trip form, so read(write(s)) == s.
void write_series_csv(std::ostream& out, const TimeSeries& series);
void write_series_csv(const std::filesystem::path& path, const TimeSeries& series);

}  // namespace sparse_ar
