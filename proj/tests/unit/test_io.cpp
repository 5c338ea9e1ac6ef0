#include <doctest.h>

#include <sstream>

#include "sparse_ar/error.hpp"
#include "sparse_ar/io.hpp"

using namespace sparse_ar;

TEST_CASE("series CSV round trip") {
  const TimeSeries x({0.1, -2.5e-9, 1.0 / 3.0, 12345.678});
  std::stringstream buf;
  write_series_csv(buf, x);
  CHECK(read_series_csv(buf) == x);
}

TEST_CASE("series CSV parsing") {
  std::istringstream ok("x\n1\n+2.5\n-3e2\n\n\n");
  CHECK(read_series_csv(ok) == TimeSeries({1.0, 2.5, -300.0}));
  std::istringstream crlf("x\r\n1\r\n2\r\n");
  CHECK(read_series_csv(crlf) == TimeSeries({1.0, 2.0}));

  for (const char* bad : {"", "y\n1\n", "x\n", "x\n1\nabc\n", "x\n1\n\n2\n", "x\n1,2\n", "x\nnan\n", "x\n1e999\n"}) {
    std::istringstream in(bad);
    CHECK_THROWS_AS(read_series_csv(in), InvalidInput);
  }
  CHECK_THROWS_AS(read_series_csv(std::filesystem::path("/nonexistent/series.csv")), InvalidInput);
}
