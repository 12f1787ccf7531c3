#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cogmux/analytics.hpp"
#include "cogmux/montecarlo.hpp"

namespace cogmux {

inline constexpr const char* kCsvHeader = "x,y,std_err,n_trials,metric,config_digest";

struct CsvRow {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> std_err;  // empty for analytic rows
  std::optional<long> n_trials;
  std::string metric;
  std::string config_digest;
};

/// Shortest round-trip decimal form, '.' as decimal point regardless of locale.
std::string format_double(double v);

std::vector<CsvRow> csv_rows(const analytics::AnalyticCurve& c);
/// x_scale multiplies the grid (normalized axes such as w_th / p_max).
std::vector<CsvRow> csv_rows(const mc::McCurve& c, double x_scale = 1.0);

void write_csv(std::ostream& os, const std::vector<CsvRow>& rows);
std::string to_csv(const std::vector<CsvRow>& rows);

/// Strict reader for the same schema; throws ConfigError with the line number on mismatch.
std::vector<CsvRow> parse_csv(const std::string& text);

}  // namespace cogmux
