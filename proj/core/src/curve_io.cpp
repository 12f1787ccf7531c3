#include "cogmux/curve_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <system_error>

#include "cogmux/errors.hpp"

namespace cogmux {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<CsvRow> csv_rows(const analytics::AnalyticCurve& c) {
  std::vector<CsvRow> rows;
  for (std::size_t k = 0; k < c.x.size(); ++k) rows.push_back({c.x[k], c.y[k], {}, {}, c.metric, c.config_digest});
  return rows;
}

std::vector<CsvRow> csv_rows(const mc::McCurve& c, double x_scale) {
  std::vector<CsvRow> rows;
  for (std::size_t k = 0; k < c.x.size(); ++k)
    rows.push_back({c.x[k] * x_scale, c.y[k].value, c.y[k].std_err, c.y[k].n_trials, c.metric, c.config_digest});
  return rows;
}

void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) { os << to_csv(rows); }

std::string to_csv(const std::vector<CsvRow>& rows) {
  std::string s = kCsvHeader;
  s += '\n';
  for (const CsvRow& r : rows) {
    s += format_double(r.x);
    s += ',';
    s += format_double(r.y);
    s += ',';
    if (r.std_err) s += format_double(*r.std_err);
    s += ',';
    if (r.n_trials) s += std::to_string(*r.n_trials);
    s += ',';
    s += r.metric;
    s += ',';
    s += r.config_digest;
    s += '\n';
  }
  return s;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out(1);
  for (char ch : line) {
    if (ch == ',')
      out.emplace_back();
    else
      out.back() += ch;
  }
  return out;
}

double parse_number(const std::string& s, int line, const char* col) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError(std::string("bad number in column ") + col + ": '" + s + "'", line, col);
  return v;
}

}  // namespace

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::vector<CsvRow> rows;
  std::istringstream is(text);
  std::string line;
  int ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') throw ConfigError("CRLF line terminator", ln, "");
    if (ln == 1) {
      if (line != kCsvHeader) throw ConfigError("header mismatch: '" + line + "'", ln, "");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 6) throw ConfigError("expected 6 columns, got " + std::to_string(f.size()), ln, "");
    CsvRow r;
    r.x = parse_number(f[0], ln, "x");
    r.y = parse_number(f[1], ln, "y");
    if (f[2].empty() != f[3].empty()) throw ConfigError("std_err and n_trials must both be set or both empty", ln, "");
    if (!f[2].empty()) {
      r.std_err = parse_number(f[2], ln, "std_err");
      r.n_trials = static_cast<long>(parse_number(f[3], ln, "n_trials"));
    }
    r.metric = f[4];
    r.config_digest = f[5];
    rows.push_back(std::move(r));
  }
  if (ln == 0) throw ConfigError("empty CSV", 0, "");
  return rows;
}

}  // namespace cogmux
