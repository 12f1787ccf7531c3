#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "cogmux/rng.hpp"

namespace cogmux::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int integer(int lo, int hi) { return lo + static_cast<int>(rng_.bits() % static_cast<std::uint64_t>(hi - lo + 1)); }
  double real(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
  double log_uniform(double lo, double hi) { return std::exp(real(std::log(lo), std::log(hi))); }
  bool coin() { return rng_.bits() & 1; }

  std::vector<double> positive_vector(int n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = log_uniform(lo, hi);
    return v;
  }

  /// n values at least `gap` apart in relative terms.
  std::vector<double> distinct_positive(int n, double lo, double hi, double gap = 0.05) {
    std::vector<double> v;
    while (static_cast<int>(v.size()) < n) {
      const double x = log_uniform(lo, hi);
      bool ok = true;
      for (double y : v) ok = ok && std::abs(x - y) > gap * std::max(x, y);
      if (ok) v.push_back(x);
    }
    return v;
  }

  RngStream& rng() { return rng_; }

 private:
  RngStream rng_;
};

inline std::string show(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  os << '[';
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v[k];
  os << ']';
  return os.str();
}

}  // namespace cogmux::testing
