#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cogmux/config.hpp"
#include "cogmux/montecarlo.hpp"

namespace cogmux {

struct ToleranceProfile {
  std::string name = "default";
  double scale = 1.0;  // multiplies every tolerance

  /// "default" or "strict" (halves every tolerance); ConfigError otherwise.
  static ToleranceProfile from_name(const std::string& name);
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double observed = 0.0;   // the quantity compared with the tolerance
  double tolerance = 0.0;
  std::string detail;
  bool informational = false;  // reported, never fails the run
};

/// Binomial standard error at the hypothesised proportion p (score-test form,
/// well defined when the empirical proportion is 0 or 1).
double binomial_se(double p, long n);

/// |estimate - expected| in units of the larger of the reported and the null standard error.
double se_gap(const mc::McEstimate& est, double expected);

struct ValidationOptions {
  ToleranceProfile profile;
  long trials = 200000;
  std::uint64_t seed = 20240601;
};

/// Every analytic-vs-oracle pair that applies to cfg: closed form vs quadrature,
/// and analytic vs Monte-Carlo.
std::vector<CheckResult> validate_config(const SystemConfig& cfg, const ValidationOptions& opt = {});

bool all_passed(const std::vector<CheckResult>& checks);
void print_report(std::ostream& os, const std::vector<CheckResult>& checks);

}  // namespace cogmux
