#include "cogmux/power_control.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cogmux/errors.hpp"
#include "cogmux/quadrature.hpp"
#include "cogmux/special_functions.hpp"

namespace cogmux {

using special::log_factorial;

namespace {

void check_b(std::span<const double> b, int N) {
  if (b.empty()) throw DomainError("q_max_expectation: empty b-vector");
  if (N < 1) throw DomainError("q_max_expectation: N must be >= 1");
  for (double v : b)
    if (!(v > 0)) throw DomainError("q_max_expectation: b values must be > 0");
}

double gamma_pdf(double x, int k, double scale) {
  if (x == 0.0) return k == 1 ? 1.0 / scale : 0.0;
  return std::exp((k - 1) * std::log(x / scale) - x / scale - log_factorial(k - 1)) / scale;
}

double qmax_quadrature(std::span<const double> b, int N) {
  auto f = [&](double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      double prod = gamma_pdf(x, N, b[i]);
      for (std::size_t k = 0; k < b.size() && prod != 0.0; ++k)
        if (k != i) prod *= special::lower_gamma_reg(N, x / b[k]);
      s += prod;
    }
    return x * s;
  };
  const double bmax = *std::max_element(b.begin(), b.end());
  const double bmin = *std::min_element(b.begin(), b.end());
  double hi = bmax * N;
  while (special::upper_gamma_reg(N, hi / bmax) * b.size() > 1e-17) hi *= 1.5;
  std::vector<double> br{0.0};
  for (double v = bmin * 0.25; v < hi; v *= 2.0) br.push_back(v);
  br.push_back(hi);
  quad::QuadratureOptions o;
  o.abs_tol = 1e-14 * bmax;
  o.rel_tol = 1e-12;
  o.max_intervals = 20000;
  return quad::integrate_pieces(f, br, o).value;
}

// sum_T c_T z^T = prod_{t in S} sum_{k<N} (w_t z)^k / k!
std::vector<double> truncated_exp_product(const std::vector<double>& w, int N) {
  std::vector<double> poly{1.0};
  for (double wt : w) {
    std::vector<double> f(N);
    f[0] = 1.0;
    for (int k = 1; k < N; ++k) f[k] = f[k - 1] * wt / k;
    std::vector<double> next(poly.size() + N - 1, 0.0);
    for (std::size_t a = 0; a < poly.size(); ++a)
      for (int k = 0; k < N; ++k) next[a + k] += poly[a] * f[k];
    poly.swap(next);
  }
  return poly;
}

// sum_i sum_{S subset of others} (-1)^{|S|} b_i^{-N}/Gamma(N) sum_T c_T Gamma(N+T+1) / r^{N+T+1},
// with per-index weights w and rate r = w_i + sum_S w_t, where w = rates.
double qmax_inclusion_exclusion(std::span<const double> rates, int N) {
  const int m = static_cast<int>(rates.size());
  if (m > 20) throw DomainError("q_max_expectation: closed form limited to 20 nodes");
  long double total = 0.0L;
  for (int i = 0; i < m; ++i) {
    std::vector<int> others;
    for (int k = 0; k < m; ++k)
      if (k != i) others.push_back(k);
    const unsigned n_sub = 1u << others.size();
    for (unsigned mask = 0; mask < n_sub; ++mask) {
      std::vector<double> w;
      double r = rates[i];
      for (std::size_t t = 0; t < others.size(); ++t)
        if (mask & (1u << t)) {
          w.push_back(rates[others[t]]);
          r += rates[others[t]];
        }
      const std::vector<double> c = truncated_exp_product(w, N);
      long double s = 0.0L;
      for (std::size_t T = 0; T < c.size(); ++T) {
        if (c[T] == 0.0) continue;
        const double lt = N * std::log(rates[i]) - log_factorial(N - 1) + std::log(c[T]) +
                          log_factorial(N + static_cast<long>(T)) - (N + static_cast<double>(T) + 1) * std::log(r);
        s += std::exp(static_cast<long double>(lt));
      }
      total += (w.size() % 2 ? -s : s);
    }
  }
  return static_cast<double>(total);
}

}  // namespace

double q_max_expectation(std::span<const double> b, int N, QmaxMethod method) {
  check_b(b, N);
  if (b.size() == 1) return N * b[0];
  switch (method) {
    case QmaxMethod::quadrature: return qmax_quadrature(b, N);
    case QmaxMethod::closed_form: {
      std::vector<double> rates;
      for (double v : b) rates.push_back(1.0 / v);
      return qmax_inclusion_exclusion(rates, N);
    }
    case QmaxMethod::closed_form_printed: return qmax_inclusion_exclusion(b, N);
  }
  return qmax_quadrature(b, N);
}

double node_power(double Q, double w_th, double p_max) {
  if (!(Q >= 0) || !(w_th > 0) || !(p_max > 0)) throw DomainError("node_power: inputs must be positive");
  return 1.0 / (1.0 / p_max + Q / w_th);
}

double node_power_hard_min(double Q, double w_th, double p_max) {
  if (!(Q >= 0) || !(w_th > 0) || !(p_max > 0)) throw DomainError("node_power_hard_min: inputs must be positive");
  return Q == 0.0 ? p_max : std::min(p_max, w_th / Q);
}

PowerPlan plan_powers(const SystemConfig& cfg, double w_th) {
  if (!cfg.has_interference_gains())
    throw ConfigError("power control needs interference_gains or interference_rule in the config");
  const int mc = cfg.n_secondary(), mp = cfg.n_primary();
  const double a2 = cfg.aging_alpha * cfg.aging_alpha;
  PowerPlan plan;
  for (int n = 0; n <= mc; ++n) {
    std::vector<double> beta(mp);
    for (int t = 0; t < mp; ++t) beta[t] = cfg.primaries[t].power_w * cfg.interference_gains(t, n);
    const double denom = std::accumulate(beta.begin(), beta.end(), 0.0) + cfg.noise_var;
    std::vector<double> b(mp);
    for (int t = 0; t < mp; ++t) {
      const double hat = cfg.estimation == ChannelEstimation::mmse ? beta[t] * beta[t] / denom : 0.0;
      b[t] = (beta[t] - hat) * a2;
    }
    const int antennas = n == mc ? cfg.n_rx_antennas : 1;
    const double Q = q_max_expectation(b, antennas);
    const double p = node_power(Q, w_th, cfg.p_max_w);
    if (n == mc) {
      plan.Q_R = Q;
      plan.p_R = p;
    } else {
      plan.Q.push_back(Q);
      plan.p.push_back(p);
    }
    plan.b.push_back(std::move(b));
  }
  return plan;
}

std::vector<double> interference_scales(const SystemConfig& cfg, const PowerPlan& plan, int j) {
  if (!cfg.has_interference_gains()) throw ConfigError("interference metrics need interference gains");
  if (j < 0 || j >= cfg.n_primary()) throw DomainError("interference_scales: primary index out of range");
  std::vector<double> s;
  for (int i = 0; i < cfg.n_secondary(); ++i) s.push_back(plan.p[i] * cfg.interference_gains(j, i));
  s.push_back(plan.p_R * cfg.interference_gains(j, cfg.n_secondary()));
  return s;
}

double interference_exceed_prob(std::span<const double> s, double w_th) {
  if (s.empty()) throw DomainError("interference_exceed_prob: no terms");
  if (!(w_th >= 0)) throw DomainError("interference_exceed_prob: w_th must be >= 0");
  for (double v : s)
    if (!(v > 0)) throw DomainError("interference_exceed_prob: scales must be > 0");
  if (w_th == 0.0) return 1.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t k = i + 1; k < s.size(); ++k)
      if (std::abs(s[i] - s[k]) <= 1e-9 * std::max(s[i], s[k]))
        throw DegenerateScalesError("interference_exceed_prob: scales " + std::to_string(i) + " and " +
                                    std::to_string(k) + " coincide");
  long double total = 0.0L;
  for (std::size_t i = 0; i < s.size(); ++i) {
    long double coef = 1.0L;
    for (std::size_t k = 0; k < s.size(); ++k)
      if (k != i) coef *= static_cast<long double>(s[i]) / (static_cast<long double>(s[i]) - s[k]);
    total += coef * std::exp(-static_cast<long double>(w_th) / s[i]);
  }
  return std::clamp(static_cast<double>(total), 0.0, 1.0);
}

double interference_exceed_prob_erlang(std::span<const double> s, double w_th) {
  if (s.empty()) throw DomainError("interference_exceed_prob_erlang: no terms");
  if (!(w_th >= 0)) throw DomainError("interference_exceed_prob_erlang: w_th must be >= 0");
  for (double v : s)
    if (!(v > 0)) throw DomainError("interference_exceed_prob_erlang: scales must be > 0");
  if (w_th == 0.0) return 1.0;
  const int n = static_cast<int>(s.size());
  const double s1 = *std::min_element(s.begin(), s.end());
  const double x = w_th / s1;
  double logC = 0.0;
  for (double v : s) logC += std::log(s1 / v);
  const double C = std::exp(logC);
  // gamma_k = sum_i (1 - s1/s_i)^k / k;  delta_{k+1} = 1/(k+1) sum_{i=1}^{k+1} i gamma_i delta_{k+1-i}
  std::vector<double> r, rk;
  for (double v : s) {
    r.push_back(1.0 - s1 / v);
    rk.push_back(1.0);
  }
  std::vector<double> gam{0.0}, delta{1.0};
  // Q(n+k, x) = Q(n+k-1, x) + e^{-x} x^{n+k-1} / (n+k-1)!
  double q = special::upper_gamma_reg(n, x);
  const double log_x = std::log(x);
  double mass = C, tail = C * q;
  const double rho = *std::max_element(r.begin(), r.end());
  int k = 1;
  for (; k <= 20000 && 1.0 - mass > 1e-14; ++k) {
    double g = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) g += (rk[i] *= r[i]);
    gam.push_back(g / k);
    double d = 0.0;
    for (int i = 1; i <= k; ++i) d += i * gam[i] * delta[k - i];
    delta.push_back(d / k);
    const int a = n + k - 1;
    q = std::min(1.0, q + std::exp(-x + a * log_x - special::log_factorial(a)));
    mass += C * delta[k];
    tail += C * delta[k] * q;
    if (C * delta[k] * rho < 1e-17 * (1.0 - rho) && delta[k] < delta[k - 1]) break;
  }
  if (1.0 - mass > 1e-10)
    throw ConvergenceError("interference_exceed_prob_erlang: mixture weights did not converge (scales too spread)");
  return std::clamp(tail, 0.0, 1.0);
}

}  // namespace cogmux
