#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "cogmux/analytics.hpp"
#include "cogmux/errors.hpp"
#include "cogmux/quadrature.hpp"
#include "cogmux/special_functions.hpp"

namespace cogmux::analytics {

using special::log_factorial;

namespace {

void check_betas(std::span<const double> betas, int N, const char* who) {
  if (betas.empty()) throw DomainError(std::string(who) + ": need at least one active primary");
  if (N < 1) throw DomainError(std::string(who) + ": N must be >= 1");
  for (double b : betas)
    if (!(b > 0)) throw DomainError(std::string(who) + ": beta must be > 0");
}

double gamma_pdf(double x, int k, double scale) {
  if (x == 0.0) return k == 1 ? 1.0 / scale : 0.0;
  return std::exp((k - 1) * std::log(x / scale) - x / scale - log_factorial(k - 1)) / scale;
}

}  // namespace

EdParams EdParams::from(const SystemConfig& cfg) {
  return {cfg.n_rx_antennas, cfg.samples, cfg.sensing_noise_var(), cfg.primary_signal_var};
}

double CrossCheck::gap() const { return std::abs(closed_form - quadrature); }

GainLaw min_gain_law(double x, std::span<const double> betas, int N) {
  check_betas(betas, N, "min_gain_law");
  if (!(x >= 0)) throw DomainError("min_gain_law: x must be >= 0");
  const std::size_t m = betas.size();
  std::vector<double> surv(m);
  for (std::size_t t = 0; t < m; ++t) surv[t] = special::upper_gamma_reg(N, x / betas[t]);
  double prod = 1.0;
  for (double s : surv) prod *= s;
  double pdf = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    double others = 1.0;
    for (std::size_t t = 0; t < m; ++t)
      if (t != s) others *= surv[t];
    pdf += gamma_pdf(x, N, betas[s]) * others;
  }
  return {pdf, std::clamp(1.0 - prod, 0.0, 1.0)};
}

double GammaMixture::pdf(double x) const {
  double s = 0.0;
  for (const auto& [K, w] : terms) s += w * gamma_pdf(x, K, 1.0 / rate);
  return s;
}

GammaMixture min_gain_mixture(std::span<const double> betas, int N) {
  check_betas(betas, N, "min_gain_mixture");
  const std::size_t m = betas.size();
  GammaMixture mix;
  for (double b : betas) mix.rate += 1.0 / b;
  std::vector<double> u(m);
  for (std::size_t t = 0; t < m; ++t) u[t] = 1.0 / (betas[t] * mix.rate);

  const std::size_t deg = (m - 1) * (N - 1);
  std::vector<double> w(deg + 1, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    // prod_{l != s} sum_{t<N} u_l^t / t!
    std::vector<double> poly{1.0};
    for (std::size_t l = 0; l < m; ++l) {
      if (l == s) continue;
      std::vector<double> f(N);
      f[0] = 1.0;
      for (int t = 1; t < N; ++t) f[t] = f[t - 1] * u[l] / t;
      std::vector<double> next(poly.size() + N - 1, 0.0);
      for (std::size_t a = 0; a < poly.size(); ++a)
        for (int b = 0; b < N; ++b) next[a + b] += poly[a] * f[b];
      poly.swap(next);
    }
    const double lus = N * std::log(u[s]);
    for (std::size_t T = 0; T < poly.size(); ++T) {
      if (poly[T] == 0.0) continue;
      // u_s^N Gamma(N+T)/Gamma(N) c_T
      w[T] += std::exp(lus + std::lgamma(N + static_cast<double>(T)) - std::lgamma(static_cast<double>(N)) +
                       std::log(poly[T]));
    }
  }
  for (std::size_t T = 0; T <= deg; ++T)
    if (w[T] > 0) mix.terms.emplace_back(N + static_cast<int>(T), w[T]);
  return mix;
}

double min_gain_pdf_expanded(double x, std::span<const double> betas, int N) {
  check_betas(betas, N, "min_gain_pdf_expanded");
  const int m = static_cast<int>(betas.size());
  double p = 0.0;
  for (double b : betas) p += 1.0 / b;
  double total = 0.0;
  std::vector<int> t(m, 0);
  for (int s = 0; s < m; ++s) {
    // enumerate t_l in [0, N) for l != s
    std::function<void(int, double, int)> rec = [&](int l, double coef, int sum_t) {
      if (l == m) {
        const int K = sum_t + N;
        total += coef * std::exp((K - 1) * std::log(x) - p * x);
        return;
      }
      if (l == s) {
        rec(l + 1, coef * std::pow(betas[s], -N) / std::tgamma(static_cast<double>(N)), sum_t);
        return;
      }
      for (int tl = 0; tl < N; ++tl)
        rec(l + 1, coef * std::pow(betas[l], -tl) / std::tgamma(tl + 1.0), sum_t + tl);
    };
    if (x == 0.0) {
      // only K = 1 terms survive, which needs N == 1
      if (N == 1) total += std::pow(betas[s], -1.0);
      continue;
    }
    rec(0, 1.0, 0);
  }
  return total;
}

double min_gain_upper_quantile(std::span<const double> betas, int N, double tail) {
  check_betas(betas, N, "min_gain_upper_quantile");
  const double bmin = *std::min_element(betas.begin(), betas.end());
  double x = bmin * std::max(1.0, static_cast<double>(N));
  auto surv = [&](double v) {
    double prod = 1.0;
    for (double b : betas) prod *= special::upper_gamma_reg(N, v / b);
    return prod;
  };
  for (int it = 0; surv(x) > tail; ++it) {
    if (it > 200) throw ConvergenceError("min_gain_upper_quantile: bracket growth failed");
    x *= 1.5;
  }
  return x;
}

double pf(double lambda, int N, int L, double N0) {
  if (!(lambda >= 0)) throw DomainError("pf: lambda must be >= 0");
  if (N < 1 || L < 1) throw DomainError("pf: N and L must be >= 1");
  if (!(N0 > 0)) throw DomainError("pf: N0 must be > 0");
  return special::upper_gamma_reg(N * L, lambda / (2.0 * N0));
}

double threshold_for_target_pf(double tau, int N, int L, double N0) {
  if (!(tau > 0 && tau <= 1)) throw DomainError("threshold_for_target_pf: tau must lie in (0, 1]");
  if (N < 1 || L < 1) throw DomainError("threshold_for_target_pf: N and L must be >= 1");
  if (!(N0 > 0)) throw DomainError("threshold_for_target_pf: N0 must be > 0");
  return 2.0 * N0 * special::inv_upper_gamma_reg(N * L, tau);
}

double pd_conditional(double y, const EdParams& ed, double lambda) {
  if (!(y >= 0)) throw DomainError("pd_conditional: y must be >= 0");
  if (!(lambda >= 0)) throw DomainError("pd_conditional: lambda must be >= 0");
  const double a = std::sqrt(2.0 * ed.L * ed.signal_var * y / ed.noise_var);
  const double b = std::sqrt(lambda / ed.noise_var);
  return special::marcum_q(ed.N * ed.L, a, b);
}

namespace {

// integral of x^{k-1} e^{-px} Q_m(a sqrt(x), b) dx, scaled by p^k / Gamma(k):
//   Q(m, b^2/2) + a^2 b^{2m} e^{-b^2/2} / (m! 2^m (a^2 + 2p)) sum_{l<k} (2p/(a^2+2p))^l 1F1(l+1, m+1; z)
// with z = a^2 b^2 / (2a^2 + 4p).
double marcum_gamma_average(int k, int m, double a, double b, double p) {
  const double b2 = b * b, a2 = a * a;
  double out = special::upper_gamma_reg(m, 0.5 * b2);
  if (a2 == 0.0 || b2 == 0.0) return out;
  const double z = a2 * b2 / (2.0 * a2 + 4.0 * p);
  const double logc = std::log(a2) + m * std::log(b2) - 0.5 * b2 - log_factorial(m) - m * std::log(2.0) -
                      std::log(a2 + 2.0 * p);
  const double lr = std::log(2.0 * p / (a2 + 2.0 * p));
  long double s = 0.0L;
  for (int l = 0; l < k; ++l) s += std::exp(static_cast<long double>(logc + l * lr + special::log_kummer_1f1(l, m, z)));
  return std::min(1.0, out + static_cast<double>(s));
}

quad::QuadratureOptions tight() {
  quad::QuadratureOptions o;
  o.abs_tol = 1e-13;
  o.rel_tol = 1e-11;
  o.max_intervals = 20000;
  return o;
}

std::vector<double> gain_breaks(std::span<const double> betas, int N, double tail) {
  const double hi = min_gain_upper_quantile(betas, N, tail);
  const GammaMixture mix = min_gain_mixture(betas, N);
  const double mean_scale = 1.0 / mix.rate;
  std::vector<double> br{0.0};
  for (double f : {0.05, 0.2, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    const double v = f * mean_scale * N;
    if (v < hi) br.push_back(v);
  }
  br.push_back(hi);
  return br;
}

}  // namespace

double pd_unconditional(const EdParams& ed, std::span<const double> betas, double lambda, Path path) {
  check_betas(betas, ed.N, "pd_unconditional");
  if (!(lambda >= 0)) throw DomainError("pd_unconditional: lambda must be >= 0");
  if (lambda == 0.0) return 1.0;
  const int m = ed.N * ed.L;
  const double a = std::sqrt(2.0 * ed.L * ed.signal_var / ed.noise_var);
  const double b = std::sqrt(lambda / ed.noise_var);
  if (path == Path::closed_form) {
    const GammaMixture mix = min_gain_mixture(betas, ed.N);
    long double s = 0.0L;
    for (const auto& [K, w] : mix.terms) s += w * marcum_gamma_average(K, m, a, b, mix.rate);
    return std::clamp(static_cast<double>(s), 0.0, 1.0);
  }
  auto f = [&](double x) {
    const GainLaw g = min_gain_law(x, betas, ed.N);
    if (g.pdf == 0.0) return 0.0;
    return special::marcum_q(m, a * std::sqrt(x), b) * g.pdf;
  };
  const double r = quad::integrate_pieces(f, gain_breaks(betas, ed.N, 1e-15), tight()).value;
  return std::clamp(r, 0.0, 1.0);
}

CrossCheck pd_unconditional_checked(const EdParams& ed, std::span<const double> betas, double lambda) {
  return {pd_unconditional(ed, betas, lambda, Path::closed_form), pd_unconditional(ed, betas, lambda, Path::quadrature),
          1e-6};
}

}  // namespace cogmux::analytics
