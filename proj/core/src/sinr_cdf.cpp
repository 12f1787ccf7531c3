#include <algorithm>
#include <cmath>

#include "cogmux/analytics.hpp"
#include "cogmux/errors.hpp"
#include "cogmux/mmse_detector.hpp"
#include "cogmux/special_functions.hpp"

namespace cogmux::analytics {

namespace {

// P[J <= n] for every n, J = sum of independent Bernoulli(u_k).
std::vector<double> poisson_binomial_cdf(const std::vector<double>& u) {
  std::vector<double> pmf(u.size() + 1, 0.0);
  pmf[0] = 1.0;
  for (std::size_t k = 0; k < u.size(); ++k)
    for (std::size_t j = k + 2; j-- > 0;) {
      const double stay = pmf[j] * (1.0 - u[k]);
      pmf[j] = stay + (j ? pmf[j - 1] * u[k] : 0.0);
    }
  std::vector<double> cdf(pmf.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < pmf.size(); ++j) cdf[j] = std::min(1.0, acc += pmf[j]);
  return cdf;
}

std::vector<double> binomial_cdf(int n, double u) {
  std::vector<double> cdf(n + 1);
  double acc = 0.0;
  const double lu = std::log(u), l1u = std::log1p(-u);
  for (int j = 0; j <= n; ++j) {
    double lp = special::log_factorial(n) - special::log_factorial(j) - special::log_factorial(n - j);
    lp += (j ? j * lu : 0.0) + (n - j ? (n - j) * l1u : 0.0);
    acc += std::exp(lp);
    cdf[j] = std::min(1.0, acc);
  }
  return cdf;
}

// 1 - sum_{n=1}^N e^{-a} a^{n-1}/(n-1)! P[J <= N - n]
double phi_from_tail(double a, int N, const std::vector<double>& jcdf) {
  const int jmax = static_cast<int>(jcdf.size()) - 1;
  double s = 0.0;
  const double la = a > 0 ? std::log(a) : 0.0;
  for (int n = 1; n <= N; ++n) {
    const int lim = N - n;
    const double pj = lim >= jmax ? 1.0 : jcdf[lim];
    if (pj == 0.0) continue;
    const double lt = -a + (n > 1 ? (n - 1) * la : 0.0) - special::log_factorial(n - 1);
    s += std::exp(lt) * pj;
  }
  return std::clamp(1.0 - s, 0.0, 1.0);
}

}  // namespace

double cdf_phi(double y, std::span<const double> betas, int i, int N, double N0, PhiBranch branch) {
  if (!(y >= 0)) throw DomainError("cdf_phi: y must be >= 0");
  if (N < 1) throw DomainError("cdf_phi: N must be >= 1");
  if (i < 0 || i >= static_cast<int>(betas.size())) throw DomainError("cdf_phi: stream index out of range");
  if (y == 0.0) return 0.0;
  if (std::isinf(y)) return 1.0;
  const double bi = betas[i];
  const int M = static_cast<int>(betas.size());

  if (branch == PhiBranch::automatic) {
    bool same = true;
    for (double b : betas) same = same && std::abs(b - bi) <= 1e-12 * std::max(std::abs(b), std::abs(bi));
    branch = same ? PhiBranch::iid : PhiBranch::inid;
  }
  const double a = N0 * y / bi;
  if (branch == PhiBranch::iid) {
    if (M == 1) return phi_from_tail(a, N, {1.0});
    return phi_from_tail(a, N, binomial_cdf(M - 1, y / (1.0 + y)));
  }
  std::vector<double> u;
  for (int k = 0; k < M; ++k) {
    if (k == i) continue;
    const double x = betas[k] * y / bi;
    u.push_back(x / (1.0 + x));
  }
  return phi_from_tail(a, N, poisson_binomial_cdf(u));
}

double cdf_sinr(double x, std::span<const LinkBudget> links, int i, int N, double N0, PhiBranch branch) {
  if (i < 0 || i >= static_cast<int>(links.size())) throw DomainError("cdf_sinr: stream index out of range");
  if (x <= 0.0) return 0.0;
  const double kappa = sinr_bound(links[i]);
  if (x >= kappa) return 1.0;
  std::vector<double> betas;
  for (const auto& l : links) betas.push_back(l.beta);
  return cdf_phi(x / (kappa - x), betas, i, N, N0, branch);
}

}  // namespace cogmux::analytics
