#include "cogmux/channel_model.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "cogmux/errors.hpp"
#include "cogmux/special_functions.hpp"

namespace cogmux {

double compute_beta(double p, double d, double omega) {
  if (!(p > 0) || !(d > 0) || !(omega > 0)) throw DomainError("compute_beta: p, d and omega must be > 0");
  return p / std::pow(d, omega);
}

std::vector<double> compute_beta_hat(std::span<const double> betas, double N0) {
  if (betas.empty()) throw DomainError("compute_beta_hat: need at least one link");
  if (!(N0 >= 0)) throw DomainError("compute_beta_hat: N0 must be >= 0");
  const double denom = std::accumulate(betas.begin(), betas.end(), 0.0) + N0;
  std::vector<double> out;
  out.reserve(betas.size());
  for (double b : betas) {
    if (!(b > 0)) throw DomainError("compute_beta_hat: beta must be > 0");
    out.push_back(std::isinf(denom) ? 0.0 : b * b / denom);
  }
  return out;
}

double aging_alpha(double fd_ts) {
  if (!(fd_ts >= 0)) throw DomainError("aging_alpha: f_D T_s must be >= 0");
  return special::bessel_j0(2.0 * std::numbers::pi * fd_ts);
}

LinkBudget make_link(double beta, double beta_hat, double alpha) {
  LinkBudget l;
  const double a2 = alpha * alpha;
  l.beta = beta;
  l.beta_hat = beta_hat;
  l.g_var = (beta - beta_hat) * a2;
  l.eps_var = beta - l.g_var;  // = a2 beta_hat + (1 - a2) beta, keeps the sum exact
  l.b_r = l.g_var;
  return l;
}

std::vector<double> SystemBudgets::primary_betas() const {
  std::vector<double> out;
  for (const auto& l : primary()) out.push_back(l.beta);
  return out;
}

SystemBudgets compute_budgets(const SystemConfig& cfg) {
  SystemBudgets sb;
  sb.n_secondary = cfg.n_secondary();
  sb.alpha = cfg.aging_alpha;
  std::vector<double> betas;
  for (const auto& t : cfg.secondaries) betas.push_back(compute_beta(t.power_w, t.distance, t.pathloss_exponent));
  for (const auto& t : cfg.primaries) betas.push_back(compute_beta(t.power_w, t.distance, t.pathloss_exponent));
  std::vector<double> hat(betas.size(), 0.0);
  if (cfg.estimation == ChannelEstimation::mmse) hat = compute_beta_hat(betas, cfg.noise_var);
  for (std::size_t i = 0; i < betas.size(); ++i) sb.links.push_back(make_link(betas[i], hat[i], sb.alpha));
  return sb;
}

void fill_complex_normal(Eigen::Ref<Eigen::MatrixXcd> m, double var, RngStream& rng) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = rng.complex_normal(var);
}

ChannelRealization sample_channel(int n_rx, std::span<const LinkBudget> links, RngStream& rng) {
  const Eigen::Index M = static_cast<Eigen::Index>(links.size());
  ChannelRealization ch;
  ch.G.resize(n_rx, M);
  ch.E.resize(n_rx, M);
  for (Eigen::Index j = 0; j < M; ++j) {
    fill_complex_normal(ch.G.col(j), links[j].g_var, rng);
    fill_complex_normal(ch.E.col(j), links[j].eps_var, rng);
  }
  ch.H_hat = ch.G + ch.E;
  return ch;
}

}  // namespace cogmux
