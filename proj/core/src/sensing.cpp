#include "cogmux/sensing.hpp"

#include <cmath>
#include <limits>

#include "cogmux/errors.hpp"

namespace cogmux {

double energy_statistic(const Eigen::MatrixXcd& r) { return r.squaredNorm(); }

Hypothesis ed_decide(double T, double lambda) {
  if (lambda < 0) throw DomainError("ed_decide: lambda must be >= 0");
  return T > lambda ? Hypothesis::H1 : Hypothesis::H0;
}

ResidualSignal residual_signal(const SystemConfig& cfg, const SystemBudgets& budgets,
                               std::span<const int> active, RngStream& rng) {
  return residual_signal(cfg, budgets, active, rng, cfg.sensing_model);
}

ResidualSignal residual_signal(const SystemConfig& cfg, const SystemBudgets& budgets,
                               std::span<const int> active, RngStream& rng, SensingModel model) {
  const int N = cfg.n_rx_antennas, L = cfg.samples;
  const auto prim = budgets.primary();
  ResidualSignal out;
  out.noise_var_used = cfg.sensing_noise_var();

  Eigen::MatrixXcd H(N, static_cast<Eigen::Index>(active.size()));
  for (std::size_t k = 0; k < active.size(); ++k) {
    const int i = active[k];
    if (i < 0 || i >= static_cast<int>(prim.size())) throw DomainError("residual_signal: primary index out of range");
    Eigen::VectorXcd c(N);
    fill_complex_normal(c, 1.0, rng);
    H.col(k) = std::sqrt(prim[i].beta) * c;
  }
  if (model == SensingModel::weakest && H.cols() > 1) {
    Eigen::Index best = 0;
    double e = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < H.cols(); ++k)
      if (const double v = H.col(k).squaredNorm(); v < e) e = v, best = k;
    H = H.col(best).eval();
  }

  const double sp = std::sqrt(cfg.primary_signal_var);
  out.r.resize(N, L);
  for (int l = 0; l < L; ++l) {
    Eigen::VectorXcd w(N);
    fill_complex_normal(w, out.noise_var_used, rng);
    for (Eigen::Index k = 0; k < H.cols(); ++k) {
      const std::complex<double> s = cfg.primary_symbols == SymbolModel::constant_modulus
                                         ? sp * rng.unit_phase()
                                         : rng.complex_normal(cfg.primary_signal_var);
      w += H.col(k) * s;
    }
    out.r.col(l) = w;
  }
  return out;
}

}  // namespace cogmux
