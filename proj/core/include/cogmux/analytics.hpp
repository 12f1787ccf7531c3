#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cogmux/channel_model.hpp"
#include "cogmux/config.hpp"

namespace cogmux::analytics {

// ---- SINR statistics -------------------------------------------------------

enum class PhiBranch { automatic, inid, iid };

/// CDF of Phi_i = beta_i c_i^H B^-1 c_i, B = sum_{j != i} beta_j c_j c_j^H + N0 I.
/// `betas` covers all M simultaneously received links; i is 0-based.
/// automatic picks the identical-gain form when every beta matches within 1e-12.
double cdf_phi(double y, std::span<const double> betas, int i, int N, double N0,
               PhiBranch branch = PhiBranch::automatic);

/// F_SINR(x) = F_Phi(x / (kappa - x)) for x < kappa, 1 above; kappa = (g_var/beta)^2.
double cdf_sinr(double x, std::span<const LinkBudget> links, int i, int N, double N0,
                PhiBranch branch = PhiBranch::automatic);

// ---- min-gain law ----------------------------------------------------------

struct GainLaw {
  double pdf;
  double cdf;
};

/// Law of Y = min_t beta_t ||c_t||^2, c_t ~ CN(0, I_N). PDF from the
/// differentiated product, CDF = 1 - prod_t Q(N, x/beta_t).
GainLaw min_gain_law(double x, std::span<const double> betas, int N);

/// Y as a finite gamma mixture: f(x) = sum_K w_K p^K x^{K-1} e^{-px}/Gamma(K),
/// p = sum 1/beta_t. Weights sum to one.
struct GammaMixture {
  double rate = 0.0;
  std::vector<std::pair<int, double>> terms;  // (shape K, weight w_K)
  double pdf(double x) const;
};
GammaMixture min_gain_mixture(std::span<const double> betas, int N);

/// Multi-index expansion of the PDF (sum over t_l for l != s), for cross-checks.
double min_gain_pdf_expanded(double x, std::span<const double> betas, int N);

/// Smallest x with P[Y > x] < tail.
double min_gain_upper_quantile(std::span<const double> betas, int N, double tail);

// ---- detection -------------------------------------------------------------

/// Energy-detector parameters. noise_var is the sensing noise N0 + sigma_eps^2.
struct EdParams {
  int N = 1;
  int L = 1;
  double noise_var = 1.0;
  double signal_var = 1.0;

  static EdParams from(const SystemConfig& cfg);
};

double pf(double lambda, int N, int L, double N0);
double threshold_for_target_pf(double tau, int N, int L, double N0);

/// Q_{NL}(sqrt(2 L sigma_p^2 y / N0), sqrt(lambda / N0))
double pd_conditional(double y, const EdParams& ed, double lambda);

enum class Path { closed_form, quadrature };

/// Averaged over the min-gain law of the active primaries' betas.
double pd_unconditional(const EdParams& ed, std::span<const double> betas, double lambda,
                        Path path = Path::closed_form);

struct CrossCheck {
  double closed_form = 0.0;
  double quadrature = 0.0;
  double tolerance = 0.0;
  double gap() const;
  bool agree() const { return gap() <= tolerance; }
};

/// Both paths; agree() is |closed_form - quadrature| <= 1e-6.
CrossCheck pd_unconditional_checked(const EdParams& ed, std::span<const double> betas, double lambda);

// ---- AUC -------------------------------------------------------------------

/// 1 - e^{-L sigma^2 y/N0} sum_{l<NL} (NL)_l/(l! 2^{NL+l}) 1F1(NL+l, NL; L sigma^2 y/(2 N0))
double auc_conditional(double y, const EdParams& ed, Path path = Path::closed_form);
CrossCheck auc_conditional_checked(double y, const EdParams& ed);

enum class AucForm {
  kummer_reduced,   // gamma-mixture average of the Kummer-reduced conditional AUC
  eq_corrected,     // multi-index double sum with the shape K = sum t + N in (NL - K)_k and (1-X)^{K+l}
  eq_as_printed,    // same sum with sum t in place of K (kept for reporting only)
};

double auc_unconditional(const EdParams& ed, std::span<const double> betas, Path path = Path::closed_form,
                         AucForm form = AucForm::kummer_reduced);
/// agree() is |closed_form - quadrature| <= 1e-5.
CrossCheck auc_unconditional_checked(const EdParams& ed, std::span<const double> betas,
                                     AucForm form = AucForm::kummer_reduced);

// ---- outage ----------------------------------------------------------------

enum class OutageMode { subset_exact, paper_literal };

/// Outage of stream cfg.stream_index at SINR threshold gamma_th, with the
/// threshold lambda* designed for cfg.pf_target. Throws DomainError for m_p > 16.
double outage_probability(const SystemConfig& cfg, const SystemBudgets& budgets, double gamma_th,
                          OutageMode mode = OutageMode::subset_exact);

// ---- curves ----------------------------------------------------------------

struct AnalyticCurve {
  std::vector<double> x;
  std::vector<double> y;
  std::string metric;
  std::string config_digest;
};

}  // namespace cogmux::analytics
