#include <algorithm>
#include <cmath>

#include "cogmux/analytics.hpp"
#include "cogmux/errors.hpp"
#include "cogmux/quadrature.hpp"
#include "cogmux/special_functions.hpp"

namespace cogmux::analytics {

using special::log_factorial;

namespace {

// ln[(NL)_l / (l! 2^{NL+l})]
double log_c(int nl, int l) {
  return std::lgamma(static_cast<double>(nl + l)) - std::lgamma(static_cast<double>(nl)) - log_factorial(l) -
         (nl + l) * std::log(2.0);
}

double chi2_pdf(double x, int dof_half) {
  // chi-square with 2*dof_half degrees of freedom
  if (x == 0.0) return dof_half == 1 ? 0.5 : 0.0;
  return 0.5 * std::exp((dof_half - 1) * std::log(0.5 * x) - 0.5 * x - log_factorial(dof_half - 1));
}

quad::QuadratureOptions tight() {
  quad::QuadratureOptions o;
  o.abs_tol = 1e-13;
  o.rel_tol = 1e-11;
  o.max_intervals = 20000;
  return o;
}

}  // namespace

double auc_conditional(double y, const EdParams& ed, Path path) {
  if (!(y >= 0)) throw DomainError("auc_conditional: y must be >= 0");
  const int nl = ed.N * ed.L;
  const double g = ed.L * ed.signal_var / (2.0 * ed.noise_var);
  const double z = g * y;
  if (path == Path::closed_form) {
    long double s = 0.0L;
    for (int l = 0; l < nl; ++l)
      s += std::exp(static_cast<long double>(log_c(nl, l) - 2.0 * z + special::log_kummer_1f1(nl + l - 1, nl - 1, z)));
    return std::clamp(1.0 - static_cast<double>(s), 0.0, 1.0);
  }
  const double a = std::sqrt(2.0 * ed.L * ed.signal_var * y / ed.noise_var);
  auto f = [&](double lam) { return special::marcum_q(nl, a, std::sqrt(lam)) * chi2_pdf(lam, nl); };
  const double hi = 2.0 * special::inv_upper_gamma_reg(nl, 1e-17);
  std::vector<double> br{0.0};
  for (double v : {0.5 * nl, 1.0 * nl, 2.0 * nl, 3.0 * nl})
    if (v < hi) br.push_back(v);
  br.push_back(hi);
  return std::clamp(quad::integrate_pieces(f, br, tight()).value, 0.0, 1.0);
}

CrossCheck auc_conditional_checked(double y, const EdParams& ed) {
  return {auc_conditional(y, ed, Path::closed_form), auc_conditional(y, ed, Path::quadrature), 1e-6};
}

namespace {

double auc_kummer_reduced(const EdParams& ed, const GammaMixture& mix) {
  const int nl = ed.N * ed.L;
  const double g = ed.L * ed.signal_var / (2.0 * ed.noise_var);
  const double p = mix.rate;
  if (g == 0.0) return 0.5;
  const double lth = std::log(g / (p + g)), lrho = std::log(p / (p + g));
  long double s = 0.0L;
  for (int l = 0; l < nl; ++l) {
    const double lc = log_c(nl, l);
    for (const auto& [K, w] : mix.terms) {
      const double lw = std::log(w) + K * lrho;
      for (int k = 0; k <= l; ++k) {
        const double lt = log_factorial(l) - log_factorial(k) - log_factorial(l - k) +
                          std::lgamma(static_cast<double>(K + k)) - std::lgamma(static_cast<double>(K)) -
                          std::lgamma(static_cast<double>(nl + k)) + std::lgamma(static_cast<double>(nl)) + k * lth;
        s += std::exp(static_cast<long double>(lc + lw + lt));
      }
    }
  }
  return std::clamp(1.0 - static_cast<double>(s), 0.0, 1.0);
}

// Multi-index double sum; `printed` uses sum t where the shape K belongs.
double auc_double_sum(const EdParams& ed, const GammaMixture& mix, bool printed) {
  using ld = long double;
  const int nl = ed.N * ed.L;
  const ld g = ed.L * ed.signal_var / (2.0L * ed.noise_var);
  const ld p = mix.rate;
  const ld X = g / (p + 2 * g);
  ld s = 0.0L;
  for (int l = 0; l < nl; ++l) {
    const ld cl = std::exp(static_cast<ld>(log_c(nl, l)));
    for (const auto& [K, w] : mix.terms) {
      const int B = printed ? K - ed.N : K;
      const ld base = cl * static_cast<ld>(w) * std::pow(p / (p + 2 * g), static_cast<ld>(K)) /
                      std::pow(1.0L - X, static_cast<ld>(B + l));
      ld t = 1.0L, inner = 1.0L;
      for (int k = 0; k < l; ++k) {
        // ratio of consecutive (-l)_k (NL-B)_k X^k / (k! (NL)_k)
        t *= static_cast<ld>(-l + k) * static_cast<ld>(nl - B + k) * X / (static_cast<ld>(k + 1) * (nl + k));
        inner += t;
      }
      s += base * inner;
    }
  }
  return static_cast<double>(1.0L - s);
}

}  // namespace

double auc_unconditional(const EdParams& ed, std::span<const double> betas, Path path, AucForm form) {
  const GammaMixture mix = min_gain_mixture(betas, ed.N);
  if (path == Path::closed_form) {
    switch (form) {
      case AucForm::kummer_reduced: return auc_kummer_reduced(ed, mix);
      case AucForm::eq_corrected: return auc_double_sum(ed, mix, false);
      case AucForm::eq_as_printed: return auc_double_sum(ed, mix, true);
    }
  }
  if (ed.signal_var == 0.0) return 0.5;
  auto f = [&](double y) {
    const GainLaw gl = min_gain_law(y, betas, ed.N);
    if (gl.pdf == 0.0) return 0.0;
    return auc_conditional(y, ed, Path::closed_form) * gl.pdf;
  };
  const double hi = min_gain_upper_quantile(betas, ed.N, 1e-15);
  const double sc = ed.N / mix.rate;
  std::vector<double> br{0.0};
  for (double fct : {0.05, 0.2, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0})
    if (fct * sc < hi) br.push_back(fct * sc);
  br.push_back(hi);
  quad::QuadratureOptions o = tight();
  return std::clamp(quad::integrate_pieces(f, br, o).value, 0.0, 1.0);
}

CrossCheck auc_unconditional_checked(const EdParams& ed, std::span<const double> betas, AucForm form) {
  return {auc_unconditional(ed, betas, Path::closed_form, form), auc_unconditional(ed, betas, Path::quadrature), 1e-5};
}

}  // namespace cogmux::analytics
