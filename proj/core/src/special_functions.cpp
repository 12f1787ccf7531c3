#include "cogmux/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cogmux/errors.hpp"

namespace cogmux::special {

namespace {

using ld = long double;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_shape(int a, const char* who) {
  if (a < 1) throw DomainError(std::string(who) + ": shape must be a positive integer");
}

}  // namespace

void AccuracySpec::check() const {
  if (!(abs_tol > 0.0)) throw DomainError("AccuracySpec: abs_tol must be > 0");
  if (max_terms < 1) throw DomainError("AccuracySpec: max_terms must be >= 1");
}

double SignedLog::value() const {
  if (sign == 0) return 0.0;
  return sign * std::exp(log_abs);
}

double pochhammer(double a, unsigned n) {
  double r = 1.0;
  for (unsigned k = 0; k < n; ++k) r *= a + k;
  return r;
}

double log_factorial(long n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double upper_gamma_reg(int a, double x) {
  require_shape(a, "upper_gamma_reg");
  if (std::isnan(x) || x < 0.0) throw DomainError("upper_gamma_reg: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;

  // Largest term of sum_{k<a} x^k/k! sits at k = min(a-1, floor x); sum
  // outward from there relative to it.
  const long kmax = std::min<long>(a - 1, static_cast<long>(std::floor(x)));
  const ld log_tmax = kmax * std::log(static_cast<ld>(x)) - std::lgamma(static_cast<ld>(kmax) + 1.0L);
  ld sum = 1.0L;
  ld t = 1.0L;
  for (long k = kmax; k > 0; --k) {
    t *= static_cast<ld>(k) / x;
    sum += t;
    if (t < 1e-21L * sum) break;
  }
  t = 1.0L;
  for (long k = kmax + 1; k < a; ++k) {
    t *= x / static_cast<ld>(k);
    sum += t;
    if (t < 1e-21L * sum) break;
  }
  const ld r = std::exp(-static_cast<ld>(x) + log_tmax + std::log(sum));
  return std::clamp(static_cast<double>(r), 0.0, 1.0);
}

double lower_gamma_reg(int a, double x) {
  require_shape(a, "lower_gamma_reg");
  if (std::isnan(x) || x < 0.0) throw DomainError("lower_gamma_reg: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x >= a) return 1.0 - upper_gamma_reg(a, x);
  // e^-x x^a / a! * sum_k x^k / ((a+1)...(a+k))
  ld sum = 1.0L, t = 1.0L;
  for (long k = 1; k < 100000; ++k) {
    t *= x / static_cast<ld>(a + k);
    sum += t;
    if (t < 1e-21L * sum) break;
  }
  const ld lp = -static_cast<ld>(x) + a * std::log(static_cast<ld>(x)) - std::lgamma(a + 1.0L) + std::log(sum);
  return std::clamp(static_cast<double>(std::exp(lp)), 0.0, 1.0);
}

double inv_upper_gamma_reg(int a, double q, const AccuracySpec& acc) {
  acc.check();
  require_shape(a, "inv_upper_gamma_reg");
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("inv_upper_gamma_reg: q must lie in (0, 1]");
  if (q == 1.0) return 0.0;

  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(a));
  int grow = 0;
  while (upper_gamma_reg(a, hi) > q) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 1100) throw ConvergenceError("inv_upper_gamma_reg: could not bracket root");
  }
  const long max_iter = std::min<long>(acc.max_terms, 2000);
  for (long it = 0;; ++it) {
    if (it >= max_iter) throw ConvergenceError("inv_upper_gamma_reg: bisection budget exhausted");
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (upper_gamma_reg(a, mid) > q)
      lo = mid;
    else
      hi = mid;
  }
  const double rl = std::abs(upper_gamma_reg(a, lo) - q);
  const double rh = std::abs(upper_gamma_reg(a, hi) - q);
  return rl <= rh ? lo : hi;
}

namespace {

double j0_series(double x) {
  const long double y = -0.25L * x * x;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 200; ++k) {
    term *= y / (static_cast<long double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-21L * std::max(1.0L, std::abs(sum))) break;
  }
  return static_cast<double>(sum);
}

double j0_miller(double x) {
  // J_{k-1} = (2k/x) J_k - J_{k+1}, normalized by J0 + 2 sum J_{2k} = 1.
  int m = static_cast<int>(x + 12.0 * std::cbrt(x) + 40.0);
  if (m % 2) ++m;
  long double jp1 = 0.0L, j = 1e-30L, norm = 0.0L;
  for (int k = m; k >= 1; --k) {
    const long double jm1 = (2.0L * k / x) * j - jp1;
    jp1 = j;
    j = jm1;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0L * j;
    if (std::abs(j) > 1e250L) {
      j *= 1e-250L;
      jp1 *= 1e-250L;
      norm *= 1e-250L;
    }
  }
  norm += j;
  return static_cast<double>(j / norm);
}

double j0_asymptotic(double x) {
  // a_k = prod_{i=1..k} (2i-1)^2 / (k! 8^k)
  double p = 1.0, q = 0.0;
  double a = 1.0;
  double prev = kInf;
  for (int k = 1; k < 80; ++k) {
    a *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
    if (std::abs(a) > prev) break;
    prev = std::abs(a);
    if (k % 2 == 0)
      p += ((k / 2) % 2 ? -a : a);
    else
      q += (((k - 1) / 2) % 2 ? a : -a);
    if (std::abs(a) < 1e-17) break;
  }
  const double c = std::cos(x), s = std::sin(x);
  const double cchi = (c + s) * std::numbers::sqrt2 * 0.5;  // cos(x - pi/4)
  const double schi = (s - c) * std::numbers::sqrt2 * 0.5;  // sin(x - pi/4)
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cchi - q * schi);
}

}  // namespace

double bessel_j0(double x) {
  const double ax = std::abs(x);
  if (std::isnan(ax)) return ax;
  if (ax < 8.0) return j0_series(ax);
  if (ax <= 50.0) return j0_miller(ax);
  return j0_asymptotic(ax);
}

double marcum_q(int nu, double a, double b, const AccuracySpec& acc) {
  acc.check();
  require_shape(nu, "marcum_q");
  if (std::isnan(a) || std::isnan(b) || a < 0.0 || b < 0.0)
    throw DomainError("marcum_q: a and b must be >= 0");
  if (b == 0.0) return 1.0;
  const double mu = 0.5 * a * a;
  const double x = 0.5 * b * b;
  if (mu == 0.0) return upper_gamma_reg(nu, x);
  if (std::isinf(x)) return 0.0;

  const double half_tol = 0.5 * acc.abs_tol;
  const long k0 = static_cast<long>(std::floor(mu));
  const double lmu = std::log(mu), lx = std::log(x);
  const double w0 = std::exp(-mu + k0 * lmu - log_factorial(k0));
  const double q0 = upper_gamma_reg(static_cast<int>(std::min<long>(nu + k0, std::numeric_limits<int>::max())), x);
  // log of e^-x x^n / n! at n = nu + k0
  const double ld0 = -x + (nu + k0) * lx - log_factorial(nu + k0);

  long terms = 1;
  ld sum = static_cast<ld>(w0) * q0;

  // upward: Q_{n+1} = Q_n + e^-x x^n/n!
  {
    double w = w0, qn = q0, logd = ld0;
    for (long k = k0;; ++k) {
      qn = std::min(1.0, qn + std::exp(logd));
      logd += lx - std::log(static_cast<double>(nu + k + 1));
      w *= mu / static_cast<double>(k + 1);
      sum += static_cast<ld>(w) * qn;
      if (++terms > acc.max_terms) throw ConvergenceError("marcum_q: term budget exceeded");
      const double ratio = mu / static_cast<double>(k + 2);
      if (ratio < 1.0 && w * ratio / (1.0 - ratio) < half_tol) break;
      if (w == 0.0) break;
    }
  }
  // downward: Q_n = Q_{n+1} - e^-x x^n/n!
  {
    double w = w0, qn = q0, logd = ld0;
    for (long k = k0; k > 0; --k) {
      logd += std::log(static_cast<double>(nu + k)) - lx;  // now at n = nu + k - 1
      qn = std::max(0.0, qn - std::exp(logd));
      w *= static_cast<double>(k) / mu;
      sum += static_cast<ld>(w) * qn;
      if (++terms > acc.max_terms) throw ConvergenceError("marcum_q: term budget exceeded");
      const double ratio = static_cast<double>(k - 1) / mu;
      if (w * ratio / (1.0 - ratio) < half_tol) break;
    }
  }
  return std::clamp(static_cast<double>(sum), 0.0, 1.0);
}

namespace {

// Running sum of a term sequence in long double with a shared log scale.
struct ScaledSum {
  ld sum = 0.0L;
  ld abs_sum = 0.0L;
  ld term = 1.0L;
  ld log_scale = 0.0L;

  void add_current() {
    sum += term;
    abs_sum += std::fabs(term);
  }
  void rescale() {
    const ld big = 1e300L;
    if (std::fabs(term) > big || abs_sum > big) {
      term /= big;
      sum /= big;
      abs_sum /= big;
      log_scale += std::log(big);
    }
  }
  SignedLog value() const {
    if (sum == 0.0L) return {-kInf, 0};
    return {static_cast<double>(std::log(std::fabs(sum)) + log_scale), sum > 0 ? 1 : -1};
  }
  double log_abs_sum() const { return static_cast<double>(std::log(abs_sum) + log_scale); }
};

// log|a - b| for signed logs.
SignedLog signed_sub(const SignedLog& a, const SignedLog& b) {
  if (b.sign == 0) return a;
  if (a.sign == 0) return {b.log_abs, -b.sign};
  const double L = std::max(a.log_abs, b.log_abs);
  const ld d = a.sign * std::exp(static_cast<ld>(a.log_abs - L)) -
               b.sign * std::exp(static_cast<ld>(b.log_abs - L));
  if (d == 0.0L) return {-kInf, 0};
  return {L + static_cast<double>(std::log(std::fabs(d))), d > 0 ? 1 : -1};
}

// Positive-term series of 1F1(a, b; z) for a, b > 0, z >= 0, in log form.
double log_1f1_positive_series(double a, double b, double z) {
  if (z == 0.0) return 0.0;
  ScaledSum s;
  s.add_current();
  for (long k = 0; k < 10'000'000; ++k) {
    s.term *= (a + k) * static_cast<ld>(z) / ((b + k) * (k + 1.0L));
    s.add_current();
    s.rescale();
    const ld ratio = (a + k + 1) * static_cast<ld>(z) / ((b + k + 1) * (k + 2.0L));
    if (ratio < 1.0L && s.term * ratio / (1.0L - ratio) < 1e-20L * s.sum) break;
  }
  return s.value().log_abs;
}

}  // namespace

KummerFiniteForm kummer_finite_form(int l, int m, double z) {
  if (l < 0 || m < 0) throw DomainError("kummer_finite_form: l and m must be >= 0");
  const ld zl = z;
  if (l >= m) {
    ScaledSum s;
    s.add_current();
    for (int k = 0; k < l - m; ++k) {
      s.term *= static_cast<ld>(m - l + k) * (-zl) / (static_cast<ld>(k + 1) * (m + 1 + k));
      s.add_current();
      s.rescale();
    }
    SignedLog v = s.value();
    const double cond = v.sign == 0 ? kInf : std::exp(s.log_abs_sum() - v.log_abs);
    if (v.sign != 0) v.log_abs += z;
    return {v, cond};
  }
  if (z == 0.0) return {{-kInf, 0}, kInf};

  // prefactor (m-1)! (-m)_{l+1} / (l! z^m); (-m)_{l+1} has sign (-1)^{l+1}
  const double log_pre = log_factorial(m - 1) + (log_factorial(m) - log_factorial(m - l - 1)) -
                         log_factorial(l) - m * std::log(std::abs(z));
  int sign_pre = (l + 1) % 2 ? -1 : 1;
  if (z < 0 && m % 2) sign_pre = -sign_pre;

  ScaledSum s1;
  s1.add_current();
  for (int k = 0; k < m - l - 1; ++k) {
    s1.term *= static_cast<ld>(l - m + 1 + k) * zl / (static_cast<ld>(k + 1) * (1 - m + k));
    s1.add_current();
    s1.rescale();
  }
  ScaledSum s2;
  s2.add_current();
  for (int k = 0; k < l; ++k) {
    s2.term *= static_cast<ld>(-l + k) * (-zl) / (static_cast<ld>(k + 1) * (1 - m + k));
    s2.add_current();
    s2.rescale();
  }
  SignedLog A = s1.value();
  SignedLog B = s2.value();
  if (B.sign != 0) B.log_abs += z;
  SignedLog diff = signed_sub(A, B);
  const double log_abs_terms =
      std::log(std::exp(s1.log_abs_sum() - std::max(s1.log_abs_sum(), s2.log_abs_sum() + z)) +
               std::exp(s2.log_abs_sum() + z - std::max(s1.log_abs_sum(), s2.log_abs_sum() + z))) +
      std::max(s1.log_abs_sum(), s2.log_abs_sum() + z);
  const double cond = diff.sign == 0 ? kInf : std::exp(log_abs_terms - diff.log_abs);
  SignedLog v{diff.log_abs + log_pre, diff.sign * sign_pre};
  if (diff.sign == 0) v = {-kInf, 0};
  return {v, cond};
}

namespace {
constexpr double kCondLimit = 1e4;
}

double log_kummer_1f1(int l, int m, double z) {
  if (z < 0.0) throw DomainError("log_kummer_1f1: z must be >= 0");
  if (l < 0 || m < 0) throw DomainError("log_kummer_1f1: l and m must be >= 0");
  if (z == 0.0) return 0.0;
  if (l >= m) return kummer_finite_form(l, m, z).value.log_abs;  // positive terms
  const KummerFiniteForm f = kummer_finite_form(l, m, z);
  if (f.value.sign > 0 && f.condition <= kCondLimit) return f.value.log_abs;
  return log_1f1_positive_series(l + 1.0, m + 1.0, z);
}

double kummer_1f1_finite(int l, int m, double z) {
  if (l < 0 || m < 0) throw DomainError("kummer_1f1_finite: l and m must be >= 0");
  if (z == 0.0) return 1.0;
  if (l >= m) return kummer_finite_form(l, m, z).value.value();
  const KummerFiniteForm f = kummer_finite_form(l, m, z);
  if (f.condition <= kCondLimit) return f.value.value();
  if (z > 0.0) return std::exp(log_1f1_positive_series(l + 1.0, m + 1.0, z));
  // Kummer: 1F1(a,b;z) = e^z 1F1(b-a, b; -z), b - a = m - l > 0
  return std::exp(z + log_1f1_positive_series(static_cast<double>(m - l), m + 1.0, -z));
}

}  // namespace cogmux::special
