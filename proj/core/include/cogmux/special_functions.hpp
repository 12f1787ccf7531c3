#pragma once

// Special-function kernels used by the closed forms. Integer first arguments
// only: every gamma-family call site has N, L or M as its shape.

namespace cogmux::special {

struct AccuracySpec {
  double abs_tol = 1e-12;
  long max_terms = 1'000'000;

  /// Throws DomainError unless abs_tol > 0 and max_terms >= 1.
  void check() const;
};

/// a(a+1)...(a+n-1); 1 for n == 0.
double pochhammer(double a, unsigned n);

/// ln(n!) for n >= 0.
double log_factorial(long n);

/// Q(a,x) = Gamma(a,x)/Gamma(a) = e^-x sum_{k<a} x^k/k!.
double upper_gamma_reg(int a, double x);

/// P(a,x) = 1 - Q(a,x), computed without cancellation when the value is small.
double lower_gamma_reg(int a, double x);

/// x with upper_gamma_reg(a, x) == q. Bracket grown geometrically, then bisection.
double inv_upper_gamma_reg(int a, double q, const AccuracySpec& acc = {});

/// J0. Power series for |x| < 8, Miller backward recurrence up to 50,
/// Hankel asymptotic expansion beyond.
double bessel_j0(double x);

/// Generalized Marcum Q_nu(a,b) as a Poisson mixture of gamma tails,
///   sum_k e^{-a^2/2} (a^2/2)^k / k! * Q(nu+k, b^2/2).
/// Summation starts at the Poisson mode and walks both ways; each side stops
/// once a geometric bound on the remaining weight falls below abs_tol/2.
double marcum_q(int nu, double a, double b, const AccuracySpec& acc = {});

struct SignedLog {
  double log_abs;  // -inf for an exact zero
  int sign;        // -1, 0, +1
  double value() const;
};

/// Result of the finite elementary form of 1F1(l+1, m+1; z).
struct KummerFiniteForm {
  SignedLog value;
  /// (sum of |terms|) / |result|; relative error is about cond * 1e-19.
  double condition;
};

/// The two-branch finite form of 1F1(l+1, m+1; z), no fallback.
/// l >= m: e^z * sum_{k<=l-m} (m-l)_k (-z)^k / (k! (m+1)_k).
/// l <  m: (m-1)! (-m)_{l+1} / (l! z^m) *
///         [sum_{k<m-l} (l-m+1)_k z^k/(k! (1-m)_k) - e^z sum_{k<=l} (-l)_k (-z)^k/(k! (1-m)_k)].
/// The l < m branch is undefined at z == 0 (condition = inf).
KummerFiniteForm kummer_finite_form(int l, int m, double z);

/// ln 1F1(l+1, m+1; z) for z >= 0 using the finite form when it is well
/// conditioned, positive-term series otherwise.
double log_kummer_1f1(int l, int m, double z);

/// 1F1(l+1, m+1; z) for integer l >= 0, m >= 0. Finite form first; when its
/// condition number exceeds 1e4 the l < m branch switches to the positive
/// series (directly for z >= 0, after Kummer's transformation for z < 0).
double kummer_1f1_finite(int l, int m, double z);

}  // namespace cogmux::special
