#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "cogmux/errors.hpp"

namespace cogmux::quad {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
  bool throw_on_failure = true;
};

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx), f2 = f(c + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace detail

/// Integrates f over [a, b]. f is called with doubles and must return doubles.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  QuadratureResult res;
  if (a == b) {
    res.converged = true;
    return res;
  }
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::gk15(f, a, b));
  res.evaluations = 15;
  double total = heap.top().value, err = heap.top().error;
  int intervals = 1;
  while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (intervals >= opt.max_intervals) break;
    const detail::Segment s = heap.top();
    heap.pop();
    const double mid = 0.5 * (s.a + s.b);
    const detail::Segment l = detail::gk15(f, s.a, mid);
    const detail::Segment r = detail::gk15(f, mid, s.b);
    res.evaluations += 30;
    total += l.value + r.value - s.value;
    err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
    ++intervals;
  }
  // recompute from the pieces to drop accumulated rounding in the running sums
  total = 0.0;
  err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  res.value = total;
  res.error = err;
  res.converged = err <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total)) * 1.0000001;
  if (!res.converged && opt.throw_on_failure)
    throw ConvergenceError("quadrature did not reach the requested tolerance");
  return res;
}

/// Integrates over consecutive breakpoints [x0,x1], [x1,x2], ... and sums.
template <class F>
QuadratureResult integrate_pieces(F&& f, const std::vector<double>& breaks,
                                  const QuadratureOptions& opt = {}) {
  QuadratureResult out;
  out.converged = true;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const QuadratureResult r = integrate(f, breaks[i], breaks[i + 1], opt);
    out.value += r.value;
    out.error += r.error;
    out.evaluations += r.evaluations;
    out.converged = out.converged && r.converged;
  }
  return out;
}

}  // namespace cogmux::quad
