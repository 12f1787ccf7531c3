#include "cogmux/mmse_detector.hpp"

#include <cmath>

#include "cogmux/errors.hpp"

namespace cogmux {

namespace {

Eigen::LLT<Eigen::MatrixXcd> factor(const Eigen::MatrixXcd& A) {
  Eigen::LLT<Eigen::MatrixXcd> llt(A);
  if (llt.info() != Eigen::Success) throw NumericalError("covariance matrix is not positive definite");
  return llt;
}

Eigen::VectorXd beta_vec(std::span<const LinkBudget> links) {
  Eigen::VectorXd b(links.size());
  for (std::size_t j = 0; j < links.size(); ++j) b[j] = links[j].beta;
  return b;
}

}  // namespace

Eigen::MatrixXcd covariance_A(const Eigen::MatrixXcd& C, std::span<const double> betas, double N0) {
  if (static_cast<std::size_t>(C.cols()) != betas.size())
    throw DomainError("covariance_A: column count does not match betas");
  const Eigen::Map<const Eigen::VectorXd> b(betas.data(), betas.size());
  Eigen::MatrixXcd A = C * b.cwiseSqrt().asDiagonal() * (C * b.cwiseSqrt().asDiagonal()).adjoint();
  A.diagonal().array() += N0;
  A = 0.5 * (A + A.adjoint()).eval();
  factor(A);
  return A;
}

Eigen::MatrixXcd normalized_channel(const Eigen::MatrixXcd& H_hat, std::span<const LinkBudget> links) {
  return H_hat * beta_vec(links).cwiseSqrt().cwiseInverse().asDiagonal();
}

Eigen::VectorXcd mmse_weights(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& c, double beta) {
  return std::sqrt(beta) * factor(A).solve(c);
}

double stream_mse(const Eigen::VectorXcd& phi, const Eigen::MatrixXcd& A, const Eigen::VectorXcd& h) {
  return 1.0 + phi.dot(A * phi).real() - 2.0 * phi.dot(h).real();
}

double sinr_bound(const LinkBudget& l) {
  const double r = l.g_var / l.beta;
  return r * r;
}

StreamSinr stream_sinr(const Eigen::MatrixXcd& C, std::span<const LinkBudget> links, double N0, int i) {
  if (i < 0 || i >= C.cols()) throw DomainError("stream_sinr: stream index out of range");
  const Eigen::VectorXd b = beta_vec(links);
  std::vector<double> bv(b.data(), b.data() + b.size());
  const Eigen::MatrixXcd A = covariance_A(C, bv, N0);
  const auto llt = factor(A);
  const Eigen::VectorXcd c = C.col(i);
  const Eigen::VectorXcd u = llt.solve(c);
  const double q = c.dot(u).real();
  const LinkBudget& li = links[i];
  const double g = li.g_var;

  StreamSinr s;
  // E[R R^H] covariance: beta_j on j != i, eps_var on the desired column
  Eigen::VectorXd d = b;
  d[i] = li.eps_var;
  const Eigen::VectorXcd Su = C * (d.asDiagonal() * (C.adjoint() * u)) + N0 * u;
  const double denom = li.beta * u.dot(Su).real();
  s.exact = denom > 0 ? (g * q) * (g * q) / denom : 0.0;
  s.approx = g * g / li.beta * q;

  Eigen::MatrixXcd B = A - li.beta * c * c.adjoint();
  B = 0.5 * (B + B.adjoint()).eval();
  s.phi = li.beta * c.dot(factor(B).solve(c)).real();
  s.woodbury = sinr_bound(li) * s.phi / (1.0 + s.phi);
  return s;
}

DecodeOutput sinr_per_stream(const ChannelRealization& ch, std::span<const LinkBudget> links, double N0, int m_c) {
  const Eigen::MatrixXcd C = normalized_channel(ch.H_hat, links);
  DecodeOutput out;
  for (int i = 0; i < m_c; ++i) {
    const StreamSinr s = stream_sinr(C, links, N0, i);
    out.sinr_exact.push_back(s.exact);
    out.sinr_approx.push_back(s.approx);
  }
  return out;
}

DecodeOutput decode(const ChannelRealization& ch, std::span<const LinkBudget> links, double N0, int m_c,
                    const Eigen::VectorXcd& y) {
  DecodeOutput out = sinr_per_stream(ch, links, N0, m_c);
  const Eigen::MatrixXcd C = normalized_channel(ch.H_hat, links);
  const Eigen::VectorXd b = beta_vec(links);
  std::vector<double> bv(b.data(), b.data() + b.size());
  const Eigen::MatrixXcd A = covariance_A(C, bv, N0);
  const auto llt = factor(A);
  out.z.resize(m_c);
  for (int i = 0; i < m_c; ++i) {
    const Eigen::VectorXcd phi = std::sqrt(b[i]) * llt.solve(C.col(i));
    out.z[i] = phi.dot(y);
  }
  return out;
}

std::complex<double> qpsk_symbol(RngStream& rng) {
  const std::uint64_t r = rng.bits();
  const double a = 1.0 / std::sqrt(2.0);
  return {(r & 1) ? a : -a, (r & 2) ? a : -a};
}

}  // namespace cogmux
