#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cogmux/channel_model.hpp"

namespace cogmux {

/// A = C diag(beta) C^H + N0 I. Throws NumericalError if A is not positive definite.
Eigen::MatrixXcd covariance_A(const Eigen::MatrixXcd& C, std::span<const double> betas, double N0);

/// C = H diag(1/sqrt(beta)).
Eigen::MatrixXcd normalized_channel(const Eigen::MatrixXcd& H_hat, std::span<const LinkBudget> links);

/// phi = sqrt(beta) A^-1 c, through a Cholesky solve.
Eigen::VectorXcd mmse_weights(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& c, double beta);

/// MSE of stream i for weight phi: 1 + phi^H A phi - 2 Re(phi^H h_i), h_i = sqrt(beta) c.
double stream_mse(const Eigen::VectorXcd& phi, const Eigen::MatrixXcd& A, const Eigen::VectorXcd& h);

struct StreamSinr {
  double exact = 0.0;     // P^2 / E[R R^H] with the aging/estimation error diagonal
  double approx = 0.0;    // (g_var^2 / beta) c^H A^-1 c
  double woodbury = 0.0;  // kappa Phi / (1 + Phi)
  double phi = 0.0;       // beta c^H B^-1 c, B the leave-one-out covariance
};

/// Upper bound of approx/woodbury: kappa = (g_var / beta)^2.
double sinr_bound(const LinkBudget& link);

/// SINR of stream i (0-based) given C = normalized channel.
StreamSinr stream_sinr(const Eigen::MatrixXcd& C, std::span<const LinkBudget> links, double N0, int i);

struct DecodeOutput {
  Eigen::VectorXcd z;
  std::vector<double> sinr_exact;
  std::vector<double> sinr_approx;
};

/// Decodes the first m_c streams of y with MMSE weights built from H_hat.
DecodeOutput decode(const ChannelRealization& ch, std::span<const LinkBudget> links, double N0, int m_c,
                    const Eigen::VectorXcd& y);

/// Per-stream SINRs only (no received vector).
DecodeOutput sinr_per_stream(const ChannelRealization& ch, std::span<const LinkBudget> links, double N0, int m_c);

/// Unit-power QPSK symbol.
std::complex<double> qpsk_symbol(RngStream& rng);

}  // namespace cogmux
