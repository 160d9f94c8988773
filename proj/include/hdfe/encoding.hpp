#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "hdfe/hypervector.hpp"

namespace hdfe {

// Fractional power encoding parameters. The phase matrices are fully
// determined by (seed, N, m): phi is filled row-major from the seeded
// stream, then psi, so a config regenerates bit-exactly anywhere.
//
// Inputs are expected in [0,1]^m and outputs in [0,1]; the maps are
// defined for all reals, so out-of-range values are a caller-side
// concern (the CLI warns, it does not reject).
class EncodingConfig {
 public:
  EncodingConfig(Eigen::Index n_dim, Eigen::Index in_dim, double alpha,
                 double beta, std::uint64_t seed);

  Eigen::Index dim() const { return n_; }          // N, embedding dimension
  Eigen::Index input_dim() const { return m_; }    // m
  double alpha() const { return alpha_; }          // input receptive-field scale
  double beta() const { return beta_; }            // output scale
  std::uint64_t seed() const { return seed_; }
  const Eigen::MatrixXd& phi() const { return phi_; }  // N x m
  const Eigen::VectorXd& psi() const { return psi_; }  // N

  // Hash of (format version, N, m, alpha, beta, seed). Encodings carry it
  // so a mismatched config is caught at decode time.
  std::uint64_t fingerprint() const;

 private:
  Eigen::Index n_;
  Eigen::Index m_;
  double alpha_;
  double beta_;
  std::uint64_t seed_;
  Eigen::MatrixXd phi_;
  Eigen::VectorXd psi_;
};

EncodingConfig make_config(Eigen::Index n_dim, Eigen::Index in_dim,
                           double alpha, double beta, std::uint64_t seed);

// Fingerprint of the defining parameters without materializing the phase
// matrices.
std::uint64_t config_fingerprint(Eigen::Index n_dim, Eigen::Index in_dim,
                                 double alpha, double beta,
                                 std::uint64_t seed);

// E_X(x) = exp(i * alpha * phi x / m), a phase vector.
HyperVector encode_input(const EncodingConfig& cfg, std::span<const double> x);

// E_Y(y) = exp(i * beta * psi y), a phase vector.
HyperVector encode_output(const EncodingConfig& cfg, double y);

// Phase helpers used by the batch paths: encode_* is exp(i * phases).
Eigen::VectorXd input_phases(const EncodingConfig& cfg,
                             std::span<const double> x);
Eigen::VectorXd output_phases(const EncodingConfig& cfg, double y);

// Row i = phases of E_X(inputs.row(i)); inputs is n x m.
Eigen::MatrixXd batch_input_phases(const EncodingConfig& cfg,
                                   const Eigen::MatrixXd& inputs);

// Analytic N -> infinity limit of the quad similarity between two
// encodings whose per-element phase difference has standard deviation
// gamma * dist: exp(-gamma^2 dist^2). For E_X with m = 1, gamma = alpha;
// for E_Y, gamma = beta. The real-cosine convention converges to the
// square root of this value.
double expected_kernel(double gamma, double dist);

}  // namespace hdfe
