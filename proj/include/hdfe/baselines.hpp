#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "hdfe/codec.hpp"
#include "hdfe/encoding.hpp"

namespace hdfe {

// Vector function architecture encoding: F = sum_k coef_k E_X(x_k) for a
// function assumed to be a kernel mixture over the kernel induced by E_X.
struct VfaEncoding {
  HyperVector vector;
  double gamma = 0.0;  // RBF exponent of the assumed kernel
  std::uint64_t config_fingerprint = 0;
  bool degenerate = false;  // all coefficients zero
};

// Fits the kernel mixture coefficients by kernel ridge regression with
// K(x, x') = exp(-gamma (x - x')^2) and superposes the input encodings.
// Centers default to the sample inputs themselves; passing explicit
// centers restricts the fit to that span (the assumed functional form).
// Known coefficients can be supplied instead of estimating.
// gamma must match cfg's receptive field (gamma = alpha^2 / 2) for the
// readout identity <E_X(x), E_X(x')> ~= K(x, x') to hold.
VfaEncoding vfa_fit(const EncodingConfig& cfg, const SampleSet& samples,
                    double gamma, double ridge_lambda,
                    const std::optional<Eigen::MatrixXd>& centers = std::nullopt,
                    const std::optional<Eigen::VectorXd>& known_coeffs =
                        std::nullopt);

// Readout: f_hat(x0) = Re<F, E_X(x0)> / N.
double vfa_eval(const EncodingConfig& cfg, const VfaEncoding& enc,
                std::span<const double> x0);

Eigen::VectorXd vfa_eval_batch(const EncodingConfig& cfg,
                               const VfaEncoding& enc,
                               const Eigen::MatrixXd& queries);

// Ridge regression with a bias column, closed form. Solves the primal
// normal equations when the feature count allows it and the kernelized
// dual otherwise, so wide feature matrices (complex encodings split into
// real and imaginary parts) stay tractable.
struct RidgeModel {
  Eigen::MatrixXd weights;  // (d + 1) x k, last row is the bias
  double lambda = 0.0;
};

RidgeModel ridge_fit(const Eigen::MatrixXd& features,
                     const Eigen::MatrixXd& targets, double lambda);
Eigen::MatrixXd ridge_predict(const RidgeModel& model,
                              const Eigen::MatrixXd& features);
// Fit + predict in one call.
Eigen::MatrixXd ridge_regress(const Eigen::MatrixXd& features,
                              const Eigen::MatrixXd& targets, double lambda,
                              const Eigen::MatrixXd& test_features);

// Coefficient of determination averaged over target columns.
double r_squared(const Eigen::MatrixXd& predictions,
                 const Eigen::MatrixXd& targets);

// Feature map for regression on encodings: concatenated real and
// imaginary parts of the (unit-norm) encoding vector.
Eigen::RowVectorXd encoding_features(const FunctionEncoding& enc);

}  // namespace hdfe
