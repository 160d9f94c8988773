#include "hdfe/baselines.hpp"

#include <cmath>

#include "hdfe/errors.hpp"
#include "hdfe/parallel.hpp"

namespace hdfe {

VfaEncoding vfa_fit(const EncodingConfig& cfg, const SampleSet& samples,
                    double gamma, double ridge_lambda,
                    const std::optional<Eigen::MatrixXd>& centers,
                    const std::optional<Eigen::VectorXd>& known_coeffs) {
  if (samples.count() < 1) throw ValueError("vfa_fit: empty sample set");
  if (!samples.outputs) throw ValueError("vfa_fit: outputs required");
  if (samples.inputs.cols() != 1) {
    throw ValueError("vfa_fit: scalar inputs expected");
  }
  if (!(gamma > 0.0)) throw ValueError("vfa_fit: gamma must be > 0");

  const Eigen::MatrixXd& ctr = centers ? *centers : samples.inputs;
  const Eigen::Index m = ctr.rows();

  Eigen::VectorXd coef;
  if (known_coeffs) {
    if (known_coeffs->size() != m) {
      throw DimensionError("vfa_fit: " + std::to_string(known_coeffs->size()) +
                           " coefficients for " + std::to_string(m) +
                           " centers");
    }
    coef = *known_coeffs;
  } else {
    // Design matrix Phi_ik = K(x_i, c_k); ridge-solve the normal
    // equations. With centers == inputs this is plain kernel ridge.
    const Eigen::Index n = samples.count();
    Eigen::MatrixXd design(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < m; ++k) {
        const double dx = samples.inputs(i, 0) - ctr(k, 0);
        design(i, k) = std::exp(-gamma * dx * dx);
      }
    }
    const Eigen::MatrixXd gram =
        design.transpose() * design +
        ridge_lambda * Eigen::MatrixXd::Identity(m, m);
    Eigen::LDLT<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) {
      throw ValueError("vfa_fit: kernel system not solvable");
    }
    coef = solver.solve(design.transpose() * *samples.outputs);
  }

  SampleSet center_set;
  center_set.inputs = ctr;
  const Eigen::MatrixXcd ex_rows = sample_encodings(cfg, center_set);
  CVec f = CVec::Zero(cfg.dim());
  for (Eigen::Index k = 0; k < m; ++k) {
    f += coef[k] * ex_rows.row(k).transpose();
  }
  const bool degenerate = coef.lpNorm<Eigen::Infinity>() == 0.0;
  return VfaEncoding{HyperVector(std::move(f)), gamma, cfg.fingerprint(),
                     degenerate};
}

double vfa_eval(const EncodingConfig& cfg, const VfaEncoding& enc,
                std::span<const double> x0) {
  if (enc.config_fingerprint != cfg.fingerprint()) {
    throw ConfigError("vfa_eval: encoding was produced under a different config");
  }
  const HyperVector ex = encode_input(cfg, x0);
  return inner(enc.vector, ex).real() / static_cast<double>(cfg.dim());
}

Eigen::VectorXd vfa_eval_batch(const EncodingConfig& cfg,
                               const VfaEncoding& enc,
                               const Eigen::MatrixXd& queries) {
  if (enc.config_fingerprint != cfg.fingerprint()) {
    throw ConfigError("vfa_eval_batch: encoding was produced under a different config");
  }
  SampleSet qs;
  qs.inputs = queries;
  const Eigen::MatrixXcd ex_rows = sample_encodings(cfg, qs);
  Eigen::VectorXd out(queries.rows());
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    out[i] = ex_rows.row(i).transpose().dot(enc.vector.values()).real() /
             static_cast<double>(cfg.dim());
  }
  return out;
}

RidgeModel ridge_fit(const Eigen::MatrixXd& features,
                     const Eigen::MatrixXd& targets, double lambda) {
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();
  if (n < 1 || d < 1) throw ValueError("ridge_fit: degenerate dimensions");
  if (targets.rows() != n) {
    throw DimensionError("ridge_fit: " + std::to_string(targets.rows()) +
                         " target rows for " + std::to_string(n) + " samples");
  }
  if (lambda < 0.0) throw ValueError("ridge_fit: negative lambda");

  RidgeModel model;
  model.lambda = lambda;
  if (d + 1 <= n) {
    // Primal: (X~^T X~ + lambda I)^-1 X~^T Y with X~ = [X, 1].
    Eigen::MatrixXd xt(n, d + 1);
    xt.leftCols(d) = features;
    xt.col(d).setOnes();
    Eigen::MatrixXd gram = xt.transpose() * xt;
    gram.diagonal().array() += lambda;
    model.weights = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(
        xt.transpose() * targets);
  } else {
    // Dual: alpha = (X~ X~^T + lambda I)^-1 Y, w = X~^T alpha.
    Eigen::MatrixXd xt(n, d + 1);
    xt.leftCols(d) = features;
    xt.col(d).setOnes();
    Eigen::MatrixXd gram = xt * xt.transpose();
    gram.diagonal().array() += lambda;
    const Eigen::MatrixXd alpha =
        Eigen::LDLT<Eigen::MatrixXd>(gram).solve(targets);
    model.weights = xt.transpose() * alpha;
  }
  return model;
}

Eigen::MatrixXd ridge_predict(const RidgeModel& model,
                              const Eigen::MatrixXd& features) {
  const Eigen::Index d = model.weights.rows() - 1;
  if (features.cols() != d) {
    throw DimensionError("ridge_predict: feature dimension mismatch");
  }
  return (features * model.weights.topRows(d)).rowwise() +
         model.weights.row(d);
}

Eigen::MatrixXd ridge_regress(const Eigen::MatrixXd& features,
                              const Eigen::MatrixXd& targets, double lambda,
                              const Eigen::MatrixXd& test_features) {
  return ridge_predict(ridge_fit(features, targets, lambda), test_features);
}

double r_squared(const Eigen::MatrixXd& predictions,
                 const Eigen::MatrixXd& targets) {
  if (predictions.rows() != targets.rows() ||
      predictions.cols() != targets.cols()) {
    throw DimensionError("r_squared: shape mismatch");
  }
  double acc = 0.0;
  for (Eigen::Index c = 0; c < targets.cols(); ++c) {
    const double mean = targets.col(c).mean();
    const double ss_res = (targets.col(c) - predictions.col(c)).squaredNorm();
    const double ss_tot =
        (targets.col(c).array() - mean).matrix().squaredNorm();
    acc += ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  }
  return acc / static_cast<double>(targets.cols());
}

Eigen::RowVectorXd encoding_features(const FunctionEncoding& enc) {
  const CVec& v = enc.vector.values();
  Eigen::RowVectorXd out(2 * v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    out[k] = v[k].real();
    out[v.size() + k] = v[k].imag();
  }
  return out;
}

}  // namespace hdfe
