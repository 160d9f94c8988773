#include "hdfe/baselines.hpp"

#include <cmath>

#include "doctest.h"
#include "hdfe/rng.hpp"

using namespace hdfe;

TEST_CASE("ridge fits exactly linear targets") {
  SeededRng rng(1);
  Eigen::MatrixXd x(50, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x(i / 3, i % 3) = rng.uniform(-1.0, 1.0);
  }
  Eigen::MatrixXd y = x * Eigen::Vector3d(2.0, -1.0, 0.5);
  y.array() += 0.25;

  const auto pred = ridge_regress(x, y, 1e-9, x);
  CHECK(r_squared(pred, y) >= 1.0 - 1e-6);
}

TEST_CASE("ridge is invariant to row permutation") {
  SeededRng rng(2);
  Eigen::MatrixXd x(40, 4), y(40, 2);
  for (Eigen::Index i = 0; i < 40; ++i) {
    for (Eigen::Index c = 0; c < 4; ++c) x(i, c) = rng.normal();
    y(i, 0) = rng.normal();
    y(i, 1) = rng.normal();
  }
  Eigen::MatrixXd xp = x, yp = y;
  for (Eigen::Index i = 0; i < 20; ++i) {
    xp.row(i).swap(xp.row(39 - i));
    yp.row(i).swap(yp.row(39 - i));
  }
  const auto m1 = ridge_fit(x, y, 0.1);
  const auto m2 = ridge_fit(xp, yp, 0.1);
  CHECK((m1.weights - m2.weights).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("dual path agrees with an explicit wide solve") {
  // d + 1 > n forces the kernelized path; check against the primal
  // normal equations computed directly.
  SeededRng rng(3);
  const int n = 30, d = 100;
  Eigen::MatrixXd x(n, d), y(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < d; ++c) x(i, c) = rng.normal();
    y(i, 0) = rng.normal();
  }
  const double lambda = 0.5;
  const auto model = ridge_fit(x, y, lambda);

  Eigen::MatrixXd xt(n, d + 1);
  xt.leftCols(d) = x;
  xt.col(d).setOnes();
  Eigen::MatrixXd gram = xt.transpose() * xt;
  gram.diagonal().array() += lambda;
  const Eigen::MatrixXd w_primal =
      gram.ldlt().solve(xt.transpose() * y);
  CHECK((model.weights - w_primal).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("vfa eval at and away from a known center") {
  const auto cfg = make_config(8192, 1, std::sqrt(40.0), 2.5, 5);
  const double tol = 4.0 / std::sqrt(8192.0);
  SampleSet s;
  s.inputs.resize(1, 1);
  s.inputs(0, 0) = 0.5;
  s.outputs = Eigen::VectorXd::Constant(1, 1.0);
  Eigen::VectorXd known = Eigen::VectorXd::Constant(1, 1.0);
  const auto enc = vfa_fit(cfg, s, 20.0, 1e-6, s.inputs, known);

  const double at = 0.5;
  CHECK(std::abs(vfa_eval(cfg, enc, std::span<const double>(&at, 1)) - 1.0) <=
        tol);
  const double far = 0.95;  // distance 0.45 >> 1/sqrt(gamma) ~ 0.22
  CHECK(std::abs(vfa_eval(cfg, enc, std::span<const double>(&far, 1))) <= tol);
}

TEST_CASE("vfa eval is linear in the encoding") {
  const auto cfg = make_config(1024, 1, std::sqrt(40.0), 2.5, 6);
  SampleSet s;
  s.inputs.resize(2, 1);
  s.inputs << 0.2, 0.7;
  s.outputs = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd c1(2), c2(2);
  c1 << 1.0, 0.0;
  c2 << 0.0, 1.0;
  const auto e1 = vfa_fit(cfg, s, 20.0, 1e-6, s.inputs, c1);
  const auto e2 = vfa_fit(cfg, s, 20.0, 1e-6, s.inputs, c2);
  VfaEncoding sum{HyperVector(e1.vector.values() + e2.vector.values()), 20.0,
                  cfg.fingerprint()};
  const double q = 0.44;
  const std::span<const double> qs(&q, 1);
  CHECK(vfa_eval(cfg, sum, qs) ==
        doctest::Approx(vfa_eval(cfg, e1, qs) + vfa_eval(cfg, e2, qs))
            .epsilon(1e-12));
}

TEST_CASE("vfa kernel identity holds for the matched width") {
  // <E_X(x), E_X(x')> under real cosine ~ exp(-alpha^2 t^2 / 2) = K with
  // gamma = alpha^2 / 2.
  const double gamma = 20.0;
  const auto cfg = make_config(8192, 1, std::sqrt(2.0 * gamma), 2.5, 7);
  const double tol = 4.0 / std::sqrt(8192.0);
  for (double t : {0.0, 0.05, 0.1, 0.2, 0.4}) {
    const double x0 = 0.3, x1 = 0.3 + t;
    const auto e0 = encode_input(cfg, std::span<const double>(&x0, 1));
    const auto e1 = encode_input(cfg, std::span<const double>(&x1, 1));
    CHECK(std::abs(real_cosine(e0, e1) - std::exp(-gamma * t * t)) <= tol);
  }
}

TEST_CASE("vfa reconstructs a pure kernel expansion") {
  // Function built exactly from K = exp(-20 (x - c)^2) bumps; estimation at
  // the generating centers recovers it well.
  const double gamma = 20.0;
  const auto cfg = make_config(8192, 1, std::sqrt(2.0 * gamma), 2.5, 8);
  SeededRng rng(9);
  Eigen::MatrixXd centers(10, 1);
  Eigen::VectorXd coef(10);
  for (int k = 0; k < 10; ++k) {
    centers(k, 0) = rng.uniform01();
    coef[k] = rng.uniform01();
  }
  auto f = [&](double x) {
    double acc = 0.0;
    for (int k = 0; k < 10; ++k) {
      acc += coef[k] * std::exp(-gamma * (x - centers(k, 0)) * (x - centers(k, 0)));
    }
    return acc;
  };
  SampleSet s;
  s.inputs.resize(400, 1);
  Eigen::VectorXd y(400);
  for (int i = 0; i < 400; ++i) {
    s.inputs(i, 0) = rng.uniform01();
    y[i] = f(s.inputs(i, 0)) + 0.01 * rng.normal();
  }
  s.outputs = y;
  const auto enc = vfa_fit(cfg, s, gamma, 1e-6 * 400, centers);

  double mae = 0.0;
  for (int q = 0; q < 100; ++q) {
    const double x = rng.uniform01();
    mae += std::abs(vfa_eval(cfg, enc, std::span<const double>(&x, 1)) - f(x));
  }
  CHECK(mae / 100.0 <= 0.05);
}

TEST_CASE("vfa zero outputs flag a degenerate encoding") {
  const auto cfg = make_config(512, 1, std::sqrt(40.0), 2.5, 10);
  SampleSet s;
  s.inputs.resize(5, 1);
  s.inputs << 0.1, 0.3, 0.5, 0.7, 0.9;
  s.outputs = Eigen::VectorXd::Zero(5);
  const auto enc = vfa_fit(cfg, s, 20.0, 1e-6 * 5);
  CHECK(enc.degenerate);
  CHECK(enc.vector.norm() == doctest::Approx(0.0));
}

TEST_CASE("encoding feature map splits real and imaginary parts") {
  FunctionEncoding enc{HyperVector(CVec::Ones(4)), 0, RefinementMode::kNone,
                       std::nullopt};
  const auto feats = encoding_features(enc);
  CHECK(feats.size() == 8);
  CHECK(feats.head(4).sum() == doctest::Approx(4.0));
  CHECK(feats.tail(4).sum() == doctest::Approx(0.0));
}
