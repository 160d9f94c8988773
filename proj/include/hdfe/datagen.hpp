#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "hdfe/codec.hpp"
#include "hdfe/rng.hpp"

namespace hdfe {

// f(x) = 1/2 + (1/8) sum_k a_k sin(2 pi k x) on [0, 1]. Coefficients in
// [0, 1] keep the range inside (0, 1).
struct SineMixture {
  Eigen::VectorXd coeffs;  // a_1 .. a_K

  double operator()(double x) const;
  Eigen::VectorXd eval(const Eigen::VectorXd& x) const;
  // Numerically integrated |f'| over [0, 1].
  double complexity(int resolution = 10001) const;
};

// f(x) = sum_k c_k exp(-gamma ||x - center_k||^2) on R^d.
struct KernelMixture {
  Eigen::MatrixXd centers;  // components x d
  Eigen::VectorXd coeffs;
  double gamma = 1.0;

  double operator()(const Eigen::RowVectorXd& x) const;
  Eigen::VectorXd eval(const Eigen::MatrixXd& x) const;
};

SineMixture draw_sine_mixture(SeededRng& rng, int terms,
                              double amp_scale = 1.0);
KernelMixture draw_kernel_mixture(SeededRng& rng, int components, int dim,
                                  double gamma);

// Skew transforms of uniform draws (left piles mass near 0, right near 1).
double skew_left(double u);   // u^2
double skew_right(double u);  // 1 - u^2

enum class DatasetKind {
  kSineMixture,
  kKernelMixture,
  kCircle,
  kSkewedUniform,
};

DatasetKind dataset_kind_from_string(const std::string& name);
std::string to_string(DatasetKind kind);

// Parameters live in a flat name -> value map; each kind documents its
// keys below. A fixed seed reproduces the dataset byte-for-byte.
//
//   sine-mixture:   n, k (harmonics, default 4), noise (output sigma,
//                   default 0), skew (-1 right, 0 uniform, +1 left),
//                   amp_scale (default 1; draws are rejected until the
//                   output range stays inside (0,1))
//   kernel-mixture: d, components, gamma, n_per_component (default 20),
//                   noise (input sigma around centers, default 0.05)
//   circle:         n, noise (isotropic sigma, default 0)
//   skewed-uniform: n, direction (+1 left, -1 right)
struct DatasetSpec {
  DatasetKind kind = DatasetKind::kSineMixture;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
};

struct GeneratedDataset {
  SampleSet samples;
  std::optional<Eigen::VectorXd> ground_truth;  // a_k or alpha_k
  double complexity = 0.0;  // integral of |f'|; 0 where not applicable
};

GeneratedDataset generate(const DatasetSpec& spec);

// Trapezoidal estimate of integral |f'| from values of f on a uniform
// grid over [lo, hi]. Requires at least 1000 grid points.
double complexity_of(std::span<const double> grid_values, double lo = 0.0,
                     double hi = 1.0);

}  // namespace hdfe
