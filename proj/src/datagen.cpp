#include "hdfe/datagen.hpp"

#include <cmath>

#include "hdfe/errors.hpp"

namespace hdfe {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double get_param(const DatasetSpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    throw ValueError("generate(" + to_string(spec.kind) + "): missing param '" +
                     key + "'");
  }
  return it->second;
}

double get_param_or(const DatasetSpec& spec, const std::string& key,
                    double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

int as_count(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v)) {
    throw ValueError(std::string("generate: ") + what +
                     " must be a positive integer");
  }
  return static_cast<int>(v);
}
}  // namespace

double SineMixture::operator()(double x) const {
  double acc = 0.5;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    acc += 0.125 * coeffs[k] * std::sin(kTwoPi * static_cast<double>(k + 1) * x);
  }
  return acc;
}

Eigen::VectorXd SineMixture::eval(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = (*this)(x[i]);
  return out;
}

double SineMixture::complexity(int resolution) const {
  std::vector<double> vals(static_cast<std::size_t>(resolution));
  for (int i = 0; i < resolution; ++i) {
    vals[static_cast<std::size_t>(i)] =
        (*this)(static_cast<double>(i) / (resolution - 1));
  }
  return complexity_of(vals);
}

double KernelMixture::operator()(const Eigen::RowVectorXd& x) const {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    acc += coeffs[k] * std::exp(-gamma * (x - centers.row(k)).squaredNorm());
  }
  return acc;
}

Eigen::VectorXd KernelMixture::eval(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = (*this)(x.row(i));
  return out;
}

SineMixture draw_sine_mixture(SeededRng& rng, int terms, double amp_scale) {
  SineMixture f;
  f.coeffs.resize(terms);
  // Reject draws whose total amplitude would push outputs out of (0,1).
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (int k = 0; k < terms; ++k) f.coeffs[k] = amp_scale * rng.uniform01();
    if (f.coeffs.sum() < 4.0) return f;
  }
  throw ValueError("draw_sine_mixture: amplitude scale leaves no admissible draws");
}

KernelMixture draw_kernel_mixture(SeededRng& rng, int components, int dim,
                                  double gamma) {
  KernelMixture f;
  f.gamma = gamma;
  f.centers.resize(components, dim);
  for (Eigen::Index r = 0; r < components; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) f.centers(r, c) = rng.normal();
  }
  f.coeffs.resize(components);
  for (Eigen::Index k = 0; k < components; ++k) f.coeffs[k] = rng.uniform01();
  return f;
}

double skew_left(double u) { return u * u; }
double skew_right(double u) { return 1.0 - u * u; }

DatasetKind dataset_kind_from_string(const std::string& name) {
  if (name == "sine-mixture") return DatasetKind::kSineMixture;
  if (name == "kernel-mixture") return DatasetKind::kKernelMixture;
  if (name == "circle") return DatasetKind::kCircle;
  if (name == "skewed-uniform") return DatasetKind::kSkewedUniform;
  throw ValueError("unknown dataset kind '" + name + "'");
}

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kSineMixture: return "sine-mixture";
    case DatasetKind::kKernelMixture: return "kernel-mixture";
    case DatasetKind::kCircle: return "circle";
    case DatasetKind::kSkewedUniform: return "skewed-uniform";
  }
  return "?";
}

namespace {

GeneratedDataset gen_sine(const DatasetSpec& spec) {
  const int n = as_count(get_param(spec, "n"), "n");
  const int terms = as_count(get_param_or(spec, "k", 4.0), "k");
  const double noise = get_param_or(spec, "noise", 0.0);
  const double skew = get_param_or(spec, "skew", 0.0);
  const double amp_scale = get_param_or(spec, "amp_scale", 1.0);

  SeededRng rng(spec.seed);
  const SineMixture f = draw_sine_mixture(rng, terms, amp_scale);

  GeneratedDataset out;
  out.samples.inputs.resize(n, 1);
  for (int i = 0; i < n; ++i) {
    double x = rng.uniform01();
    if (skew > 0.0) x = skew_left(x);
    if (skew < 0.0) x = skew_right(x);
    out.samples.inputs(i, 0) = x;
  }
  Eigen::VectorXd y = f.eval(out.samples.inputs.col(0));
  if (noise > 0.0) {
    for (int i = 0; i < n; ++i) y[i] += noise * rng.normal();
  }
  out.samples.outputs = std::move(y);
  out.samples.metadata["kind"] = "sine-mixture";
  out.samples.metadata["skew"] =
      skew > 0 ? "left" : (skew < 0 ? "right" : "uniform");
  out.samples.metadata["noise"] = std::to_string(noise);
  out.ground_truth = f.coeffs;
  out.complexity = f.complexity();
  return out;
}

GeneratedDataset gen_kernel(const DatasetSpec& spec) {
  const int d = as_count(get_param(spec, "d"), "d");
  const int components = as_count(get_param(spec, "components"), "components");
  const double gamma = get_param(spec, "gamma");
  const int per = as_count(get_param_or(spec, "n_per_component", 20.0),
                           "n_per_component");
  const double noise = get_param_or(spec, "noise", 0.05);
  if (!(gamma > 0.0)) throw ValueError("generate(kernel-mixture): gamma must be > 0");

  SeededRng rng(spec.seed);
  const KernelMixture f = draw_kernel_mixture(rng, components, d, gamma);

  GeneratedDataset out;
  out.samples.inputs.resize(static_cast<Eigen::Index>(components) * per, d);
  Eigen::Index row = 0;
  for (int k = 0; k < components; ++k) {
    for (int t = 0; t < per; ++t, ++row) {
      for (int c = 0; c < d; ++c) {
        out.samples.inputs(row, c) = f.centers(k, c) + noise * rng.normal();
      }
    }
  }
  out.samples.outputs = f.eval(out.samples.inputs);
  out.samples.metadata["kind"] = "kernel-mixture";
  out.samples.metadata["gamma"] = std::to_string(gamma);
  out.ground_truth = f.coeffs;
  return out;
}

GeneratedDataset gen_circle(const DatasetSpec& spec) {
  const int n = as_count(get_param(spec, "n"), "n");
  const double noise = get_param_or(spec, "noise", 0.0);

  SeededRng rng(spec.seed);
  GeneratedDataset out;
  out.samples.inputs.resize(n, 2);
  for (int i = 0; i < n; ++i) {
    const double th = rng.uniform(0.0, kTwoPi);
    out.samples.inputs(i, 0) = std::cos(th);
    out.samples.inputs(i, 1) = std::sin(th);
  }
  if (noise > 0.0) {
    for (int i = 0; i < n; ++i) {
      out.samples.inputs(i, 0) += noise * rng.normal();
      out.samples.inputs(i, 1) += noise * rng.normal();
    }
  }
  out.samples.metadata["kind"] = "circle";
  out.samples.metadata["noise"] = std::to_string(noise);
  return out;
}

GeneratedDataset gen_skewed(const DatasetSpec& spec) {
  const int n = as_count(get_param(spec, "n"), "n");
  const double dir = get_param_or(spec, "direction", 1.0);

  SeededRng rng(spec.seed);
  GeneratedDataset out;
  out.samples.inputs.resize(n, 1);
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    out.samples.inputs(i, 0) = dir >= 0.0 ? skew_left(u) : skew_right(u);
  }
  out.samples.metadata["kind"] = "skewed-uniform";
  out.samples.metadata["direction"] = dir >= 0.0 ? "left" : "right";
  return out;
}

}  // namespace

GeneratedDataset generate(const DatasetSpec& spec) {
  switch (spec.kind) {
    case DatasetKind::kSineMixture: return gen_sine(spec);
    case DatasetKind::kKernelMixture: return gen_kernel(spec);
    case DatasetKind::kCircle: return gen_circle(spec);
    case DatasetKind::kSkewedUniform: return gen_skewed(spec);
  }
  throw ValueError("generate: unknown dataset kind");
}

double complexity_of(std::span<const double> grid_values, double lo,
                     double hi) {
  if (grid_values.size() < 1000) {
    throw ValueError("complexity_of: grid must have at least 1000 points");
  }
  if (!(hi > lo)) throw ValueError("complexity_of: degenerate interval");
  // For piecewise-linear interpolation the trapezoid rule over |f'|
  // telescopes to the sum of absolute increments.
  double acc = 0.0;
  for (std::size_t i = 1; i < grid_values.size(); ++i) {
    acc += std::abs(grid_values[i] - grid_values[i - 1]);
  }
  return acc;
}

}  // namespace hdfe
