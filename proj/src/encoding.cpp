#include "hdfe/encoding.hpp"

#include <cmath>

#include "hdfe/errors.hpp"
#include "hdfe/parallel.hpp"
#include "hdfe/rng.hpp"

namespace hdfe {

namespace {

constexpr std::uint16_t kConfigFormatVersion = 1;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <typename T>
std::uint64_t fnv1a_value(std::uint64_t h, const T& v) {
  return fnv1a(h, &v, sizeof(v));
}

}  // namespace

EncodingConfig::EncodingConfig(Eigen::Index n_dim, Eigen::Index in_dim,
                               double alpha, double beta, std::uint64_t seed)
    : n_(n_dim), m_(in_dim), alpha_(alpha), beta_(beta), seed_(seed) {
  if (n_ < 1) throw ValueError("EncodingConfig: N must be >= 1");
  if (m_ < 1) throw ValueError("EncodingConfig: m must be >= 1");
  if (!(alpha_ > 0.0)) throw ValueError("EncodingConfig: alpha must be > 0");
  if (!(beta_ > 0.0)) throw ValueError("EncodingConfig: beta must be > 0");

  SeededRng rng(seed_);
  phi_.resize(n_, m_);
  for (Eigen::Index r = 0; r < n_; ++r) {
    for (Eigen::Index c = 0; c < m_; ++c) {
      phi_(r, c) = rng.normal();
    }
  }
  psi_.resize(n_);
  for (Eigen::Index r = 0; r < n_; ++r) psi_[r] = rng.normal();
}

std::uint64_t config_fingerprint(Eigen::Index n_dim, Eigen::Index in_dim,
                                 double alpha, double beta,
                                 std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a_value(h, kConfigFormatVersion);
  h = fnv1a_value(h, static_cast<std::int64_t>(n_dim));
  h = fnv1a_value(h, static_cast<std::int64_t>(in_dim));
  h = fnv1a_value(h, alpha);
  h = fnv1a_value(h, beta);
  h = fnv1a_value(h, seed);
  return h;
}

std::uint64_t EncodingConfig::fingerprint() const {
  return config_fingerprint(n_, m_, alpha_, beta_, seed_);
}

EncodingConfig make_config(Eigen::Index n_dim, Eigen::Index in_dim,
                           double alpha, double beta, std::uint64_t seed) {
  return EncodingConfig(n_dim, in_dim, alpha, beta, seed);
}

Eigen::VectorXd input_phases(const EncodingConfig& cfg,
                             std::span<const double> x) {
  if (static_cast<Eigen::Index>(x.size()) != cfg.input_dim()) {
    throw DimensionError("encode_input: point has dimension " +
                         std::to_string(x.size()) + ", config expects " +
                         std::to_string(cfg.input_dim()));
  }
  const Eigen::Map<const Eigen::VectorXd> xv(x.data(), x.size());
  return (cfg.alpha() / static_cast<double>(cfg.input_dim())) *
         (cfg.phi() * xv);
}

Eigen::VectorXd output_phases(const EncodingConfig& cfg, double y) {
  if (!std::isfinite(y)) throw ValueError("encode_output: non-finite value");
  return (cfg.beta() * y) * cfg.psi();
}

Eigen::MatrixXd batch_input_phases(const EncodingConfig& cfg,
                                   const Eigen::MatrixXd& inputs) {
  if (inputs.cols() != cfg.input_dim()) {
    throw DimensionError("batch_input_phases: inputs have " +
                         std::to_string(inputs.cols()) +
                         " columns, config expects " +
                         std::to_string(cfg.input_dim()));
  }
  return (cfg.alpha() / static_cast<double>(cfg.input_dim())) *
         (inputs * cfg.phi().transpose());
}

namespace {

CVec phases_to_unit(const Eigen::VectorXd& ph) {
  CVec out(ph.size());
  parallel_for(0, ph.size(), [&](Eigen::Index lo, Eigen::Index hi) {
    for (Eigen::Index k = lo; k < hi; ++k) {
      out[k] = Complex(std::cos(ph[k]), std::sin(ph[k]));
    }
  });
  return out;
}

}  // namespace

HyperVector encode_input(const EncodingConfig& cfg,
                         std::span<const double> x) {
  return HyperVector(phases_to_unit(input_phases(cfg, x)));
}

HyperVector encode_output(const EncodingConfig& cfg, double y) {
  return HyperVector(phases_to_unit(output_phases(cfg, y)));
}

double expected_kernel(double gamma, double dist) {
  if (!std::isfinite(gamma) || !std::isfinite(dist)) {
    throw ValueError("expected_kernel: non-finite argument");
  }
  return std::exp(-gamma * gamma * dist * dist);
}

}  // namespace hdfe
