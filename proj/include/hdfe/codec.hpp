#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "hdfe/encoding.hpp"
#include "hdfe/hypervector.hpp"

namespace hdfe {

// Samples of a function: n inputs in R^m with outputs for explicit
// functions, or inputs alone for implicit ones (level sets).
struct SampleSet {
  Eigen::MatrixXd inputs;                       // n x m
  std::optional<Eigen::VectorXd> outputs;       // n, absent => implicit
  std::map<std::string, std::string> metadata;  // distribution label, noise, ...

  Eigen::Index count() const { return inputs.rows(); }
  bool is_implicit() const { return !outputs.has_value(); }
};

enum class RefinementMode : std::uint8_t {
  kNone = 0,
  kOneShot = 1,
  kIterative = 2,
};

struct RefineOptions {
  // Iterative mode: hard cap on argmin-add steps.
  int max_steps = 200;
  // Iterative mode: stop once this many consecutive steps pass without a
  // new best monitored minimum similarity. The monitored quantity drifts
  // through plateaus where single steps do not improve it, so the
  // stopping window has to span more than one step.
  int patience = 200;
  // Smallest improvement that counts as a new best.
  double tol = 1e-6;
  // One-shot mode: similarity clamp floor before inversion.
  double clamp_floor = 1e-3;
  // Iterative mode: keep previously computed sample-pair inner products.
  // Output-equivalent to recomputing per step (up to accumulation
  // rounding); turns the per-step cost from one full matrix-vector pass
  // into O(n). The reference (false) path is what the refinement-timing
  // study measures.
  bool memoize = true;
};

struct RefineResult {
  Eigen::VectorXd weights;  // aligned with the input sample order
  HyperVector encoding;     // normalized weighted superposition
  int steps_run = 0;        // iterative steps executed
  int accepted_steps = 0;   // steps that set a new best minimum similarity
  double min_similarity = 0.0;  // monitored minimum at the returned weights
};

// Compact encoding of a function plus the provenance needed to decode it.
struct FunctionEncoding {
  HyperVector vector;  // unit norm
  std::uint64_t config_fingerprint = 0;
  RefinementMode refinement = RefinementMode::kNone;
  std::optional<Eigen::VectorXd> weights;
};

struct DecodeOptions {
  enum class Mode { kGradient, kGrid };
  Mode mode = Mode::kGradient;
  double learning_rate = 0.05;
  int max_iters = 500;
  int subsample_size = 500;  // |S| for the stochastic gradient
  int restarts = 8;          // starts taken from the coarse grid
  int grid_resolution = 256; // grid mode candidates over [0, 1]
  std::uint64_t seed = 0;
  double tol = 1e-6;         // convergence tolerance on the objective
};

struct DecodeResult {
  double y = 0.0;
  bool converged = false;
  double objective = 0.0;  // quad similarity at the returned y
};

// Per-sample encodings z_i as matrix rows: bind(E_X(x_i), E_Y(y_i)) for
// explicit sets, E_X(x_i) for implicit ones. Rows follow the sample order
// of the set.
Eigen::MatrixXcd sample_encodings(const EncodingConfig& cfg,
                                  const SampleSet& samples);

// Weight assignment per refinement mode over per-sample encodings.
//   none      -> all weights 1
//   one-shot  -> inverse clamped similarity to the plain superposition
//   iterative -> argmin-add loop; returns the best-monitored state
// All modes return the normalized weighted superposition. Monitored
// similarities use the real-cosine convention.
RefineResult refine_weights(const Eigen::MatrixXcd& encodings,
                            RefinementMode mode,
                            const RefineOptions& opts = {});
RefineResult refine_weights(std::span<const HyperVector> encodings,
                            RefinementMode mode,
                            const RefineOptions& opts = {});

// Encode an explicit function from samples (outputs required). Samples
// are processed in a canonical order (lexicographic on input coordinates
// then output), so the encoding is invariant under permutation of the
// sample set.
FunctionEncoding encode_explicit(const EncodingConfig& cfg,
                                 const SampleSet& samples,
                                 RefinementMode mode,
                                 const RefineOptions& opts = {});

// Encode the level set {x : f(x) = 0} from points on it (outputs absent).
FunctionEncoding encode_implicit(const EncodingConfig& cfg,
                                 const SampleSet& samples,
                                 RefinementMode mode,
                                 const RefineOptions& opts = {});

// Recover f(x0) by maximizing the quad similarity between
// unbind(enc, E_X(x0)) and E_Y(y) over y in [0, 1]. Gradient mode runs
// stochastic ascent (Psi-subsampled gradient estimates) from the best
// coarse-grid starts; grid mode takes the argmax over grid_resolution
// candidates, ties resolved toward the smaller y.
DecodeResult decode_at(const EncodingConfig& cfg, const FunctionEncoding& enc,
                       std::span<const double> x0,
                       const DecodeOptions& opts = {});

// Likelihood-style score that xq lies on the encoded level set:
// real-cosine similarity between the encoding and E_X(xq).
double query_implicit(const EncodingConfig& cfg, const FunctionEncoding& enc,
                      std::span<const double> xq);

// decode_at over every row of queries (n x m). Per-query RNG streams are
// derived from opts.seed and the row index, so results do not depend on
// evaluation order.
Eigen::VectorXd reconstruct(const EncodingConfig& cfg,
                            const FunctionEncoding& enc,
                            const Eigen::MatrixXd& queries,
                            const DecodeOptions& opts = {});

// Exact gradient of the quad-similarity objective at y (no subsampling);
// the stochastic estimates in decode_at are unbiased for this value.
double decode_objective_gradient(const EncodingConfig& cfg, const CVec& z,
                                 double y);
double decode_objective(const EncodingConfig& cfg, const CVec& z, double y);

}  // namespace hdfe
