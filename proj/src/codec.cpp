#include "hdfe/codec.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "hdfe/errors.hpp"
#include "hdfe/parallel.hpp"
#include "hdfe/rng.hpp"

namespace hdfe {

namespace {

constexpr Eigen::Index kRowGrain = 256;

void validate_samples(const SampleSet& s) {
  if (s.count() < 1) throw ValueError("SampleSet: empty");
  if (s.outputs && s.outputs->size() != s.inputs.rows()) {
    throw DimensionError("SampleSet: " + std::to_string(s.inputs.rows()) +
                         " inputs vs " + std::to_string(s.outputs->size()) +
                         " outputs");
  }
}

// Canonical sample order: lexicographic on input coordinates, then
// output. Makes encodings independent of how the caller ordered the set.
std::vector<Eigen::Index> canonical_order(const SampleSet& s) {
  std::vector<Eigen::Index> idx(s.count());
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  const auto& in = s.inputs;
  const auto* out = s.outputs ? &*s.outputs : nullptr;
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < in.cols(); ++c) {
      if (in(a, c) != in(b, c)) return in(a, c) < in(b, c);
    }
    if (out && (*out)[a] != (*out)[b]) return (*out)[a] < (*out)[b];
    return false;
  });
  return idx;
}

// Chunked row superposition with fixed chunk layout; the combine runs in
// chunk order, so the result does not depend on the thread count.
CVec weighted_row_sum(const Eigen::MatrixXcd& z, const Eigen::VectorXd& w) {
  const Eigen::Index n = z.rows();
  const Eigen::Index nd = z.cols();
  const Eigen::Index nchunks = (n + kRowGrain - 1) / kRowGrain;
  Eigen::MatrixXcd partials = Eigen::MatrixXcd::Zero(nd, nchunks);
  parallel_for(
      0, nchunks,
      [&](Eigen::Index clo, Eigen::Index chi) {
        for (Eigen::Index c = clo; c < chi; ++c) {
          const Eigen::Index lo = c * kRowGrain;
          const Eigen::Index hi = std::min(n, lo + kRowGrain);
          auto col = partials.col(c);
          for (Eigen::Index i = lo; i < hi; ++i) {
            if (w[i] != 0.0) col += w[i] * z.row(i).transpose();
          }
        }
      },
      1);
  CVec acc = CVec::Zero(nd);
  for (Eigen::Index c = 0; c < nchunks; ++c) acc += partials.col(c);
  return acc;
}

// g_i = <F, z_i> = sum_k F_k conj(z_ik) for every row.
CVec row_inner_products(const Eigen::MatrixXcd& z, const CVec& f) {
  CVec g(z.rows());
  parallel_for(0, z.rows(), [&](Eigen::Index lo, Eigen::Index hi) {
    for (Eigen::Index i = lo; i < hi; ++i) {
      g[i] = z.row(i).transpose().dot(f);  // dot conjugates its first operand
    }
  });
  return g;
}

Eigen::Index argmin_real(const CVec& g) {
  Eigen::Index best = 0;
  double bv = g[0].real();
  for (Eigen::Index i = 1; i < g.size(); ++i) {
    if (g[i].real() < bv) {
      bv = g[i].real();
      best = i;
    }
  }
  return best;
}

RefineResult refine_none(const Eigen::MatrixXcd& z) {
  Eigen::VectorXd w = Eigen::VectorXd::Ones(z.rows());
  CVec f = weighted_row_sum(z, w);
  const double fn = f.norm();
  if (fn == 0.0) throw ValueError("refine_weights: superposition is zero");
  const CVec g = row_inner_products(z, f);
  double mn = g[0].real() / (fn * z.row(0).norm());
  for (Eigen::Index i = 1; i < z.rows(); ++i) {
    mn = std::min(mn, g[i].real() / (fn * z.row(i).norm()));
  }
  return RefineResult{std::move(w), HyperVector(f / fn), 0, 0, mn};
}

RefineResult refine_one_shot(const Eigen::MatrixXcd& z,
                             const RefineOptions& opts) {
  const Eigen::Index n = z.rows();
  CVec f0 = weighted_row_sum(z, Eigen::VectorXd::Ones(n));
  const double fn = f0.norm();
  if (fn == 0.0) throw ValueError("refine_weights: superposition is zero");
  const CVec g = row_inner_products(z, f0);

  // Similarity to the plain superposition estimates local sample density;
  // inverse weights even dense and sparse regions out.
  Eigen::VectorXd w(n);
  double inv_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sim = g[i].real() / (fn * z.row(i).norm());
    w[i] = 1.0 / std::max(opts.clamp_floor, sim);
    inv_sum += w[i];
  }
  w /= inv_sum;

  CVec f = weighted_row_sum(z, w);
  const double fnorm = f.norm();
  if (fnorm == 0.0) throw ValueError("refine_weights: refined sum is zero");
  const CVec g1 = row_inner_products(z, f);
  double mn = g1[0].real() / (fnorm * z.row(0).norm());
  for (Eigen::Index i = 1; i < n; ++i) {
    mn = std::min(mn, g1[i].real() / (fnorm * z.row(i).norm()));
  }
  return RefineResult{std::move(w), HyperVector(f / fnorm), 0, 0, mn};
}

// Iterative refinement. Repeatedly adds the sample encoding with the
// lowest real-cosine similarity to the accumulated vector; the monitored
// minimum similarity (against the normalized vector) decides acceptance.
// The returned weights are the best-monitored state, not necessarily the
// last one, and the monitored minimum is nondecreasing over accepted
// steps by construction.
RefineResult refine_iterative(const Eigen::MatrixXcd& z,
                              const RefineOptions& opts) {
  const Eigen::Index n = z.rows();

  Eigen::VectorXd row_norm(n);
  for (Eigen::Index i = 0; i < n; ++i) row_norm[i] = z.row(i).norm();

  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  CVec f = weighted_row_sum(z, w);
  double f2 = f.squaredNorm();
  if (f2 == 0.0) throw ValueError("refine_weights: superposition is zero");
  CVec g = row_inner_products(z, f);

  auto monitored_min = [&](const CVec& gg, double fnorm2) {
    double mn = gg[0].real() / row_norm[0];
    for (Eigen::Index i = 1; i < n; ++i) {
      mn = std::min(mn, gg[i].real() / row_norm[i]);
    }
    return mn / std::sqrt(fnorm2);
  };

  Eigen::VectorXd best_w = w;
  double best_min = monitored_min(g, f2);
  int best_step = 0;
  int accepted = 0;

  // All sample encodings coincide: nothing to refine.
  if (best_min >= 1.0 - 1e-12) {
    return RefineResult{std::move(best_w), HyperVector(f / std::sqrt(f2)), 0, 0,
                        best_min};
  }

  std::unordered_map<Eigen::Index, CVec> gram_rows;
  int step = 0;
  for (step = 1; step <= opts.max_steps; ++step) {
    // argmin of g.real/row_norm; row norms are all equal for phase
    // vectors, but divide anyway so mixed inputs behave.
    Eigen::Index j = 0;
    double jv = g[0].real() / row_norm[0];
    for (Eigen::Index i = 1; i < n; ++i) {
      const double v = g[i].real() / row_norm[i];
      if (v < jv) {
        jv = v;
        j = i;
      }
    }

    if (opts.memoize) {
      auto it = gram_rows.find(j);
      if (it == gram_rows.end()) {
        // row_j[i] = <z_j, z_i>
        CVec row(n);
        parallel_for(0, n, [&](Eigen::Index lo, Eigen::Index hi) {
          for (Eigen::Index i = lo; i < hi; ++i) {
            row[i] = z.row(i).transpose().dot(z.row(j).transpose());
          }
        });
        it = gram_rows.emplace(j, std::move(row)).first;
      }
      f2 += 2.0 * g[j].real() + row_norm[j] * row_norm[j];
      g += it->second;
    } else {
      f += z.row(j).transpose();
      f2 = f.squaredNorm();
      g = row_inner_products(z, f);
    }
    w[j] += 1.0;

    const double cur = monitored_min(g, f2);
    if (cur > best_min + opts.tol) {
      best_min = cur;
      best_w = w;
      best_step = step;
      accepted += 1;
    }
    if (step - best_step >= opts.patience) break;
  }
  const int steps_run = std::min(step, opts.max_steps);

  CVec fb = weighted_row_sum(z, best_w);
  const double fbn = fb.norm();
  if (fbn == 0.0) throw ValueError("refine_weights: refined sum is zero");
  return RefineResult{std::move(best_w), HyperVector(fb / fbn), steps_run,
                      accepted, best_min};
}

}  // namespace

Eigen::MatrixXcd sample_encodings(const EncodingConfig& cfg,
                                  const SampleSet& samples) {
  validate_samples(samples);
  const Eigen::Index n = samples.count();
  const Eigen::Index nd = cfg.dim();
  if (samples.inputs.cols() != cfg.input_dim()) {
    throw DimensionError("sample_encodings: inputs have " +
                         std::to_string(samples.inputs.cols()) +
                         " columns, config expects " +
                         std::to_string(cfg.input_dim()));
  }
  if (samples.outputs) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!std::isfinite((*samples.outputs)[i])) {
        throw ValueError("sample_encodings: non-finite output at row " +
                         std::to_string(i));
      }
    }
  }

  Eigen::MatrixXcd z(n, nd);
  const double in_scale = cfg.alpha() / static_cast<double>(cfg.input_dim());
  parallel_for(
      0, n,
      [&](Eigen::Index lo, Eigen::Index hi) {
        // Phases for a block of rows: in_scale * X Phi^T (+ beta y Psi^T),
        // then one trig pass.
        Eigen::MatrixXd ph = in_scale * (samples.inputs.middleRows(lo, hi - lo) *
                                         cfg.phi().transpose());
        if (samples.outputs) {
          ph.noalias() += (cfg.beta() * samples.outputs->segment(lo, hi - lo)) *
                          cfg.psi().transpose();
        }
        for (Eigen::Index i = lo; i < hi; ++i) {
          for (Eigen::Index k = 0; k < nd; ++k) {
            const double p = ph(i - lo, k);
            z(i, k) = Complex(std::cos(p), std::sin(p));
          }
        }
      },
      kRowGrain);
  return z;
}

RefineResult refine_weights(const Eigen::MatrixXcd& encodings,
                            RefinementMode mode, const RefineOptions& opts) {
  if (encodings.rows() < 1) throw ValueError("refine_weights: empty input");
  switch (mode) {
    case RefinementMode::kNone:
      return refine_none(encodings);
    case RefinementMode::kOneShot:
      return refine_one_shot(encodings, opts);
    case RefinementMode::kIterative:
      return refine_iterative(encodings, opts);
  }
  throw ValueError("refine_weights: unknown mode");
}

RefineResult refine_weights(std::span<const HyperVector> encodings,
                            RefinementMode mode, const RefineOptions& opts) {
  if (encodings.empty()) throw ValueError("refine_weights: empty input");
  const Eigen::Index nd = encodings[0].size();
  Eigen::MatrixXcd z(static_cast<Eigen::Index>(encodings.size()), nd);
  for (std::size_t i = 0; i < encodings.size(); ++i) {
    if (encodings[i].size() != nd) {
      throw DimensionError("refine_weights: vector " + std::to_string(i) +
                           " has length " +
                           std::to_string(encodings[i].size()) +
                           ", expected " + std::to_string(nd));
    }
    z.row(static_cast<Eigen::Index>(i)) = encodings[i].values().transpose();
  }
  return refine_weights(z, mode, opts);
}

namespace {

FunctionEncoding encode_common(const EncodingConfig& cfg,
                               const SampleSet& samples, RefinementMode mode,
                               const RefineOptions& opts) {
  validate_samples(samples);
  const std::vector<Eigen::Index> order = canonical_order(samples);

  SampleSet sorted;
  sorted.inputs.resize(samples.inputs.rows(), samples.inputs.cols());
  for (Eigen::Index k = 0; k < samples.count(); ++k) {
    sorted.inputs.row(k) = samples.inputs.row(order[k]);
  }
  if (samples.outputs) {
    Eigen::VectorXd out(samples.count());
    for (Eigen::Index k = 0; k < samples.count(); ++k) {
      out[k] = (*samples.outputs)[order[k]];
    }
    sorted.outputs = std::move(out);
  }

  const Eigen::MatrixXcd z = sample_encodings(cfg, sorted);
  RefineResult r = refine_weights(z, mode, opts);

  FunctionEncoding enc{normalize(r.encoding), cfg.fingerprint(), mode,
                       std::nullopt};
  Eigen::VectorXd w(samples.count());
  for (Eigen::Index k = 0; k < samples.count(); ++k) {
    w[order[k]] = r.weights[k];
  }
  enc.weights = std::move(w);
  return enc;
}

}  // namespace

FunctionEncoding encode_explicit(const EncodingConfig& cfg,
                                 const SampleSet& samples, RefinementMode mode,
                                 const RefineOptions& opts) {
  if (samples.is_implicit()) {
    throw ValueError("encode_explicit: sample set has no outputs");
  }
  return encode_common(cfg, samples, mode, opts);
}

FunctionEncoding encode_implicit(const EncodingConfig& cfg,
                                 const SampleSet& samples, RefinementMode mode,
                                 const RefineOptions& opts) {
  if (!samples.is_implicit()) {
    throw ValueError("encode_implicit: sample set has outputs");
  }
  return encode_common(cfg, samples, mode, opts);
}

namespace {

void require_fingerprint(const EncodingConfig& cfg,
                         const FunctionEncoding& enc, const char* op) {
  if (enc.config_fingerprint != cfg.fingerprint()) {
    throw ConfigError(std::string(op) +
                      ": encoding was produced under a different config");
  }
}

// Unbind the query input: z_k = F_k / E_X(x0)_k = F_k * conj(e^{i phase}).
CVec unbound_query(const EncodingConfig& cfg, const FunctionEncoding& enc,
                   std::span<const double> x0) {
  const Eigen::VectorXd ph = input_phases(cfg, x0);
  const CVec& f = enc.vector.values();
  CVec z(f.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    z[k] = f[k] * Complex(std::cos(ph[k]), -std::sin(ph[k]));
  }
  return z;
}

struct YGrid {
  Eigen::VectorXd ys;
  Eigen::MatrixXcd ey_neg;  // R x N when materialized, else empty
  bool materialized = false;
};

// Materialize the candidate matrix only while it stays reasonably sized;
// large resolutions fall back to streaming inside grid_argmax.
constexpr Eigen::Index kGridCacheElements = 16 * 1024 * 1024;

YGrid make_y_grid(const EncodingConfig& cfg, int resolution) {
  if (resolution < 2) throw ValueError("decode: grid resolution must be >= 2");
  YGrid grid;
  grid.ys = Eigen::VectorXd::LinSpaced(resolution, 0.0, 1.0);
  if (static_cast<Eigen::Index>(resolution) * cfg.dim() > kGridCacheElements) {
    return grid;
  }
  grid.materialized = true;
  grid.ey_neg.resize(resolution, cfg.dim());
  parallel_for(0, resolution, [&](Eigen::Index lo, Eigen::Index hi) {
    for (Eigen::Index r = lo; r < hi; ++r) {
      const double y = grid.ys[r];
      for (Eigen::Index k = 0; k < cfg.dim(); ++k) {
        const double p = cfg.beta() * cfg.psi()[k] * y;
        grid.ey_neg(r, k) = Complex(std::cos(p), -std::sin(p));
      }
    }
  });
  return grid;
}

double objective_at(const EncodingConfig& cfg, const CVec& z, double z2,
                    double y) {
  Complex s(0.0, 0.0);
  const double b = cfg.beta();
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    const double p = b * cfg.psi()[k] * y;
    s += z[k] * Complex(std::cos(p), -std::sin(p));
  }
  return std::norm(s) / (z2 * static_cast<double>(z.size()));
}

// Argmax over the grid; ties go to the smaller y (scan order is
// ascending and replacement requires strict improvement).
std::pair<double, double> grid_argmax(const EncodingConfig& cfg,
                                      const YGrid& grid, const CVec& z,
                                      double z2) {
  double best_q = -1.0;
  double best_y = 0.0;
  const double denom = z2 * static_cast<double>(z.size());
  if (grid.materialized) {
    const Eigen::VectorXcd s = grid.ey_neg * z;
    for (Eigen::Index r = 0; r < grid.ys.size(); ++r) {
      const double q = std::norm(s[r]) / denom;
      if (q > best_q) {
        best_q = q;
        best_y = grid.ys[r];
      }
    }
    return {best_y, best_q};
  }
  for (Eigen::Index r = 0; r < grid.ys.size(); ++r) {
    const double q = objective_at(cfg, z, z2, grid.ys[r]);
    if (q > best_q) {
      best_q = q;
      best_y = grid.ys[r];
    }
  }
  return {best_y, best_q};
}

struct GradientDecoder {
  const EncodingConfig& cfg;
  const DecodeOptions& opts;
  YGrid coarse;

  GradientDecoder(const EncodingConfig& c, const DecodeOptions& o)
      : cfg(c), opts(o), coarse(make_y_grid(c, 64)) {
    if (opts.subsample_size < 2) {
      throw ValueError("decode: subsample_size must be >= 2");
    }
    if (opts.subsample_size > cfg.dim()) {
      throw ValueError("decode: subsample_size exceeds N");
    }
  }

  DecodeResult run(const CVec& z, std::uint64_t stream) const {
    const double z2 = z.squaredNorm();
    if (z2 == 0.0) throw ValueError("decode: unbound vector is zero");
    const Eigen::Index n = cfg.dim();
    const int s_count = opts.subsample_size;

    // Rank coarse candidates; take the best `restarts` as starts.
    const Eigen::VectorXcd s_all = coarse.ey_neg * z;
    std::vector<Eigen::Index> rank(coarse.ys.size());
    std::iota(rank.begin(), rank.end(), Eigen::Index{0});
    std::sort(rank.begin(), rank.end(), [&](Eigen::Index a, Eigen::Index b) {
      const double qa = std::norm(s_all[a]);
      const double qb = std::norm(s_all[b]);
      if (qa != qb) return qa > qb;
      return a < b;
    });
    const int n_starts =
        std::min<int>(opts.restarts, static_cast<int>(rank.size()));

    DecodeResult best;
    best.objective = -1.0;
    const double unbias = static_cast<double>(n) * (n - 1.0) /
                          (static_cast<double>(s_count) * (s_count - 1.0));

    for (int rstart = 0; rstart < n_starts; ++rstart) {
      SeededRng rng(derive_seed(opts.seed, (stream << 8) ^
                                               static_cast<std::uint64_t>(rstart)));
      std::vector<Eigen::Index> idx(n);
      std::iota(idx.begin(), idx.end(), Eigen::Index{0});

      double y = coarse.ys[rank[rstart]];
      bool converged = false;
      double prev_obj = objective_at(cfg, z, z2, y);
      for (int it = 0; it < opts.max_iters; ++it) {
        // Fresh subsample of Psi entries without replacement.
        for (int t = 0; t < s_count; ++t) {
          const auto swap_at =
              t + static_cast<Eigen::Index>(rng.below(
                      static_cast<std::uint64_t>(n - t)));
          std::swap(idx[t], idx[swap_at]);
        }
        Complex s(0.0, 0.0);
        Complex sd(0.0, 0.0);
        for (int t = 0; t < s_count; ++t) {
          const Eigen::Index k = idx[t];
          const double psi_k = cfg.beta() * cfg.psi()[k];
          const double p = psi_k * y;
          const Complex c = z[k] * Complex(std::cos(p), -std::sin(p));
          s += c;
          sd += Complex(0.0, -psi_k) * c;
        }
        const double g = 2.0 * (std::conj(s) * sd).real() * unbias /
                         (z2 * static_cast<double>(n));
        y = std::clamp(y + opts.learning_rate * g, 0.0, 1.0);
        if ((it + 1) % 20 == 0) {
          const double obj = objective_at(cfg, z, z2, y);
          if (std::abs(obj - prev_obj) < opts.tol) {
            converged = true;
            break;
          }
          prev_obj = obj;
        }
      }
      const double obj = objective_at(cfg, z, z2, y);
      if (obj > best.objective) {
        best.objective = obj;
        best.y = y;
        best.converged = converged;
      }
    }
    return best;
  }
};

}  // namespace

double decode_objective(const EncodingConfig& cfg, const CVec& z, double y) {
  return objective_at(cfg, z, z.squaredNorm(), y);
}

double decode_objective_gradient(const EncodingConfig& cfg, const CVec& z,
                                 double y) {
  Complex s(0.0, 0.0);
  Complex sd(0.0, 0.0);
  const double b = cfg.beta();
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    const double psi_k = b * cfg.psi()[k];
    const double p = psi_k * y;
    const Complex c = z[k] * Complex(std::cos(p), -std::sin(p));
    s += c;
    sd += Complex(0.0, -psi_k) * c;
  }
  return 2.0 * (std::conj(s) * sd).real() /
         (z.squaredNorm() * static_cast<double>(z.size()));
}

DecodeResult decode_at(const EncodingConfig& cfg, const FunctionEncoding& enc,
                       std::span<const double> x0, const DecodeOptions& opts) {
  require_fingerprint(cfg, enc, "decode_at");
  const CVec z = unbound_query(cfg, enc, x0);
  if (opts.mode == DecodeOptions::Mode::kGrid) {
    const YGrid grid = make_y_grid(cfg, opts.grid_resolution);
    const auto [y, q] = grid_argmax(cfg, grid, z, z.squaredNorm());
    return {y, true, q};
  }
  GradientDecoder dec(cfg, opts);
  return dec.run(z, 0);
}

double query_implicit(const EncodingConfig& cfg, const FunctionEncoding& enc,
                      std::span<const double> xq) {
  require_fingerprint(cfg, enc, "query_implicit");
  return real_cosine(enc.vector, encode_input(cfg, xq));
}

Eigen::VectorXd reconstruct(const EncodingConfig& cfg,
                            const FunctionEncoding& enc,
                            const Eigen::MatrixXd& queries,
                            const DecodeOptions& opts) {
  require_fingerprint(cfg, enc, "reconstruct");
  if (queries.cols() != cfg.input_dim()) {
    throw DimensionError("reconstruct: queries have " +
                         std::to_string(queries.cols()) +
                         " columns, config expects " +
                         std::to_string(cfg.input_dim()));
  }
  Eigen::VectorXd out(queries.rows());
  if (opts.mode == DecodeOptions::Mode::kGrid) {
    const YGrid grid = make_y_grid(cfg, opts.grid_resolution);
    parallel_for(
        0, queries.rows(),
        [&](Eigen::Index lo, Eigen::Index hi) {
          for (Eigen::Index i = lo; i < hi; ++i) {
            std::vector<double> x(queries.cols());
            for (Eigen::Index c = 0; c < queries.cols(); ++c) {
              x[static_cast<std::size_t>(c)] = queries(i, c);
            }
            const CVec z = unbound_query(cfg, enc, x);
            out[i] = grid_argmax(cfg, grid, z, z.squaredNorm()).first;
          }
        },
        4);
    return out;
  }
  const GradientDecoder dec(cfg, opts);
  parallel_for(
      0, queries.rows(),
      [&](Eigen::Index lo, Eigen::Index hi) {
        for (Eigen::Index i = lo; i < hi; ++i) {
          std::vector<double> x(queries.cols());
          for (Eigen::Index c = 0; c < queries.cols(); ++c) {
            x[static_cast<std::size_t>(c)] = queries(i, c);
          }
          const CVec z = unbound_query(cfg, enc, x);
          out[i] = dec.run(z, static_cast<std::uint64_t>(i) + 1).y;
        }
      },
      4);
  return out;
}

}  // namespace hdfe
