#include "hdfe/codec.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "hdfe/datagen.hpp"
#include "hdfe/rng.hpp"
#include "test_util.hpp"

using namespace hdfe;
using testutil::max_element_error;
using testutil::random_phase_vector;

namespace {

SampleSet sine_samples(std::uint64_t seed, int n, double noise = 0.0,
                       double skew = 0.0) {
  DatasetSpec spec;
  spec.kind = DatasetKind::kSineMixture;
  spec.params = {{"n", double(n)}, {"noise", noise}, {"skew", skew}};
  spec.seed = seed;
  return generate(spec).samples;
}

}  // namespace

TEST_CASE("single sample encoding equals its bound pair") {
  const auto cfg = make_config(512, 1, 10.0, 2.5, 3);
  SampleSet s;
  s.inputs.resize(1, 1);
  s.inputs(0, 0) = 0.4;
  s.outputs = Eigen::VectorXd::Constant(1, 0.7);

  const auto enc = encode_explicit(cfg, s, RefinementMode::kNone);
  const double x = 0.4;
  const auto expected = normalize(
      bind(encode_input(cfg, std::span<const double>(&x, 1)),
           encode_output(cfg, 0.7)));
  CHECK(max_element_error(enc.vector, expected) < 1e-12);
  CHECK(enc.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(enc.config_fingerprint == cfg.fingerprint());
}

TEST_CASE("duplicated sample set changes nothing under mode none") {
  const auto cfg = make_config(256, 1, 10.0, 2.5, 5);
  const SampleSet s = sine_samples(9, 50);
  SampleSet doubled;
  doubled.inputs.resize(100, 1);
  doubled.inputs << s.inputs, s.inputs;
  Eigen::VectorXd out(100);
  out << *s.outputs, *s.outputs;
  doubled.outputs = out;

  const auto e1 = encode_explicit(cfg, s, RefinementMode::kNone);
  const auto e2 = encode_explicit(cfg, doubled, RefinementMode::kNone);
  CHECK(max_element_error(e1.vector, e2.vector) < 1e-12);
}

TEST_CASE("encoding is invariant under sample permutation") {
  const auto cfg = make_config(256, 1, 10.0, 2.5, 6);
  const SampleSet s = sine_samples(10, 80);
  SampleSet shuffled;
  shuffled.inputs.resize(80, 1);
  Eigen::VectorXd out(80);
  SeededRng rng(77);
  std::vector<int> perm(80);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 79; i > 0; --i) {
    std::swap(perm[i], perm[rng.below(i + 1)]);
  }
  for (int i = 0; i < 80; ++i) {
    shuffled.inputs(i, 0) = s.inputs(perm[i], 0);
    out[i] = (*s.outputs)[perm[i]];
  }
  shuffled.outputs = out;

  for (auto mode : {RefinementMode::kNone, RefinementMode::kOneShot,
                    RefinementMode::kIterative}) {
    const auto e1 = encode_explicit(cfg, s, mode);
    const auto e2 = encode_explicit(cfg, shuffled, mode);
    CHECK(max_element_error(e1.vector, e2.vector) == 0.0);
    // Weights follow the caller's sample order.
    for (int i = 0; i < 80; ++i) {
      CHECK((*e2.weights)[i] == (*e1.weights)[perm[i]]);
    }
  }
}

TEST_CASE("refine_weights with identical encodings terminates immediately") {
  SeededRng rng(8);
  const auto v = random_phase_vector(rng, 128);
  std::vector<HyperVector> zs(10, v);
  for (auto mode : {RefinementMode::kNone, RefinementMode::kOneShot,
                    RefinementMode::kIterative}) {
    const auto r = refine_weights(zs, mode);
    CHECK(max_element_error(r.encoding, normalize(v)) < 1e-9);
    if (mode == RefinementMode::kIterative) {
      CHECK(r.accepted_steps == 0);
      CHECK(r.steps_run == 0);
    }
  }
}

TEST_CASE("two clusters 99:1 converge to the midpoint") {
  SeededRng rng(9);
  const auto u = random_phase_vector(rng, 2048);
  const auto v = random_phase_vector(rng, 2048);
  std::vector<HyperVector> zs;
  for (int i = 0; i < 99; ++i) zs.push_back(u);
  zs.push_back(v);

  RefineOptions opts;
  opts.max_steps = 200;
  opts.patience = 200;
  const auto r = refine_weights(zs, RefinementMode::kIterative, opts);
  const double su = real_cosine(r.encoding, u);
  const double sv = real_cosine(r.encoding, v);
  CHECK(std::abs(su - sv) <= 0.02);
}

TEST_CASE("iterative refinement never decreases the monitored minimum") {
  const auto cfg = make_config(1024, 1, 10.0, 2.5, 12);
  const SampleSet s = sine_samples(21, 400, 0.0, +1.0);  // left-skewed
  const Eigen::MatrixXcd z = sample_encodings(cfg, s);

  const auto before = refine_weights(z, RefinementMode::kNone);
  RefineOptions opts;
  opts.max_steps = 2000;
  opts.patience = 300;
  const auto after = refine_weights(z, RefinementMode::kIterative, opts);
  CHECK(after.min_similarity >= before.min_similarity);
  CHECK(after.accepted_steps > 0);
}

TEST_CASE("memoized and reference refinement agree") {
  const auto cfg = make_config(512, 1, 10.0, 2.5, 14);
  const SampleSet s = sine_samples(22, 150, 0.0, +1.0);
  const Eigen::MatrixXcd z = sample_encodings(cfg, s);

  RefineOptions fast;
  fast.max_steps = 300;
  fast.patience = 100;
  RefineOptions ref = fast;
  ref.memoize = false;

  const auto a = refine_weights(z, RefinementMode::kIterative, fast);
  const auto b = refine_weights(z, RefinementMode::kIterative, ref);
  CHECK((a.weights - b.weights).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(max_element_error(a.encoding, b.encoding) < 1e-9);
}

TEST_CASE("one-shot refinement lifts cross-skew similarity") {
  const auto cfg = make_config(4096, 1, 10.0, 2.5, 15);
  const SampleSet left = sine_samples(33, 1500, 0.01, +1.0);
  SampleSet right = sine_samples(33, 1500, 0.01, -1.0);
  // Same function: seed 33 draws identical coefficients; only inputs differ.

  const auto l0 = encode_explicit(cfg, left, RefinementMode::kNone);
  const auto r0 = encode_explicit(cfg, right, RefinementMode::kNone);
  const auto l1 = encode_explicit(cfg, left, RefinementMode::kOneShot);
  const auto r1 = encode_explicit(cfg, right, RefinementMode::kOneShot);

  const double before = real_cosine(l0.vector, r0.vector);
  const double after = real_cosine(l1.vector, r1.vector);
  CHECK(after > before);
  CHECK(after >= 0.9);
}

TEST_CASE("decode recovers a single sample") {
  const auto cfg = make_config(4096, 1, 10.0, 2.5, 16);
  SampleSet s;
  s.inputs.resize(1, 1);
  s.inputs(0, 0) = 0.3;
  s.outputs = Eigen::VectorXd::Constant(1, 0.62);
  const auto enc = encode_explicit(cfg, s, RefinementMode::kNone);

  const double x = 0.3;
  DecodeOptions grid;
  grid.mode = DecodeOptions::Mode::kGrid;
  grid.grid_resolution = 1001;
  const auto rg = decode_at(cfg, enc, std::span<const double>(&x, 1), grid);
  CHECK(std::abs(rg.y - 0.62) <= 0.01);

  DecodeOptions gr;
  gr.seed = 5;
  const auto rd = decode_at(cfg, enc, std::span<const double>(&x, 1), gr);
  CHECK(std::abs(rd.y - 0.62) <= 0.01);
}

TEST_CASE("decode a constant function") {
  const auto cfg = make_config(8192, 1, 10.0, 2.5, 17);
  SeededRng rng(44);
  SampleSet s;
  s.inputs.resize(1000, 1);
  for (int i = 0; i < 1000; ++i) s.inputs(i, 0) = rng.uniform01();
  s.outputs = Eigen::VectorXd::Constant(1000, 0.5);
  const auto enc = encode_explicit(cfg, s, RefinementMode::kNone);

  DecodeOptions grid;
  grid.mode = DecodeOptions::Mode::kGrid;
  grid.grid_resolution = 2001;
  double mae = 0.0;
  for (int q = 0; q < 20; ++q) {
    const double x = rng.uniform01();
    mae += std::abs(
        decode_at(cfg, enc, std::span<const double>(&x, 1), grid).y - 0.5);
  }
  CHECK(mae / 20.0 <= 0.02);
}

TEST_CASE("analytic gradient matches finite differences") {
  const auto cfg = make_config(2048, 1, 10.0, 2.5, 18);
  SeededRng rng(55);
  double worst_rel = 0.0;
  for (int t = 0; t < 20; ++t) {
    // Random complex vector standing in for an unbound query.
    CVec z(2048);
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      z[k] = Complex(rng.normal(), rng.normal());
    }
    const double y = rng.uniform01();
    const double g = decode_objective_gradient(cfg, z, y);
    const double h = 1e-6;
    const double fd = (decode_objective(cfg, z, y + h) -
                       decode_objective(cfg, z, y - h)) /
                      (2.0 * h);
    const double scale = std::max({std::abs(g), std::abs(fd), 1e-8});
    worst_rel = std::max(worst_rel, std::abs(g - fd) / scale);
  }
  CHECK(worst_rel < 1e-5);
}

TEST_CASE("gradient decode agrees with the grid oracle") {
  const auto cfg = make_config(4096, 1, 10.0, 2.5, 19);
  SeededRng rng(66);
  DecodeOptions grid;
  grid.mode = DecodeOptions::Mode::kGrid;
  grid.grid_resolution = 256;
  DecodeOptions gr;
  for (int t = 0; t < 10; ++t) {
    const SampleSet s = sine_samples(200 + t, 500);
    const auto enc = encode_explicit(cfg, s, RefinementMode::kNone);
    const double x = rng.uniform(0.05, 0.95);
    gr.seed = 1000 + t;
    const double yg =
        decode_at(cfg, enc, std::span<const double>(&x, 1), grid).y;
    const double yd = decode_at(cfg, enc, std::span<const double>(&x, 1), gr).y;
    CHECK(std::abs(yg - yd) <= 1.0 / grid.grid_resolution);
  }
}

TEST_CASE("implicit encode and query") {
  const auto cfg = make_config(2048, 2, 10.0, 2.5, 20);
  SUBCASE("single point queries to 1") {
    SampleSet s;
    s.inputs.resize(1, 2);
    s.inputs << 0.2, 0.6;
    const auto enc = encode_implicit(cfg, s, RefinementMode::kNone);
    const std::vector<double> q{0.2, 0.6};
    CHECK(query_implicit(cfg, enc, q) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("on-circle vs origin separation") {
    DatasetSpec spec;
    spec.kind = DatasetKind::kCircle;
    spec.params = {{"n", 1000.0}};
    spec.seed = 3;
    const auto data = generate(spec);
    const auto enc = encode_implicit(cfg, data.samples, RefinementMode::kNone);
    const std::vector<double> on{1.0, 0.0};
    const std::vector<double> origin{0.0, 0.0};
    CHECK(query_implicit(cfg, enc, on) >=
          3.0 * std::abs(query_implicit(cfg, enc, origin)));
  }
  SUBCASE("outputs present is an error") {
    SampleSet s;
    s.inputs.resize(1, 2);
    s.inputs << 0.2, 0.6;
    s.outputs = Eigen::VectorXd::Constant(1, 0.5);
    CHECK_THROWS_AS(encode_implicit(cfg, s, RefinementMode::kNone), ValueError);
  }
}

TEST_CASE("error paths") {
  const auto cfg = make_config(256, 1, 10.0, 2.5, 21);
  SUBCASE("empty sample set") {
    SampleSet s;
    s.inputs.resize(0, 1);
    CHECK_THROWS_AS(encode_explicit(cfg, s, RefinementMode::kNone), ValueError);
  }
  SUBCASE("missing outputs for explicit codec") {
    SampleSet s;
    s.inputs.resize(2, 1);
    s.inputs << 0.1, 0.2;
    CHECK_THROWS_AS(encode_explicit(cfg, s, RefinementMode::kNone), ValueError);
  }
  SUBCASE("fingerprint mismatch") {
    SampleSet s;
    s.inputs.resize(1, 1);
    s.inputs(0, 0) = 0.4;
    s.outputs = Eigen::VectorXd::Constant(1, 0.7);
    const auto enc = encode_explicit(cfg, s, RefinementMode::kNone);
    const auto other = make_config(256, 1, 10.0, 2.5, 22);
    const double x = 0.4;
    CHECK_THROWS_AS(decode_at(other, enc, std::span<const double>(&x, 1)),
                    ConfigError);
  }
}

TEST_CASE("reconstruct matches per-point decode") {
  const auto cfg = make_config(2048, 1, 10.0, 2.5, 23);
  const SampleSet s = sine_samples(300, 400);
  const auto enc = encode_explicit(cfg, s, RefinementMode::kNone);

  Eigen::MatrixXd queries(5, 1);
  queries << 0.1, 0.3, 0.5, 0.7, 0.9;
  DecodeOptions grid;
  grid.mode = DecodeOptions::Mode::kGrid;
  grid.grid_resolution = 512;
  const Eigen::VectorXd rec = reconstruct(cfg, enc, queries, grid);
  for (int i = 0; i < 5; ++i) {
    const double x = queries(i, 0);
    CHECK(rec[i] ==
          decode_at(cfg, enc, std::span<const double>(&x, 1), grid).y);
  }
}
