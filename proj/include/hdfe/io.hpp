#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>

#include "hdfe/codec.hpp"
#include "hdfe/datagen.hpp"
#include "hdfe/encoding.hpp"

namespace hdfe {

// --- config text ------------------------------------------------------
// Plain `key = value` lines; see write_config for the exact keys. Phi and
// Psi are regenerated from the seed, never stored.

struct ConfigParams {
  Eigen::Index n_dim = 0;
  Eigen::Index input_dim = 1;
  double alpha = 10.0;
  double beta = 2.5;
  std::uint64_t seed = 0;
};

void write_config(const std::filesystem::path& path, const ConfigParams& p);
ConfigParams read_config(const std::filesystem::path& path);
EncodingConfig load_config(const std::filesystem::path& path);

// --- samples CSV ------------------------------------------------------
// Header `x1,...,xm[,y]`, one sample per row, 17 significant digits.

void write_samples_csv(const std::filesystem::path& path, const SampleSet& s);
SampleSet read_samples_csv(const std::filesystem::path& path);

// Dataset = samples CSV + structured-text sidecar (<csv path> + ".meta")
// carrying the generating spec, ground truth, complexity, and any output
// rescale applied later.
void write_dataset(const std::filesystem::path& csv_path,
                   const DatasetSpec& spec, const GeneratedDataset& data);
std::map<std::string, std::string> read_sidecar(
    const std::filesystem::path& meta_path);
void append_sidecar(const std::filesystem::path& meta_path,
                    const std::map<std::string, std::string>& entries);

// --- encoding binary --------------------------------------------------
// Layout: magic "HDFE", version u16, N u32, m u16, alpha f64, beta f64,
// seed u64, refinement tag u8, N (f64 re, f64 im) pairs, then an optional
// weights block (u64 count + count f64). All little-endian. Readers
// reject unknown versions.

struct EncodingHeader {
  std::uint16_t version = 1;
  std::uint32_t n_dim = 0;
  std::uint16_t input_dim = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  RefinementMode refinement = RefinementMode::kNone;
};

void write_encoding(const std::filesystem::path& path,
                    const EncodingConfig& cfg, const FunctionEncoding& enc);
std::pair<EncodingHeader, FunctionEncoding> read_encoding(
    const std::filesystem::path& path);
EncodingHeader read_encoding_header(const std::filesystem::path& path);

// --- output rescaling -------------------------------------------------
// Decoding searches y in [0, 1]; callers with other ranges map outputs in
// and decoded values back out.

struct RescaleRecord {
  double lo = 0.0;
  double hi = 1.0;
  bool degenerate = false;  // constant outputs, mapped to 0.5

  double apply(double y) const {
    return degenerate ? 0.5 : (y - lo) / (hi - lo);
  }
  double invert(double t) const { return degenerate ? lo : lo + t * (hi - lo); }
};

// Affine map of outputs from [lo, hi] onto [0, 1]. Requires hi > lo.
std::pair<SampleSet, RescaleRecord> rescale_outputs(const SampleSet& s,
                                                    double lo, double hi);
// Bounds taken from the data; constant outputs become the degenerate
// record rather than an error.
std::pair<SampleSet, RescaleRecord> rescale_outputs_auto(const SampleSet& s);

}  // namespace hdfe
