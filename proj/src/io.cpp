#include "hdfe/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "hdfe/errors.hpp"

namespace hdfe {

namespace {

std::string fmt17(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double parse_double(const std::string& tok, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw FormatError(where + ": cannot parse number '" + tok + "'");
  }
}

std::uint64_t parse_u64(const std::string& tok, const std::string& where) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw FormatError(where + ": cannot parse integer '" + tok + "'");
  }
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::map<std::string, std::string> read_kv_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

}  // namespace

void write_config(const std::filesystem::path& path, const ConfigParams& p) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << "format-version = 1\n"
      << "N = " << p.n_dim << "\n"
      << "m = " << p.input_dim << "\n"
      << "alpha = " << fmt17(p.alpha) << "\n"
      << "beta = " << fmt17(p.beta) << "\n"
      << "seed = " << p.seed << "\n";
}

ConfigParams read_config(const std::filesystem::path& path) {
  const auto kv = read_kv_file(path);
  for (const auto& [k, v] : kv) {
    if (k != "format-version" && k != "N" && k != "m" && k != "alpha" &&
        k != "beta" && k != "seed") {
      throw FormatError(path.string() + ": unknown key '" + k + "'");
    }
  }
  auto need = [&](const std::string& k) -> const std::string& {
    auto it = kv.find(k);
    if (it == kv.end()) {
      throw FormatError(path.string() + ": missing key '" + k + "'");
    }
    return it->second;
  };
  if (parse_u64(need("format-version"), path.string()) != 1) {
    throw FormatError(path.string() + ": unsupported format-version");
  }
  ConfigParams p;
  p.n_dim = static_cast<Eigen::Index>(parse_u64(need("N"), path.string()));
  p.input_dim = static_cast<Eigen::Index>(parse_u64(need("m"), path.string()));
  p.alpha = parse_double(need("alpha"), path.string());
  p.beta = parse_double(need("beta"), path.string());
  p.seed = parse_u64(need("seed"), path.string());
  return p;
}

EncodingConfig load_config(const std::filesystem::path& path) {
  const ConfigParams p = read_config(path);
  return make_config(p.n_dim, p.input_dim, p.alpha, p.beta, p.seed);
}

void write_samples_csv(const std::filesystem::path& path, const SampleSet& s) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  for (Eigen::Index c = 0; c < s.inputs.cols(); ++c) {
    out << (c ? "," : "") << "x" << (c + 1);
  }
  if (s.outputs) out << ",y";
  out << "\n";
  for (Eigen::Index i = 0; i < s.inputs.rows(); ++i) {
    for (Eigen::Index c = 0; c < s.inputs.cols(); ++c) {
      out << (c ? "," : "") << fmt17(s.inputs(i, c));
    }
    if (s.outputs) out << "," << fmt17((*s.outputs)[i]);
    out << "\n";
  }
}

SampleSet read_samples_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(path.string() + ":1: missing header");
  }
  std::vector<std::string> cols;
  {
    std::stringstream ss(trim(line));
    std::string tok;
    while (std::getline(ss, tok, ',')) cols.push_back(trim(tok));
  }
  bool has_y = !cols.empty() && cols.back() == "y";
  const Eigen::Index m =
      static_cast<Eigen::Index>(cols.size()) - (has_y ? 1 : 0);
  if (m < 1) throw FormatError(path.string() + ":1: no input columns");
  for (Eigen::Index c = 0; c < m; ++c) {
    if (cols[static_cast<std::size_t>(c)] != "x" + std::to_string(c + 1)) {
      throw FormatError(path.string() + ":1: expected column 'x" +
                        std::to_string(c + 1) + "', got '" +
                        cols[static_cast<std::size_t>(c)] + "'");
    }
  }

  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(t);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      row.push_back(
          parse_double(trim(tok), path.string() + ":" + std::to_string(lineno)));
    }
    if (static_cast<Eigen::Index>(row.size()) != m + (has_y ? 1 : 0)) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) +
                        ": expected " + std::to_string(m + (has_y ? 1 : 0)) +
                        " fields, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(path.string() + ": no samples");

  SampleSet s;
  s.inputs.resize(static_cast<Eigen::Index>(rows.size()), m);
  if (has_y) s.outputs = Eigen::VectorXd(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Eigen::Index c = 0; c < m; ++c) {
      s.inputs(static_cast<Eigen::Index>(i), c) =
          rows[i][static_cast<std::size_t>(c)];
    }
    if (has_y) {
      (*s.outputs)[static_cast<Eigen::Index>(i)] =
          rows[i][static_cast<std::size_t>(m)];
    }
  }
  return s;
}

void write_dataset(const std::filesystem::path& csv_path,
                   const DatasetSpec& spec, const GeneratedDataset& data) {
  write_samples_csv(csv_path, data.samples);
  std::ofstream meta(csv_path.string() + ".meta");
  if (!meta) {
    throw FormatError("cannot write '" + csv_path.string() + ".meta'");
  }
  meta << "kind = " << to_string(spec.kind) << "\n"
       << "seed = " << spec.seed << "\n";
  for (const auto& [k, v] : spec.params) {
    meta << "param." << k << " = " << fmt17(v) << "\n";
  }
  if (data.ground_truth) {
    meta << "ground_truth =";
    for (Eigen::Index i = 0; i < data.ground_truth->size(); ++i) {
      meta << (i ? "," : " ") << fmt17((*data.ground_truth)[i]);
    }
    meta << "\n";
  }
  meta << "complexity = " << fmt17(data.complexity) << "\n";
}

std::map<std::string, std::string> read_sidecar(
    const std::filesystem::path& meta_path) {
  return read_kv_file(meta_path);
}

void append_sidecar(const std::filesystem::path& meta_path,
                    const std::map<std::string, std::string>& entries) {
  std::ofstream meta(meta_path, std::ios::app);
  if (!meta) throw FormatError("cannot write '" + meta_path.string() + "'");
  for (const auto& [k, v] : entries) meta << k << " = " << v << "\n";
}

namespace {

constexpr char kMagic[4] = {'H', 'D', 'F', 'E'};
constexpr std::uint16_t kEncodingVersion = 1;

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T take(std::ifstream& in, const std::filesystem::path& path) {
  T v;
  const auto offset = in.tellg();
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) {
    throw FormatError(path.string() + ": truncated at byte offset " +
                      std::to_string(static_cast<long long>(offset)));
  }
  return v;
}

EncodingHeader read_header(std::ifstream& in,
                           const std::filesystem::path& path) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(path.string() + ": bad magic at byte offset 0");
  }
  EncodingHeader h;
  h.version = take<std::uint16_t>(in, path);
  if (h.version != kEncodingVersion) {
    throw FormatError(path.string() + ": unsupported version " +
                      std::to_string(h.version) + " at byte offset 4");
  }
  h.n_dim = take<std::uint32_t>(in, path);
  h.input_dim = take<std::uint16_t>(in, path);
  h.alpha = take<double>(in, path);
  h.beta = take<double>(in, path);
  h.seed = take<std::uint64_t>(in, path);
  const auto tag = take<std::uint8_t>(in, path);
  if (tag > 2) {
    throw FormatError(path.string() + ": unknown refinement tag " +
                      std::to_string(tag));
  }
  h.refinement = static_cast<RefinementMode>(tag);
  return h;
}

}  // namespace

void write_encoding(const std::filesystem::path& path,
                    const EncodingConfig& cfg, const FunctionEncoding& enc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out.write(kMagic, 4);
  put(out, kEncodingVersion);
  put(out, static_cast<std::uint32_t>(cfg.dim()));
  put(out, static_cast<std::uint16_t>(cfg.input_dim()));
  put(out, cfg.alpha());
  put(out, cfg.beta());
  put(out, cfg.seed());
  put(out, static_cast<std::uint8_t>(enc.refinement));
  for (Eigen::Index k = 0; k < enc.vector.size(); ++k) {
    put(out, enc.vector[k].real());
    put(out, enc.vector[k].imag());
  }
  if (enc.weights) {
    put(out, static_cast<std::uint64_t>(enc.weights->size()));
    for (Eigen::Index i = 0; i < enc.weights->size(); ++i) {
      put(out, (*enc.weights)[i]);
    }
  }
}

std::pair<EncodingHeader, FunctionEncoding> read_encoding(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  const EncodingHeader h = read_header(in, path);

  CVec values(static_cast<Eigen::Index>(h.n_dim));
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const double re = take<double>(in, path);
    const double im = take<double>(in, path);
    values[k] = Complex(re, im);
  }

  FunctionEncoding enc{HyperVector(std::move(values)),
                       config_fingerprint(h.n_dim, h.input_dim, h.alpha,
                                          h.beta, h.seed),
                       h.refinement, std::nullopt};

  // Optional trailing weights block.
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof(count));
  if (in) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(count));
    for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = take<double>(in, path);
    enc.weights = std::move(w);
  }
  return {h, std::move(enc)};
}

EncodingHeader read_encoding_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return read_header(in, path);
}

std::pair<SampleSet, RescaleRecord> rescale_outputs(const SampleSet& s,
                                                    double lo, double hi) {
  if (!s.outputs) throw ValueError("rescale_outputs: no outputs");
  if (!(hi > lo)) throw ValueError("rescale_outputs: degenerate range");
  RescaleRecord rec{lo, hi, false};
  SampleSet out = s;
  for (Eigen::Index i = 0; i < out.outputs->size(); ++i) {
    (*out.outputs)[i] = rec.apply((*out.outputs)[i]);
  }
  return {std::move(out), rec};
}

std::pair<SampleSet, RescaleRecord> rescale_outputs_auto(const SampleSet& s) {
  if (!s.outputs) throw ValueError("rescale_outputs: no outputs");
  const double lo = s.outputs->minCoeff();
  const double hi = s.outputs->maxCoeff();
  if (hi > lo) return rescale_outputs(s, lo, hi);
  RescaleRecord rec{lo, hi, true};
  SampleSet out = s;
  out.outputs->setConstant(0.5);
  return {std::move(out), rec};
}

}  // namespace hdfe
