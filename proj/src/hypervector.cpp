#include "hdfe/hypervector.hpp"

#include <cmath>

namespace hdfe {

namespace {

void require_same_length(const HyperVector& a, const HyperVector& b,
                         const char* op) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(op) + ": length mismatch (" +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
  }
}

}  // namespace

Complex inner(const HyperVector& a, const HyperVector& b) {
  require_same_length(a, b, "inner");
  // Eigen's dot conjugates its first argument: a.dot(b) = sum conj(a) b.
  return b.values().dot(a.values());
}

HyperVector bind(const HyperVector& a, const HyperVector& b) {
  require_same_length(a, b, "bind");
  return HyperVector(a.values().cwiseProduct(b.values()));
}

HyperVector unbind(const HyperVector& a, const HyperVector& b) {
  require_same_length(a, b, "unbind");
  const CVec& bv = b.values();
  for (Eigen::Index k = 0; k < bv.size(); ++k) {
    if (bv[k] == Complex(0.0, 0.0)) {
      throw ValueError("unbind: zero element at index " + std::to_string(k));
    }
  }
  return HyperVector(a.values().cwiseQuotient(bv));
}

Similarity similarity(const HyperVector& a, const HyperVector& b,
                      SimilarityKind kind) {
  require_same_length(a, b, "similarity");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw ValueError("similarity: undefined for a zero vector");
  }
  const Complex ip = inner(a, b);
  if (kind == SimilarityKind::kRealCosine) {
    return {ip.real() / (na * nb), kind};
  }
  return {std::norm(ip) / (na * na * nb * nb), kind};
}

double real_cosine(const HyperVector& a, const HyperVector& b) {
  return similarity(a, b, SimilarityKind::kRealCosine).value;
}

double quad_similarity(const HyperVector& a, const HyperVector& b) {
  return similarity(a, b, SimilarityKind::kQuad).value;
}

HyperVector superpose(std::span<const double> weights,
                      std::span<const HyperVector> vectors) {
  if (vectors.empty()) throw ValueError("superpose: empty input");
  if (weights.size() != vectors.size()) {
    throw DimensionError("superpose: " + std::to_string(weights.size()) +
                         " weights for " + std::to_string(vectors.size()) +
                         " vectors");
  }
  bool any_positive = false;
  for (double w : weights) {
    if (w < 0.0) throw ValueError("superpose: negative weight");
    if (w > 0.0) any_positive = true;
  }
  if (!any_positive) throw ValueError("superpose: all weights zero");

  const Eigen::Index n = vectors[0].size();
  CVec acc = CVec::Zero(n);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != n) {
      throw DimensionError("superpose: vector " + std::to_string(i) +
                           " has length " + std::to_string(vectors[i].size()) +
                           ", expected " + std::to_string(n));
    }
    acc += weights[i] * vectors[i].values();
  }
  return HyperVector(std::move(acc));
}

HyperVector normalize(const HyperVector& a) {
  const double n = a.norm();
  if (n == 0.0) throw ValueError("normalize: zero vector");
  return HyperVector(a.values() / n);
}

}  // namespace hdfe
