#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

#include "hdfe/errors.hpp"

namespace hdfe {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;

// An N-dimensional complex vector, the carrier of all encodings.
// Immutable after construction; operations return fresh values, so
// instances can be shared freely across threads.
class HyperVector {
 public:
  explicit HyperVector(CVec values) : values_(std::move(values)) {
    if (values_.size() == 0) throw ValueError("HyperVector: empty vector");
  }

  static HyperVector ones(Eigen::Index n) {
    return HyperVector(CVec::Ones(n));
  }

  Eigen::Index size() const { return values_.size(); }
  const CVec& values() const { return values_; }
  Complex operator[](Eigen::Index k) const { return values_[k]; }

  double norm() const { return values_.norm(); }

  // True when every element has modulus 1 within tol. Phase vectors are
  // what the fractional power encoders emit and what bind/unbind preserve.
  bool is_phase_vector(double tol = 1e-9) const {
    for (Eigen::Index k = 0; k < values_.size(); ++k) {
      if (std::abs(std::abs(values_[k]) - 1.0) > tol) return false;
    }
    return true;
  }

 private:
  CVec values_;
};

enum class SimilarityKind {
  kRealCosine,  // Re<a,b> / (|a||b|), in [-1, 1]
  kQuad,        // |<a,b>|^2 / (|a|^2 |b|^2), in [0, 1]
};

struct Similarity {
  double value;
  SimilarityKind convention;
};

// Unnormalized complex inner product sum_k a_k * conj(b_k).
Complex inner(const HyperVector& a, const HyperVector& b);

// Element-wise complex multiplication. Commutative, distributive over
// addition, similarity preserving for unit-modulus operands.
HyperVector bind(const HyperVector& a, const HyperVector& b);

// Element-wise complex division; inverse of bind. Throws ValueError when
// an element of b is zero.
HyperVector unbind(const HyperVector& a, const HyperVector& b);

Similarity similarity(const HyperVector& a, const HyperVector& b,
                      SimilarityKind kind);

// Shorthands for the two conventions.
double real_cosine(const HyperVector& a, const HyperVector& b);
double quad_similarity(const HyperVector& a, const HyperVector& b);

// Weighted element-wise sum, not normalized. Summation runs in input
// order so results are reproducible. Weights must be nonnegative with at
// least one positive entry.
HyperVector superpose(std::span<const double> weights,
                      std::span<const HyperVector> vectors);

// Scale to unit L2 norm; direction unchanged. Throws on the zero vector.
HyperVector normalize(const HyperVector& a);

}  // namespace hdfe
