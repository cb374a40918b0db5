#pragma once

// Random instance generators and independent oracles shared by the test suites.
// Nothing here calls into the solver paths it is used to check.

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <gtest/gtest.h>

#include "coopsec/error.hpp"
#include "coopsec/numerics.hpp"
#include "coopsec/rng.hpp"

namespace coopsec::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : stream_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return stream_.uniform(lo, hi); }
  Complex normal() { return stream_.complex_normal(1.0); }

  ComplexVector vector(Eigen::Index n, double scale = 1.0) {
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = scale * normal();
    return v;
  }

  ComplexMatrix matrix(Eigen::Index rows, Eigen::Index cols, double scale = 1.0) {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = scale * normal();
    return m;
  }

  /// X X^H + shift I with X n x n Gaussian.
  ComplexMatrix hermitian_pd(Eigen::Index n, double shift = 0.1) {
    const ComplexMatrix x = matrix(n, n);
    return x * x.adjoint() + shift * ComplexMatrix::Identity(n, n);
  }

  /// Uniformly distributed unit vector in C^n.
  ComplexVector unit_vector(Eigen::Index n) {
    ComplexVector v = vector(n);
    return v / v.norm();
  }

  std::uint64_t next() { return stream_.next_u64(); }

 private:
  rng::Stream stream_;
};

/// Error code thrown by `fn`; records a test failure when nothing is thrown.
template <typename Fn>
Errc code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected coopsec::Error";
  return Errc::IoError;
}

[[nodiscard]] inline double rayleigh(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexVector& y) {
  return y.dot(a * y).real() / y.dot(b * y).real();
}

/// Max of the Rayleigh quotient over `samples` random unit vectors.
[[nodiscard]] inline double sampled_max_quotient(const ComplexMatrix& a, const ComplexMatrix& b, int samples,
                                                 std::uint64_t seed) {
  Gen gen(seed);
  double best = -INFINITY;
  for (int s = 0; s < samples; ++s) best = std::max(best, rayleigh(a, b, gen.unit_vector(a.rows())));
  return best;
}

/// Random-sphere search refined by a shrinking randomized local search around the best
/// sample. Converges to the maximal quotient without using any eigen-decomposition.
[[nodiscard]] inline double searched_max_quotient(const ComplexMatrix& a, const ComplexMatrix& b, int samples,
                                                  int refinements, std::uint64_t seed) {
  Gen gen(seed);
  const Eigen::Index n = a.rows();
  ComplexVector best_v = gen.unit_vector(n);
  double best = rayleigh(a, b, best_v);
  for (int s = 1; s < samples; ++s) {
    ComplexVector v = gen.unit_vector(n);
    const double q = rayleigh(a, b, v);
    if (q > best) best = q, best_v = std::move(v);
  }
  double step = 0.1;
  for (int r = 0; r < refinements; ++r) {
    ComplexVector v = best_v + step * gen.vector(n);
    v /= v.norm();
    const double q = rayleigh(a, b, v);
    if (q > best) {
      best = q;
      best_v = std::move(v);
    } else {
      step = std::max(step * 0.999, 1e-9);
    }
  }
  return best;
}

/// Pseudo-inverse through a full SVD, thresholded like the library's rank rule.
[[nodiscard]] inline ComplexMatrix svd_pinv(const ComplexMatrix& m) {
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  ComplexMatrix sigma_pinv = ComplexMatrix::Zero(m.cols(), m.rows());
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * sv(0)) sigma_pinv(i, i) = 1.0 / sv(i);
  return svd.matrixV() * sigma_pinv * svd.matrixU().adjoint();
}

/// Secrecy capacity of w for one eavesdropper, Stage 1 ignored; written out directly.
[[nodiscard]] inline double secrecy_oracle(const ComplexVector& w, const ComplexVector& h, const ComplexVector& g,
                                           double noise) {
  const double cd = 0.5 * std::log2(1.0 + std::norm(w.dot(h)) / noise);
  const double ce = 0.5 * std::log2(1.0 + std::norm(w.dot(g)) / noise);
  return std::max(0.0, cd - ce);
}

/// (s2 + w^H R_h w) / (s2 + w^H R_g w).
[[nodiscard]] inline double quotient_oracle(const ComplexVector& w, const ComplexVector& h, const ComplexMatrix& r_g,
                                            double noise) {
  return (noise + std::norm(w.dot(h))) / (noise + w.dot(r_g * w).real());
}

/// Realistic-scale random channel: entries with magnitude ~ d^-2 for d in [20, 100] m.
[[nodiscard]] inline ComplexVector far_field_channel(Gen& gen, Eigen::Index n) {
  ComplexVector v(n);
  const double d = gen.uniform(20.0, 100.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double di = d + gen.uniform(-1.65, 1.65);
    v(i) = std::polar(std::pow(di, -2.0), gen.uniform(0.0, 2.0 * M_PI));
  }
  return v;
}

}  // namespace coopsec::testing
