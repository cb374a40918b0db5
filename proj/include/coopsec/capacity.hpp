#pragma once

// Capacity and secrecy-capacity evaluation for a given weight vector, plus the
// direct-transmission (no cooperation) baseline.
//
// Capacities are in bits/s/Hz. Cooperative rates carry the 1/2 factor of the two-slot
// protocol; direct transmission occupies a single slot and has no such factor.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "coopsec/error.hpp"
#include "coopsec/numerics.hpp"

namespace coopsec {

/// Optional accounting for the Stage-1 broadcast, which the receivers combine (MRC)
/// with the Stage-2 signal. Disabled means the Stage-1 constants are exactly 1.
struct Stage1Accounting {
  bool enabled = false;
  double stage1_power = 0.0;  // W

  /// 1 + P1 |gain|^2 / noise when enabled, else 1.
  [[nodiscard]] double constant(Complex stage1_gain, double noise_power) const {
    return enabled ? 1.0 + stage1_power * std::norm(stage1_gain) / noise_power : 1.0;
  }
};

struct BeamformerSolution {
  ComplexVector w;
  double transmit_power = 0.0;  // W, ||w||^2
  double c_dest = 0.0;
  std::vector<double> c_eav;
  double secrecy_capacity = 0.0;
  /// Set when c_eav and secrecy_capacity are the Jensen lower bound under imperfect
  /// eavesdropper CSI rather than exact values.
  bool secrecy_is_lower_bound = false;
};

namespace detail {
inline void check_noise(double noise_power) {
  if (!(noise_power > 0.0)) throw Error(Errc::InvalidConfig, "noise power must be > 0");
}
/// 1/2 log2(constant + w^H R w / noise) given the quadratic form value.
[[nodiscard]] inline double half_log_rate(double constant, double quad, double noise_power) {
  return 0.5 * std::log2(constant + std::max(quad, 0.0) / noise_power);
}
}  // namespace detail

[[nodiscard]] inline double capacity_destination(const ComplexVector& w, const ComplexVector& h, double noise_power,
                                                 const Stage1Accounting& stage1 = {}, Complex h0 = {}) {
  if (w.size() != h.size()) throw Error(Errc::DimensionMismatch, "w and h lengths differ");
  detail::check_noise(noise_power);
  return detail::half_log_rate(stage1.constant(h0, noise_power), std::norm(w.dot(h)), noise_power);
}

[[nodiscard]] inline double capacity_eavesdropper(const ComplexVector& w, const ComplexVector& g, double noise_power,
                                                  const Stage1Accounting& stage1 = {}, Complex g0j = {}) {
  if (w.size() != g.size()) throw Error(Errc::DimensionMismatch, "w and g lengths differ");
  detail::check_noise(noise_power);
  return detail::half_log_rate(stage1.constant(g0j, noise_power), std::norm(w.dot(g)), noise_power);
}

/// max(0, c_dest - max_j c_eav[j]); c_dest when there are no eavesdroppers.
[[nodiscard]] inline double secrecy_capacity(double c_dest, std::span<const double> c_eav) {
  if (c_eav.empty()) return c_dest;
  return std::max(0.0, c_dest - *std::max_element(c_eav.begin(), c_eav.end()));
}

/// Evaluates every capacity for `w` against perfectly known channels.
[[nodiscard]] inline BeamformerSolution evaluate(const ComplexVector& w, const ComplexVector& h, const ComplexMatrix& g,
                                                 double noise_power, const Stage1Accounting& stage1 = {}) {
  if (g.rows() != h.size()) throw Error(Errc::DimensionMismatch, "G rows must equal N");
  BeamformerSolution s;
  s.w = w;
  s.transmit_power = w.squaredNorm();
  s.c_dest = capacity_destination(w, h, noise_power, stage1, h.size() ? h(0) : Complex{});
  s.c_eav.resize(static_cast<std::size_t>(g.cols()));
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    s.c_eav[static_cast<std::size_t>(j)] = capacity_eavesdropper(w, g.col(j), noise_power, stage1, g(0, j));
  s.secrecy_capacity = secrecy_capacity(s.c_dest, s.c_eav);
  return s;
}

/// Evaluates the Jensen lower bound when only estimates g_hat_j and the common error
/// covariance r_delta are known: eavesdropper j is charged with w^H (g_hat g_hat^H + R_delta) w.
[[nodiscard]] inline BeamformerSolution evaluate_bound(const ComplexVector& w, const ComplexVector& h,
                                                       const ComplexMatrix& g_hat, const ComplexMatrix& r_delta,
                                                       double noise_power, const Stage1Accounting& stage1 = {}) {
  if (g_hat.rows() != h.size() || r_delta.rows() != h.size() || r_delta.cols() != h.size())
    throw Error(Errc::DimensionMismatch, "estimate or covariance dimensions do not match N");
  detail::check_noise(noise_power);
  BeamformerSolution s;
  s.w = w;
  s.transmit_power = w.squaredNorm();
  s.c_dest = capacity_destination(w, h, noise_power, stage1, h.size() ? h(0) : Complex{});
  const double error_term = w.dot(r_delta * w).real();
  s.c_eav.resize(static_cast<std::size_t>(g_hat.cols()));
  for (Eigen::Index j = 0; j < g_hat.cols(); ++j) {
    const double quad = std::norm(w.dot(g_hat.col(j))) + error_term;
    s.c_eav[static_cast<std::size_t>(j)] =
        detail::half_log_rate(stage1.constant(g_hat(0, j), noise_power), quad, noise_power);
  }
  s.secrecy_capacity = secrecy_capacity(s.c_dest, s.c_eav);
  s.secrecy_is_lower_bound = true;
  return s;
}

namespace detail {
[[nodiscard]] inline double strongest_eavesdropper_gain(std::span<const Complex> g0) {
  double best = 0.0;
  for (Complex g : g0) best = std::max(best, std::norm(g));
  return best;
}
}  // namespace detail

/// Secrecy capacity of single-slot source-only transmission at power `power`:
/// max(0, log2(1 + P|h0|^2/s2) - max_j log2(1 + P|g0j|^2/s2)).
[[nodiscard]] inline double direct_secrecy(double power, Complex h0, std::span<const Complex> g0, double noise_power) {
  detail::check_noise(noise_power);
  if (!(power >= 0.0)) throw Error(Errc::InvalidConfig, "power must be >= 0");
  const double c_dest = std::log2(1.0 + power * std::norm(h0) / noise_power);
  const double c_eav = std::log2(1.0 + power * detail::strongest_eavesdropper_gain(g0) / noise_power);
  return std::max(0.0, c_dest - c_eav);
}

/// Smallest power at which direct_secrecy reaches `target_cs`.
/// Throws Error(Infeasible) when |h0|^2 <= 2^target * max_j |g0j|^2.
[[nodiscard]] inline double direct_min_power(double target_cs, Complex h0, std::span<const Complex> g0,
                                             double noise_power) {
  detail::check_noise(noise_power);
  if (!(target_cs > 0.0)) throw Error(Errc::InvalidConfig, "target secrecy capacity must be > 0");
  const double ratio = std::exp2(target_cs);
  const double a = std::norm(h0) / noise_power;
  const double b = detail::strongest_eavesdropper_gain(g0) / noise_power;
  const double margin = a - ratio * b;
  if (!(margin > 0.0)) throw Error(Errc::Infeasible, "main channel too weak for the requested secrecy rate");
  return (ratio - 1.0) / margin;
}

}  // namespace coopsec
