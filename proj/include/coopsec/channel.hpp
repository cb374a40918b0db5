#pragma once

// Network geometry sampling and line-of-sight channel synthesis.
//
// Node 0 (the source) sits at the cluster center; relays 1..N-1 are area-uniform in the
// cluster disk. The destination lies on the positive x axis, eavesdroppers at uniform
// range and azimuth around the cluster center.
//
// Draws are organized as independent per-entity streams derived from the scenario seed:
// relay i always uses the same stream and so does eavesdropper j. Growing N or J
// therefore extends a scenario instead of resampling it.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "coopsec/error.hpp"
#include "coopsec/numerics.hpp"
#include "coopsec/rng.hpp"

namespace coopsec {

[[nodiscard]] inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
[[nodiscard]] inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

enum class PhaseModel { Geometric, UniformRandom };

[[nodiscard]] constexpr std::string_view to_string(PhaseModel m) noexcept {
  return m == PhaseModel::Geometric ? "geometric" : "uniform_random";
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

[[nodiscard]] inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct GeometryConfig {
  double wavelength = 0.33;                 // m
  double cluster_radius = 5.0 * 0.33;       // m
  double path_loss_exponent = 4.0;
  double noise_power = 1e-9;                // W (-60 dBm)
  std::size_t n_nodes = 10;                 // source + relays
  std::size_t n_eavesdroppers = 1;
  double dest_distance = 20.0 * 5.0 * 0.33;  // m
  double eav_distance_min = 40.0 * 5.0 * 0.33;
  double eav_distance_max = 100.0 * 5.0 * 0.33;
  PhaseModel phase_model = PhaseModel::Geometric;

  /// Throws Error(InvalidConfig) naming the first violated constraint.
  void validate() const {
    auto fail = [](const std::string& msg) { throw Error(Errc::InvalidConfig, msg); };
    if (!(wavelength > 0.0)) fail("wavelength must be > 0");
    if (!(cluster_radius > 0.0)) fail("cluster_radius must be > 0");
    if (!(noise_power > 0.0)) fail("noise_power must be > 0");
    if (!(path_loss_exponent >= 2.0)) fail("path_loss_exponent must be >= 2");
    if (n_nodes < 1) fail("n_nodes must be >= 1");
    if (!(dest_distance > cluster_radius)) fail("dest_distance must exceed cluster_radius");
    if (!(eav_distance_min > cluster_radius)) fail("eavesdroppers must lie outside the cluster");
    if (!(eav_distance_min <= eav_distance_max)) fail("eav_distance_min must be <= eav_distance_max");
  }
};

struct Scenario {
  std::vector<Point> node_positions;  // node 0 = source
  Point dest_position;
  std::vector<Point> eav_positions;
  ComplexVector h;   // N, node -> destination
  ComplexMatrix G;   // N x J, column j = node -> eavesdropper j
  double noise_power = 0.0;

  [[nodiscard]] std::size_t n_nodes() const { return static_cast<std::size_t>(h.size()); }
  [[nodiscard]] std::size_t n_eavesdroppers() const { return static_cast<std::size_t>(G.cols()); }
  /// Source-to-destination gain.
  [[nodiscard]] Complex h0() const { return h(0); }
  /// Source-to-eavesdropper gains.
  [[nodiscard]] std::vector<Complex> g0() const {
    std::vector<Complex> out(static_cast<std::size_t>(G.cols()));
    for (Eigen::Index j = 0; j < G.cols(); ++j) out[static_cast<std::size_t>(j)] = G(0, j);
    return out;
  }
};

/// Line-of-sight gain d^(-exponent/2) * exp(j * phase).
[[nodiscard]] inline Complex los_gain(double distance_m, double phase, double path_loss_exponent) {
  if (!(distance_m > 0.0)) throw Error(Errc::NonPositiveDistance, "distance must be > 0");
  return std::pow(distance_m, -0.5 * path_loss_exponent) * Complex(std::cos(phase), std::sin(phase));
}

namespace detail {
enum StreamLabel : std::uint64_t { kRelay = 1, kEavesdropper = 2, kDestPhase = 3, kEavPhase = 4 };
}  // namespace detail

[[nodiscard]] inline Scenario sample_scenario(const GeometryConfig& config, std::uint64_t seed) {
  config.validate();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const std::size_t n = config.n_nodes;
  const std::size_t j_count = config.n_eavesdroppers;

  Scenario s;
  s.noise_power = config.noise_power;
  s.node_positions.resize(n);
  for (std::size_t i = 1; i < n; ++i) {
    rng::Stream stream(rng::derive_seed(seed, {detail::kRelay, i}));
    const double r = config.cluster_radius * std::sqrt(stream.uniform());
    const double az = two_pi * stream.uniform();
    s.node_positions[i] = {r * std::cos(az), r * std::sin(az)};
  }
  s.dest_position = {config.dest_distance, 0.0};
  s.eav_positions.resize(j_count);
  for (std::size_t j = 0; j < j_count; ++j) {
    rng::Stream stream(rng::derive_seed(seed, {detail::kEavesdropper, j}));
    const double range = stream.uniform(config.eav_distance_min, config.eav_distance_max);
    const double az = two_pi * stream.uniform();
    s.eav_positions[j] = {range * std::cos(az), range * std::sin(az)};
  }

  auto phase_for = [&](double d, std::initializer_list<std::uint64_t> label) {
    if (config.phase_model == PhaseModel::Geometric) return std::fmod(two_pi * d / config.wavelength, two_pi);
    rng::Stream stream(rng::derive_seed(seed, label));
    return two_pi * stream.uniform();
  };

  const auto ni = static_cast<Eigen::Index>(n);
  s.h.resize(ni);
  s.G.resize(ni, static_cast<Eigen::Index>(j_count));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double dd = distance(s.node_positions[i], s.dest_position);
    s.h(ii) = los_gain(dd, phase_for(dd, {detail::kDestPhase, i}), config.path_loss_exponent);
    for (std::size_t j = 0; j < j_count; ++j) {
      const double de = distance(s.node_positions[i], s.eav_positions[j]);
      s.G(ii, static_cast<Eigen::Index>(j)) =
          los_gain(de, phase_for(de, {detail::kEavPhase, i, j}), config.path_loss_exponent);
    }
  }
  return s;
}

}  // namespace coopsec
