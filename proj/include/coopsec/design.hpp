#pragma once

// Cooperative beamformer design.
//
// Fixed-power solvers maximize the secrecy capacity (or its Jensen lower bound under
// imperfect eavesdropper CSI) subject to ||w||^2 = P0. Min-power solvers find the
// cheapest w meeting a secrecy target, either in closed form (complete nulling) or by
// the power-descent iteration that alternates a fixed-power maximization with a
// rescaling onto the target.
//
// Weight vectors act on channels as w^H h: the destination receives w^H h s0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "coopsec/capacity.hpp"
#include "coopsec/error.hpp"
#include "coopsec/numerics.hpp"

namespace coopsec::design {

struct IterationRecord {
  std::size_t k = 0;
  double power = 0.0;  // P^(k), W
  double scale = 0.0;  // rho^(k), relative to the unrescaled w^(k)
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  bool converged = false;
  std::size_t iterations = 0;
};

struct IterationOptions {
  double threshold = 1e-9;  // W; stop once P^(k-1) - P^(k) falls below this
  std::size_t max_iter = 100;
};

/// Stage-1 validity condition for the power-descent iteration, evaluated at a
/// particular w. `printed_order` is mu * w^H R_h w > alpha * w^H R_g w, which is the
/// sign of dF/dz for F(z) = (alpha s2 + z^2 a) / (mu s2 + z^2 b); `swapped_order`
/// exchanges alpha and mu. Both coincide when Stage-1 accounting is off.
struct Stage1Condition {
  bool printed_order = true;
  bool swapped_order = true;
};

struct MinPowerResult {
  BeamformerSolution solution;
  IterationTrace trace;
  Stage1Condition stage1_condition;
};

namespace detail {

/// max over v, ||v||^2 = P, of (alpha s2 + v^H A v) / (mu s2 + v^H B v), with w = basis v.
///
/// `basis` has orthonormal columns spanning the admissible subspace (identity when
/// unconstrained); A and B are already restricted to it.
struct QuotientProblem {
  ComplexMatrix basis;
  ComplexMatrix num;  // basis^H R_h basis
  ComplexMatrix den;  // basis^H R_g basis
  ComplexVector matched;  // basis^H h
  double alpha = 1.0;
  double mu = 1.0;
  double noise_power = 1.0;

  [[nodiscard]] Eigen::Index dim() const { return num.rows(); }

  [[nodiscard]] double value(const ComplexVector& v) const {
    return (alpha * noise_power + v.dot(num * v).real()) / (mu * noise_power + v.dot(den * v).real());
  }

  /// Unit-norm maximizer at power `power`.
  [[nodiscard]] ComplexVector maximize(double power) const {
    const Eigen::Index k = dim();
    const ComplexMatrix eye = ComplexMatrix::Identity(k, k);
    const ComplexMatrix a = num + (alpha * noise_power / power) * eye;
    const ComplexMatrix b = den + (mu * noise_power / power) * eye;
    return numerics::largest_generalized_eigpair(a, b).vector;
  }

  /// Power rho^2 that puts unit direction u exactly on quotient `target`; nullopt when
  /// no finite power reaches it along u.
  [[nodiscard]] std::optional<double> rescale_power(const ComplexVector& u, double target) const {
    const double a = u.dot(num * u).real();
    const double b = u.dot(den * u).real();
    const double need = target * mu - alpha;
    if (need <= 0.0) return 0.0;
    const double margin = a - target * b;
    if (!(margin > 0.0)) return std::nullopt;
    return noise_power * need / margin;
  }

  [[nodiscard]] ComplexVector lift(const ComplexVector& v) const { return basis * v; }
};

struct LimitQuotient {
  double value = 0.0;  // sup_u (u^H A u) / (u^H B u); +inf when A is nonzero on null(B)
  ComplexVector direction;
};

/// The quotient's supremum as P -> infinity and a direction attaining it.
[[nodiscard]] inline LimitQuotient limit_quotient(const QuotientProblem& qp) {
  const double scale = std::max(qp.num.norm(), 1e-300);
  const ComplexMatrix null_b = numerics::null_space_basis(qp.den);
  if (null_b.cols() > 0) {
    const ComplexMatrix a_null = null_b.adjoint() * qp.num * null_b;
    if (a_null.norm() > numerics::kRankTolerance * scale) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (a_null + a_null.adjoint()));
      ComplexVector dir = null_b * es.eigenvectors().col(a_null.cols() - 1);
      return {std::numeric_limits<double>::infinity(), dir / dir.norm()};
    }
  }
  const ComplexMatrix range_b = numerics::range_basis(qp.den);
  if (range_b.cols() == 0) return {0.0, ComplexVector::Zero(qp.dim())};
  const auto pair = numerics::largest_generalized_eigpair(range_b.adjoint() * qp.num * range_b,
                                                         range_b.adjoint() * qp.den * range_b);
  ComplexVector dir = range_b * pair.vector;
  return {pair.value, dir / dir.norm()};
}

inline void check_power(double p0) {
  if (!(p0 > 0.0) || !std::isfinite(p0)) throw Error(Errc::InvalidConfig, "power budget must be positive");
}

inline void check_target(double target_cs) {
  if (!(target_cs > 0.0) || !std::isfinite(target_cs))
    throw Error(Errc::InvalidConfig, "secrecy target must be positive");
}

inline void check_noise(double noise_power) {
  if (!(noise_power > 0.0)) throw Error(Errc::InvalidConfig, "noise power must be > 0");
}

inline void check_covariance(const ComplexMatrix& r_delta, Eigen::Index n) {
  if (r_delta.rows() != n || r_delta.cols() != n)
    throw Error(Errc::DimensionMismatch, "error covariance must be N x N");
  if (!numerics::is_hermitian(r_delta)) throw Error(Errc::NotHermitian, "error covariance is not Hermitian");
  if (!numerics::is_hermitian_psd(r_delta))
    throw Error(Errc::NotPositiveDefinite, "error covariance is not positive semidefinite");
}

inline void check_channel(const ComplexVector& h) {
  if (h.size() == 0) throw Error(Errc::DimensionMismatch, "at least one cooperating node is required");
  if (!numerics::all_finite(h)) throw Error(Errc::DimensionMismatch, "non-finite channel entries");
  if (h.squaredNorm() == 0.0) throw Error(Errc::DegenerateChannel, "destination channel is zero");
}

/// Single-eavesdropper style problem over all of C^N with eavesdropper matrix r_g.
[[nodiscard]] inline QuotientProblem full_space_problem(const ComplexVector& h, const ComplexMatrix& r_g,
                                                        double noise_power, double alpha, double mu) {
  const Eigen::Index n = h.size();
  return {ComplexMatrix::Identity(n, n), h * h.adjoint(), r_g, h, alpha, mu, noise_power};
}

/// Problem restricted to null(g_hat^H) with residual eavesdropper matrix r_delta.
[[nodiscard]] inline QuotientProblem nulled_problem(const ComplexVector& h, const ComplexMatrix& g_hat,
                                                    const ComplexMatrix& r_delta, double noise_power, double alpha,
                                                    double mu) {
  const Eigen::Index n = h.size();
  const Eigen::Index j = g_hat.cols();
  if (n < j + 1) throw Error(Errc::InsufficientNodes, "nulling needs N >= J + 1");
  const ComplexMatrix g_rows = g_hat.adjoint();
  if (j > 0 && numerics::numerical_rank(numerics::singular_values(g_rows)) < j)
    throw Error(Errc::RankDeficient, "eavesdropper channel estimates are linearly dependent");
  ComplexMatrix t = numerics::null_space_basis(g_rows);
  const ComplexVector th = t.adjoint() * h;
  if (th.norm() <= numerics::kRankTolerance * h.norm())
    throw Error(Errc::RankDeficient, "destination channel lies in the eavesdropper span");
  ComplexMatrix num = th * th.adjoint();
  ComplexMatrix den = t.adjoint() * r_delta * t;
  return {std::move(t), std::move(num), std::move(den), th, alpha, mu, noise_power};
}

[[nodiscard]] inline Stage1Condition stage1_condition(const QuotientProblem& qp, const ComplexVector& v) {
  const double a = v.dot(qp.num * v).real();
  const double b = v.dot(qp.den * v).real();
  return {qp.mu * a > qp.alpha * b, qp.alpha * a > qp.mu * b};
}

/// Power-descent iteration. Returns the reduced-coordinate weights and the trace.
[[nodiscard]] inline std::pair<ComplexVector, IterationTrace> minimize_power(const QuotientProblem& qp,
                                                                             double target_cs,
                                                                             const IterationOptions& opts) {
  check_target(target_cs);
  const double target = std::pow(4.0, target_cs);
  IterationTrace trace;

  if (target * qp.mu <= qp.alpha) {
    trace.converged = true;
    trace.records.push_back({0, 0.0, 0.0});
    return {ComplexVector::Zero(qp.dim()), std::move(trace)};
  }

  const LimitQuotient limit = limit_quotient(qp);
  if (!(target < limit.value))
    throw Error(Errc::TargetUnachievable, "secrecy target exceeds the infinite-power supremum");

  // S0: matched filter projected onto the admissible subspace.
  ComplexVector u = qp.matched / qp.matched.norm();
  std::optional<double> power = qp.rescale_power(u, target);
  if (!power) {
    u = limit.direction;
    power = qp.rescale_power(u, target);
    if (!power) throw Error(Errc::TargetUnachievable, "no initial direction reaches the target");
  }
  trace.records.push_back({0, *power, std::sqrt(*power)});
  ComplexVector best = std::sqrt(*power) * u;
  double previous = *power;

  for (std::size_t k = 1; k <= opts.max_iter; ++k) {
    const ComplexVector dir = qp.maximize(previous);
    const std::optional<double> next = qp.rescale_power(dir, target);
    if (!next || *next >= previous) {
      // The maximizer at P^(k-1) reproduces the current iterate up to rounding.
      trace.converged = true;
      break;
    }
    trace.records.push_back({k, *next, std::sqrt(*next / previous)});
    best = std::sqrt(*next) * dir;
    const double drop = previous - *next;
    previous = *next;
    if (drop < opts.threshold) {
      trace.converged = true;
      break;
    }
  }
  trace.iterations = trace.records.size() - 1;
  if (!trace.converged) throw Error(Errc::MaxIterationsExceeded, "power iteration did not meet the threshold");
  return {std::move(best), std::move(trace)};
}

[[nodiscard]] inline double max_stage1_constant(const Stage1Accounting& stage1, const ComplexMatrix& g,
                                                double noise_power) {
  double mu = 1.0;
  for (Eigen::Index j = 0; j < g.cols(); ++j) mu = std::max(mu, stage1.constant(g(0, j), noise_power));
  return mu;
}

/// Minimum-norm w with w^H g_j = 0 for all j and w^H h = `amplitude`.
///
/// Rows are ordered [G^H; h^H] so that the QR inside min_norm_solve orthogonalizes h
/// against the eavesdropper channels, which keeps the nulling residual at rounding level.
[[nodiscard]] inline ComplexVector nulling_direction(const ComplexVector& h, const ComplexMatrix& g, Complex amplitude) {
  const Eigen::Index n = h.size();
  const Eigen::Index j = g.cols();
  if (g.rows() != n) throw Error(Errc::DimensionMismatch, "G rows must equal N");
  if (n < j + 1) throw Error(Errc::InsufficientNodes, "nulling needs N >= J + 1");
  ComplexMatrix stacked(j + 1, n);
  stacked.topRows(j) = g.adjoint();
  stacked.row(j) = h.adjoint();
  ComplexVector rhs = ComplexVector::Zero(j + 1);
  rhs(j) = std::conj(amplitude);  // h^H w = conj(w^H h)
  return numerics::min_norm_solve(stacked, rhs);
}

}  // namespace detail

// ---------------------------------------------------------------------------------------
// One eavesdropper, perfect CSI

/// Weights maximizing the secrecy capacity at ||w||^2 = p0 for a single eavesdropper.
[[nodiscard]] inline BeamformerSolution max_secrecy_single(const ComplexVector& h, const ComplexVector& g,
                                                           double noise_power, double p0,
                                                           const Stage1Accounting& stage1 = {});

/// Minimum power meeting secrecy capacity `target_cs` for a single eavesdropper.
[[nodiscard]] inline MinPowerResult min_power_single(const ComplexVector& h, const ComplexVector& g, double noise_power,
                                                     double target_cs, const IterationOptions& opts = {},
                                                     const Stage1Accounting& stage1 = {});

// ---------------------------------------------------------------------------------------
// One eavesdropper, imperfect CSI (Jensen lower bound)

[[nodiscard]] inline BeamformerSolution imperfect_single_max(const ComplexVector& h, const ComplexVector& g_hat,
                                                             const ComplexMatrix& r_delta, double noise_power,
                                                             double p0, const Stage1Accounting& stage1 = {}) {
  detail::check_channel(h);
  detail::check_noise(noise_power);
  detail::check_power(p0);
  if (g_hat.size() != h.size()) throw Error(Errc::DimensionMismatch, "h and g lengths differ");
  detail::check_covariance(r_delta, h.size());
  const ComplexMatrix r_g = g_hat * g_hat.adjoint() + r_delta;
  const auto qp = detail::full_space_problem(h, r_g, noise_power, stage1.constant(h(0), noise_power),
                                             stage1.constant(g_hat(0), noise_power));
  const ComplexVector w = std::sqrt(p0) * qp.maximize(p0);
  return evaluate_bound(w, h, g_hat, r_delta, noise_power, stage1);
}

inline BeamformerSolution max_secrecy_single(const ComplexVector& h, const ComplexVector& g, double noise_power,
                                             double p0, const Stage1Accounting& stage1) {
  const Eigen::Index n = h.size();
  if (g.size() != n) throw Error(Errc::DimensionMismatch, "h and g lengths differ");
  BeamformerSolution s = imperfect_single_max(h, g, ComplexMatrix::Zero(n, n), noise_power, p0, stage1);
  s.secrecy_is_lower_bound = false;
  return s;
}

// ---------------------------------------------------------------------------------------
// Multiple eavesdroppers with complete nulling, perfect CSI

/// Minimum power w with w^H G = 0 and destination capacity exactly `target_cs`:
/// w = sqrt((4^Cs - 1) s2) e^{j theta} G~^H (G~ G~^H)^{-1} e with G~ = [h, G]^H.
[[nodiscard]] inline BeamformerSolution null_min_power_multi(const ComplexVector& h, const ComplexMatrix& g,
                                                             double noise_power, double target_cs, double theta = 0.0,
                                                             const Stage1Accounting& stage1 = {}) {
  detail::check_channel(h);
  detail::check_noise(noise_power);
  detail::check_target(target_cs);
  const double alpha = stage1.constant(h(0), noise_power);
  const double mu = detail::max_stage1_constant(stage1, g, noise_power);
  const double snr_needed = std::pow(4.0, target_cs) * mu - alpha;
  const double amplitude = std::sqrt(std::max(snr_needed, 0.0) * noise_power);
  const ComplexVector w = detail::nulling_direction(h, g, std::polar(amplitude, theta));
  return evaluate(w, h, g, noise_power, stage1);
}

/// Maximum-secrecy w at ||w||^2 = p0 subject to w^H G = 0:
/// w = beta G~^H (G~ G~^H)^{-1} e, beta = sqrt(p0 / e^H (G~ G~^H)^{-1} e).
[[nodiscard]] inline BeamformerSolution null_max_secrecy_multi(const ComplexVector& h, const ComplexMatrix& g,
                                                               double noise_power, double p0,
                                                               const Stage1Accounting& stage1 = {}) {
  detail::check_channel(h);
  detail::check_noise(noise_power);
  detail::check_power(p0);
  const ComplexVector u = detail::nulling_direction(h, g, Complex(1.0, 0.0));
  const ComplexVector w = std::sqrt(p0) * u / u.norm();
  return evaluate(w, h, g, noise_power, stage1);
}

// ---------------------------------------------------------------------------------------
// Multiple eavesdroppers, imperfect CSI: null the estimates, maximize the bound

[[nodiscard]] inline BeamformerSolution imperfect_multi_max(const ComplexVector& h, const ComplexMatrix& g_hat,
                                                            const ComplexMatrix& r_delta, double noise_power,
                                                            double p0, const Stage1Accounting& stage1 = {}) {
  detail::check_channel(h);
  detail::check_noise(noise_power);
  detail::check_power(p0);
  if (g_hat.rows() != h.size()) throw Error(Errc::DimensionMismatch, "G rows must equal N");
  detail::check_covariance(r_delta, h.size());
  const auto qp = detail::nulled_problem(h, g_hat, r_delta, noise_power, stage1.constant(h(0), noise_power),
                                         detail::max_stage1_constant(stage1, g_hat, noise_power));
  ComplexVector w = qp.lift(qp.maximize(p0));
  w *= std::sqrt(p0) / w.norm();
  return evaluate_bound(w, h, g_hat, r_delta, noise_power, stage1);
}

// ---------------------------------------------------------------------------------------
// Power-descent solvers

inline MinPowerResult min_power_single(const ComplexVector& h, const ComplexVector& g, double noise_power,
                                       double target_cs, const IterationOptions& opts,
                                       const Stage1Accounting& stage1) {
  detail::check_channel(h);
  detail::check_noise(noise_power);
  if (g.size() != h.size()) throw Error(Errc::DimensionMismatch, "h and g lengths differ");
  const auto qp = detail::full_space_problem(h, g * g.adjoint(), noise_power, stage1.constant(h(0), noise_power),
                                             stage1.constant(g(0), noise_power));
  auto [v, trace] = detail::minimize_power(qp, target_cs, opts);
  MinPowerResult out;
  out.stage1_condition = detail::stage1_condition(qp, v);
  out.solution = evaluate(qp.lift(v), h, ComplexMatrix(g), noise_power, stage1);
  out.trace = std::move(trace);
  return out;
}

/// Power-descent iteration on the Jensen lower bound. One eavesdropper estimate uses
/// the full-space problem; several use the estimate-nulling subspace.
[[nodiscard]] inline MinPowerResult imperfect_min_power(const ComplexVector& h, const ComplexMatrix& g_hat,
                                                        const ComplexMatrix& r_delta, double noise_power,
                                                        double target_bound, const IterationOptions& opts = {},
                                                        const Stage1Accounting& stage1 = {}) {
  detail::check_channel(h);
  detail::check_noise(noise_power);
  if (g_hat.rows() != h.size()) throw Error(Errc::DimensionMismatch, "G rows must equal N");
  detail::check_covariance(r_delta, h.size());
  const double alpha = stage1.constant(h(0), noise_power);
  const double mu = detail::max_stage1_constant(stage1, g_hat, noise_power);
  const auto qp = g_hat.cols() <= 1
                      ? detail::full_space_problem(h, g_hat * g_hat.adjoint() + r_delta, noise_power, alpha, mu)
                      : detail::nulled_problem(h, g_hat, r_delta, noise_power, alpha, mu);
  auto [v, trace] = detail::minimize_power(qp, target_bound, opts);
  MinPowerResult out;
  out.stage1_condition = detail::stage1_condition(qp, v);
  out.solution = evaluate_bound(qp.lift(v), h, g_hat, r_delta, noise_power, stage1);
  out.trace = std::move(trace);
  return out;
}

// ---------------------------------------------------------------------------------------
// Problem description and dispatch

enum class Objective { MaxSecrecyFixedPower, MinPowerFixedSecrecy };

struct DesignProblem {
  Objective objective = Objective::MaxSecrecyFixedPower;
  double budget = 0.0;  // W for fixed power, bits/s/Hz for fixed secrecy
  /// Eavesdropper channel-error covariance; empty means perfect CSI.
  std::optional<ComplexMatrix> r_delta;
  Stage1Accounting stage1;
  IterationOptions iteration;

  void validate(Eigen::Index n_nodes) const {
    if (!(budget > 0.0) || !std::isfinite(budget)) throw Error(Errc::InvalidConfig, "budget must be positive");
    if (r_delta) detail::check_covariance(*r_delta, n_nodes);
  }
};

struct DesignOutcome {
  BeamformerSolution solution;
  std::optional<IterationTrace> trace;
};

/// Picks the solver for J = G.cols(): no eavesdropper uses the matched filter (nulling
/// with an empty constraint set), one uses the optimal single-eavesdropper designs, and
/// more than one uses complete nulling. `g` holds true channels for perfect CSI and
/// estimates otherwise.
[[nodiscard]] inline DesignOutcome solve(const DesignProblem& problem, const ComplexVector& h, const ComplexMatrix& g,
                                         double noise_power) {
  problem.validate(h.size());
  const bool fixed_power = problem.objective == Objective::MaxSecrecyFixedPower;
  const Eigen::Index j = g.cols();
  const auto& st = problem.stage1;
  if (j == 0) {
    return {fixed_power ? null_max_secrecy_multi(h, g, noise_power, problem.budget, st)
                        : null_min_power_multi(h, g, noise_power, problem.budget, 0.0, st),
            std::nullopt};
  }
  if (problem.r_delta) {
    const ComplexMatrix& rd = *problem.r_delta;
    if (fixed_power) {
      return {j == 1 ? imperfect_single_max(h, g.col(0), rd, noise_power, problem.budget, st)
                     : imperfect_multi_max(h, g, rd, noise_power, problem.budget, st),
              std::nullopt};
    }
    auto r = imperfect_min_power(h, g, rd, noise_power, problem.budget, problem.iteration, st);
    return {std::move(r.solution), std::move(r.trace)};
  }
  if (j == 1) {
    if (fixed_power) return {max_secrecy_single(h, g.col(0), noise_power, problem.budget, st), std::nullopt};
    auto r = min_power_single(h, g.col(0), noise_power, problem.budget, problem.iteration, st);
    return {std::move(r.solution), std::move(r.trace)};
  }
  return {fixed_power ? null_max_secrecy_multi(h, g, noise_power, problem.budget, st)
                      : null_min_power_multi(h, g, noise_power, problem.budget, 0.0, st),
          std::nullopt};
}

}  // namespace coopsec::design
