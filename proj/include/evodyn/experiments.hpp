// experiments.hpp — named, parameterized experiments: the (1-beta)
// step-ratio law, monotonicity scans, cycling classification on zero-sum
// landscapes, and the d/dt scaling identity check.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evodyn/dynamics.hpp"
#include "evodyn/simplex.hpp"

namespace evodyn {

// A run ended Diverged or MaxStepsReached where a convergence step count was
// required. Carries the terminal status and, for sweeps, the offending beta.
class DidNotConverge : public Error {
 public:
  DidNotConverge(const std::string& what, TrajectoryStatus status,
                 std::optional<double> beta = std::nullopt)
      : Error(what), status_(status), beta_(beta) {}
  [[nodiscard]] TrajectoryStatus status() const noexcept { return status_; }
  [[nodiscard]] std::optional<double> beta() const noexcept { return beta_; }

 private:
  TrajectoryStatus status_;
  std::optional<double> beta_;
};

struct SweepRow {
  double beta = 0.0;
  std::uint64_t steps = 0;
  double ratio = 0.0;      // steps(beta) / steps(0)
  double predicted = 0.0;  // 1 - beta
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::uint64_t base_steps = 0;  // beta = 0 baseline
  std::string config_digest;
};

enum class CyclingClass { Converging, Diverging, Cycling };

const char* to_string(CyclingClass classification);

// Windowed-KL trend classification threshold, in KL units per step.
inline constexpr double kCyclingSlopeTolerance = 1e-9;

struct CyclingVerdict {
  CyclingClass classification = CyclingClass::Cycling;
  double kl_start = 0.0;
  double kl_end = 0.0;
  double kl_trend_slope = 0.0;  // least squares over window means
};

struct MonotonicityRow {
  double beta = 0.0;
  bool monotone = false;
  std::optional<std::uint64_t> first_violation_step;
};

// First step index at which the selected Lyapunov value drops below
// config.convergence_epsilon. Throws DidNotConverge otherwise.
std::uint64_t convergence_time(const DynamicsConfig& config, const MatrixLandscape& landscape,
                               const SimplexPoint& x0, const SimplexPoint& reference);

// Convergence steps for each beta against the beta = 0 baseline of the same
// config. Rows keep the input beta order.
SweepResult beta_sweep_ratio(const DynamicsConfig& base, const MatrixLandscape& landscape,
                             const SimplexPoint& x0, const SimplexPoint& reference,
                             std::span<const double> betas);

// Whether the KL series is non-increasing (tolerance 1e-12 per step) over
// the entire trajectory, and where it first rises.
std::vector<MonotonicityRow> monotonicity_scan(const DynamicsConfig& base,
                                               const MatrixLandscape& landscape,
                                               const SimplexPoint& x0,
                                               const SimplexPoint& reference,
                                               std::span<const double> betas);

// Runs total_steps (or until Diverged) on a zero-sum landscape, reference
// fixed at the barycenter, and classifies the windowed KL trend. Diverged
// runs classify as Diverging.
CyclingVerdict classify_cycling(const DynamicsConfig& config, const MatrixLandscape& landscape,
                                const SimplexPoint& x0, std::uint64_t total_steps,
                                std::uint64_t window);

// Max over seeded interior points and betas of
// |kl_time_derivative(beta) * (1 - beta) - kl_time_derivative(0)| relative
// to |kl_time_derivative(0)|.
double scaling_identity_check(const MatrixLandscape& landscape, const SimplexPoint& reference,
                              std::span<const double> betas, std::uint64_t samples,
                              std::uint64_t seed);

}  // namespace evodyn
