#include "evodyn/experiments.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "evodyn/canonical.hpp"
#include "evodyn/lyapunov.hpp"
#include "evodyn/sampling.hpp"

namespace evodyn {

namespace {

constexpr double kMonotonicityTolerance = 1e-12;

// Records only the initial and final states; convergence is still checked
// every step.
constexpr std::uint64_t kSparseRecording = ~std::uint64_t{0};

std::string canonical_config(const DynamicsConfig& config, const MatrixLandscape& landscape,
                             const SimplexPoint& x0, const SimplexPoint& reference,
                             std::span<const double> betas) {
  std::ostringstream out;
  out << "dynamic=" << (config.dynamic == DynamicKind::Replicator ? "replicator" : "projection")
      << ";momentum="
      << (config.momentum == MomentumKind::None
              ? "none"
              : config.momentum == MomentumKind::Polyak ? "polyak" : "nesterov")
      << ";alpha=" << format_real17(config.learning_rate)
      << ";normalize=" << (config.normalize_by_mean ? "true" : "false")
      << ";max_steps=" << config.max_steps
      << ";epsilon=" << format_real17(config.convergence_epsilon)
      << ";boundary_delta=" << format_real17(config.boundary_delta) << ";matrix=";
  for (double v : landscape.row_major()) out << format_real17(v) << ',';
  out << ";x0=";
  for (double v : x0.coords()) out << format_real17(v) << ',';
  out << ";reference=";
  for (double v : reference.coords()) out << format_real17(v) << ',';
  out << ";betas=";
  for (double v : betas) out << format_real17(v) << ',';
  return out.str();
}

bool is_zero_sum(const MatrixLandscape& landscape) {
  for (std::size_t i = 0; i < landscape.dim(); ++i) {
    for (std::size_t j = 0; j < landscape.dim(); ++j) {
      if (std::abs(landscape.at(i, j) + landscape.at(j, i)) > 1e-12) return false;
    }
  }
  return true;
}

}  // namespace

const char* to_string(CyclingClass classification) {
  switch (classification) {
    case CyclingClass::Converging: return "Converging";
    case CyclingClass::Diverging: return "Diverging";
    case CyclingClass::Cycling: return "Cycling";
  }
  return "?";
}

std::uint64_t convergence_time(const DynamicsConfig& config, const MatrixLandscape& landscape,
                               const SimplexPoint& x0, const SimplexPoint& reference) {
  const Trajectory trajectory = iterate(config, landscape, x0, reference, kSparseRecording);
  if (trajectory.status != TrajectoryStatus::Converged) {
    throw DidNotConverge(std::string("run ended ") + to_string(trajectory.status) +
                             " without reaching the convergence threshold",
                         trajectory.status);
  }
  return trajectory.records.back().step;
}

SweepResult beta_sweep_ratio(const DynamicsConfig& base, const MatrixLandscape& landscape,
                             const SimplexPoint& x0, const SimplexPoint& reference,
                             std::span<const double> betas) {
  DynamicsConfig config = base;
  config.momentum_coefficient = 0.0;
  const std::uint64_t base_steps = convergence_time(config, landscape, x0, reference);

  SweepResult result;
  result.base_steps = base_steps;
  result.config_digest = to_hex(fnv1a64(canonical_config(base, landscape, x0, reference, betas)));
  result.rows.reserve(betas.size());
  for (double beta : betas) {
    std::uint64_t steps = base_steps;
    if (beta != 0.0) {
      config.momentum_coefficient = beta;
      try {
        steps = convergence_time(config, landscape, x0, reference);
      } catch (const DidNotConverge& error) {
        throw DidNotConverge(std::string(error.what()) + " (beta = " + format_real17(beta) + ")",
                             error.status(), beta);
      }
    }
    const double ratio = static_cast<double>(steps) / static_cast<double>(base_steps);
    result.rows.push_back({beta, steps, ratio, 1.0 - beta});
  }
  return result;
}

std::vector<MonotonicityRow> monotonicity_scan(const DynamicsConfig& base,
                                               const MatrixLandscape& landscape,
                                               const SimplexPoint& x0,
                                               const SimplexPoint& reference,
                                               std::span<const double> betas) {
  if (base.momentum == MomentumKind::None) {
    throw ValidationError("momentum", "monotonicity_scan: configure Polyak or Nesterov");
  }
  std::vector<MonotonicityRow> rows;
  rows.reserve(betas.size());
  DynamicsConfig config = base;
  for (double beta : betas) {
    config.momentum_coefficient = beta;
    const Trajectory trajectory = iterate(config, landscape, x0, reference, 1);
    MonotonicityRow row{beta, true, std::nullopt};
    std::optional<double> previous;
    for (const TrajectoryRecord& record : trajectory.records) {
      if (!record.lyapunov_kl) continue;
      if (previous && *record.lyapunov_kl > *previous + kMonotonicityTolerance) {
        row.monotone = false;
        row.first_violation_step = record.step;
        break;
      }
      previous = record.lyapunov_kl;
    }
    rows.push_back(row);
  }
  return rows;
}

CyclingVerdict classify_cycling(const DynamicsConfig& config, const MatrixLandscape& landscape,
                                const SimplexPoint& x0, std::uint64_t total_steps,
                                std::uint64_t window) {
  if (!is_zero_sum(landscape)) {
    throw ValidationError("landscape", "classify_cycling: landscape must be zero-sum (a = -b)");
  }
  if (window < 1) {
    throw ValidationError("window", "classify_cycling: window must be at least 1");
  }
  DynamicsConfig run_config = config;
  run_config.max_steps = total_steps;
  const SimplexPoint reference = SimplexPoint::barycenter(landscape.dim());
  const Trajectory trajectory =
      detail::run_discrete(run_config, landscape, x0, reference, 1, false);

  std::vector<double> series;
  series.reserve(trajectory.records.size());
  for (const TrajectoryRecord& record : trajectory.records) {
    if (record.lyapunov_kl) series.push_back(*record.lyapunov_kl);
  }

  CyclingVerdict verdict;
  verdict.kl_start = series.empty() ? 0.0 : series.front();
  verdict.kl_end = series.empty() ? 0.0 : series.back();

  const std::size_t windows = series.size() / window;
  if (windows >= 2) {
    // Least-squares slope over (window center step, window mean KL).
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t w = 0; w < windows; ++w) {
      double mean = 0.0;
      for (std::size_t k = 0; k < window; ++k) mean += series[w * window + k];
      mean /= static_cast<double>(window);
      const double center =
          static_cast<double>(w * window) + (static_cast<double>(window) - 1.0) / 2.0;
      sx += center;
      sy += mean;
      sxx += center * center;
      sxy += center * mean;
    }
    const double m = static_cast<double>(windows);
    verdict.kl_trend_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }

  if (trajectory.status == TrajectoryStatus::Diverged) {
    verdict.classification = CyclingClass::Diverging;
  } else if (verdict.kl_trend_slope < -kCyclingSlopeTolerance) {
    verdict.classification = CyclingClass::Converging;
  } else if (verdict.kl_trend_slope > kCyclingSlopeTolerance) {
    verdict.classification = CyclingClass::Diverging;
  } else {
    verdict.classification = CyclingClass::Cycling;
  }
  return verdict;
}

double scaling_identity_check(const MatrixLandscape& landscape, const SimplexPoint& reference,
                              std::span<const double> betas, std::uint64_t samples,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const SimplexPoint x(sample_simplex_interior(landscape.dim(), rng));
    const double base = kl_time_derivative(landscape, reference, x, 0.0);
    for (double beta : betas) {
      const double scaled = kl_time_derivative(landscape, reference, x, beta) * (1.0 - beta);
      const double relative =
          std::abs(scaled - base) / std::max(std::abs(base), 1e-300);
      if (relative > worst) worst = relative;
    }
  }
  return worst;
}

}  // namespace evodyn
