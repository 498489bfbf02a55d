#include "evodyn/dynamics.hpp"

#include <cmath>
#include <string>

#include "evodyn/lyapunov.hpp"

namespace evodyn {

namespace {

constexpr double kMeanFitnessFloor = 1e-9;

// z <- beta z + F; out <- x + alpha z. The exact expression shape is shared
// by the public steppers and the trajectory loop so that beta = 0 runs are
// bit-identical to the momentum-free stepper.
void momentum_advance(std::span<const double> x, std::vector<double>& z,
                      std::span<const double> field_value, double alpha, double beta,
                      std::vector<double>& out) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    z[i] = beta * z[i] + field_value[i];
    out[i] = x[i] + alpha * z[i];
  }
}

bool has_negative(std::span<const double> v) {
  for (double c : v) {
    if (c < 0.0) return true;
  }
  return false;
}

std::pair<SimplexPoint, MomentumState> finish_momentum_step(std::vector<double> next,
                                                            std::vector<double> z) {
  if (has_negative(next)) {
    throw StateLeftSimplex("step left the simplex (negative coordinate)", std::move(next));
  }
  return {SimplexPoint(std::move(next)), MomentumState{std::move(z)}};
}

}  // namespace

const char* to_string(TrajectoryStatus status) {
  switch (status) {
    case TrajectoryStatus::Converged: return "Converged";
    case TrajectoryStatus::Diverged: return "Diverged";
    case TrajectoryStatus::MaxStepsReached: return "MaxStepsReached";
  }
  return "?";
}

void DynamicsConfig::validate(std::size_t n) const {
  if (!(learning_rate > 0.0)) {
    throw ValidationError("alpha", "learning rate must be positive");
  }
  if (max_steps < 1) {
    throw ValidationError("max_steps", "max_steps must be at least 1");
  }
  if (!(convergence_epsilon > 0.0)) {
    throw ValidationError("epsilon", "convergence epsilon must be positive");
  }
  if (!(boundary_delta > 0.0) || !(boundary_delta < 1.0 / static_cast<double>(n))) {
    throw ValidationError("boundary_delta", "boundary delta must lie in (0, 1/n)");
  }
}

namespace detail {

void replicator_field_into(const MatrixLandscape& landscape, std::span<const double> x,
                           bool normalize, std::vector<double>& out) {
  const std::vector<double> f = fitness(landscape, x);
  const double mean = mean_fitness_weighted(x, f);
  out.resize(x.size());
  if (normalize) {
    if (std::abs(mean) <= kMeanFitnessFloor) {
      throw NearZeroMeanFitness(
          "replicator_field: |x.f| <= 1e-9, use the unnormalized form");
    }
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * (f[i] - mean) / mean;
  } else {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * (f[i] - mean);
  }
}

void projection_field_into(const MatrixLandscape& landscape, std::span<const double> x,
                           bool normalize, std::vector<double>& out) {
  const std::vector<double> f = fitness(landscape, x);
  const double mean = mean_fitness_uniform(f);
  out.resize(x.size());
  if (normalize) {
    if (std::abs(mean) <= kMeanFitnessFloor) {
      throw NearZeroMeanFitness(
          "projection_field: |avg f| <= 1e-9, use the unnormalized form");
    }
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (f[i] - mean) / mean;
  } else {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f[i] - mean;
  }
}

}  // namespace detail

TangentVector replicator_field(const MatrixLandscape& landscape, std::span<const double> x,
                               bool normalize) {
  std::vector<double> out;
  detail::replicator_field_into(landscape, x, normalize, out);
  return {std::move(out)};
}

TangentVector projection_field(const MatrixLandscape& landscape, std::span<const double> x,
                               bool normalize) {
  std::vector<double> out;
  detail::projection_field_into(landscape, x, normalize, out);
  return {std::move(out)};
}

std::vector<double> euclidean_gd_step(const VectorField& field, std::span<const double> x,
                                      double alpha) {
  if (!(alpha > 0.0)) {
    throw ValidationError("alpha", "euclidean_gd_step: alpha must be positive");
  }
  const std::vector<double> value = field(x);
  if (value.size() != x.size()) {
    throw DimensionMismatch("euclidean_gd_step: field dimension mismatch");
  }
  std::vector<double> next(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) next[i] = x[i] + alpha * value[i];
  return next;
}

std::pair<SimplexPoint, MomentumState> polyak_step(const VectorField& field,
                                                   const SimplexPoint& x,
                                                   const MomentumState& z, double alpha,
                                                   double beta) {
  if (!(alpha > 0.0)) {
    throw ValidationError("alpha", "polyak_step: alpha must be positive");
  }
  const std::vector<double> value = field(x);
  if (value.size() != x.dim() || z.z.size() != x.dim()) {
    throw DimensionMismatch("polyak_step: dimension mismatch");
  }
  std::vector<double> velocity = z.z;
  std::vector<double> next(x.dim());
  momentum_advance(x, velocity, value, alpha, beta, next);
  return finish_momentum_step(std::move(next), std::move(velocity));
}

std::pair<SimplexPoint, MomentumState> nesterov_step(const VectorField& field,
                                                     const SimplexPoint& x,
                                                     const MomentumState& z, double alpha,
                                                     double beta) {
  if (!(alpha > 0.0)) {
    throw ValidationError("alpha", "nesterov_step: alpha must be positive");
  }
  if (z.z.size() != x.dim()) {
    throw DimensionMismatch("nesterov_step: dimension mismatch");
  }
  std::vector<double> look_ahead(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) look_ahead[i] = x[i] + beta * z.z[i];
  const std::vector<double> value = field(look_ahead);
  if (value.size() != x.dim()) {
    throw DimensionMismatch("nesterov_step: field dimension mismatch");
  }
  std::vector<double> velocity = z.z;
  std::vector<double> next(x.dim());
  momentum_advance(x, velocity, value, alpha, beta, next);
  return finish_momentum_step(std::move(next), std::move(velocity));
}

namespace detail {

Trajectory run_discrete(const DynamicsConfig& config, const MatrixLandscape& landscape,
                        const SimplexPoint& x0, const std::optional<SimplexPoint>& reference,
                        std::uint64_t record_every, bool stop_on_convergence) {
  const std::size_t n = landscape.dim();
  config.validate(n);
  if (x0.dim() != n) {
    throw DimensionMismatch("iterate: x0/landscape dimension mismatch");
  }
  if (reference && reference->dim() != n) {
    throw DimensionMismatch("iterate: reference/landscape dimension mismatch");
  }
  if (!x0.is_interior(config.boundary_delta)) {
    throw ValidationError("x0", "iterate: x0 must be interior (coordinates > boundary_delta)");
  }
  if (record_every == 0) record_every = 1;

  const double alpha = config.learning_rate;
  const double beta = config.momentum_coefficient;
  const bool use_kl = config.dynamic == DynamicKind::Replicator;

  Trajectory trajectory;
  trajectory.dimension = n;

  std::vector<double> x = x0.coords();
  std::vector<double> z(n, 0.0);
  std::vector<double> field_value(n);
  std::vector<double> look_ahead(n);
  std::vector<double> next(n);

  const auto eval_field = [&](std::span<const double> at) {
    if (config.dynamic == DynamicKind::Replicator) {
      replicator_field_into(landscape, at, config.normalize_by_mean, field_value);
    } else {
      projection_field_into(landscape, at, config.normalize_by_mean, field_value);
    }
  };

  const auto push_record = [&](std::uint64_t step, std::span<const double> state) {
    TrajectoryRecord record;
    record.step = step;
    record.time = static_cast<double>(step) * alpha;
    record.state.assign(state.begin(), state.end());
    if (reference) {
      record.lyapunov_kl = kl_on_span(reference->coords(), state);
      record.lyapunov_euclidean = euclidean_on_span(reference->coords(), state);
    }
    trajectory.records.push_back(std::move(record));
  };

  std::uint64_t step = 0;
  while (true) {
    bool recorded = step % record_every == 0;
    if (recorded) push_record(step, x);
    const auto ensure_recorded = [&] {
      if (!recorded) push_record(step, x);
    };

    if (stop_on_convergence && reference) {
      const std::optional<double> selected =
          use_kl ? kl_on_span(reference->coords(), x)
                 : std::optional<double>(euclidean_on_span(reference->coords(), x));
      if (selected && *selected < config.convergence_epsilon) {
        ensure_recorded();
        trajectory.status = TrajectoryStatus::Converged;
        return trajectory;
      }
    }
    double minimum = x[0];
    for (double c : x) minimum = std::min(minimum, c);
    if (minimum <= config.boundary_delta) {
      ensure_recorded();
      trajectory.status = TrajectoryStatus::Diverged;
      return trajectory;
    }
    if (step >= config.max_steps) {
      ensure_recorded();
      trajectory.status = TrajectoryStatus::MaxStepsReached;
      return trajectory;
    }

    switch (config.momentum) {
      case MomentumKind::None:
      case MomentumKind::Polyak:
        eval_field(x);
        break;
      case MomentumKind::Nesterov:
        for (std::size_t i = 0; i < n; ++i) look_ahead[i] = x[i] + beta * z[i];
        eval_field(look_ahead);
        break;
    }
    const double effective_beta = config.momentum == MomentumKind::None ? 0.0 : beta;
    momentum_advance(x, z, field_value, alpha, effective_beta, next);
    ++step;
    if (has_negative(next)) {
      // Record the offending state so the exit is visible, then stop.
      push_record(step, next);
      trajectory.status = TrajectoryStatus::Diverged;
      return trajectory;
    }
    apply_sum_policy(next);
    x = next;
  }
}

}  // namespace detail

Trajectory iterate(const DynamicsConfig& config, const MatrixLandscape& landscape,
                   const SimplexPoint& x0, const std::optional<SimplexPoint>& reference,
                   std::uint64_t record_every) {
  return detail::run_discrete(config, landscape, x0, reference, record_every, true);
}

Trajectory continuous_integrate(const MatrixLandscape& landscape, const SimplexPoint& x0,
                                double beta, double total_time, double step_size) {
  if (std::abs(1.0 - beta) < 1e-9) {
    throw BetaSingularity("continuous_integrate: beta = 1 is singular");
  }
  if (!(step_size > 0.0) || !(step_size <= total_time)) {
    throw ValidationError("h", "continuous_integrate: need 0 < h <= total_time");
  }
  const std::size_t n = landscape.dim();
  if (x0.dim() != n) {
    throw DimensionMismatch("continuous_integrate: x0/landscape dimension mismatch");
  }

  const double coefficient = 1.0 / (1.0 - beta);
  const auto derivative = [&](std::span<const double> state, std::vector<double>& out) {
    const std::vector<double> f = fitness(landscape, state);
    const double mean = mean_fitness_weighted(state, f);
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = coefficient * state[i] * (f[i] - mean);
  };

  Trajectory trajectory;
  trajectory.dimension = n;
  const auto steps = static_cast<std::uint64_t>(std::llround(total_time / step_size));

  std::vector<double> x = x0.coords();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n);

  const auto push_record = [&](std::uint64_t step) {
    TrajectoryRecord record;
    record.step = step;
    record.time = static_cast<double>(step) * step_size;
    record.state = x;
    trajectory.records.push_back(std::move(record));
  };

  push_record(0);
  for (std::uint64_t step = 1; step <= steps; ++step) {
    derivative(x, k1);
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * step_size * k1[i];
    derivative(stage, k2);
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * step_size * k2[i];
    derivative(stage, k3);
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + step_size * k3[i];
    derivative(stage, k4);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += (step_size / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    bool left = false;
    double sum = 0.0;
    for (double c : x) {
      if (c <= 0.0) left = true;
      sum += c;
    }
    if (left) {
      push_record(step);
      trajectory.status = TrajectoryStatus::Diverged;
      return trajectory;
    }
    for (double& c : x) c /= sum;  // sum correction only
    push_record(step);
  }
  trajectory.status = TrajectoryStatus::MaxStepsReached;
  return trajectory;
}

}  // namespace evodyn
