// dynamics.hpp — replicator and projection vector fields, discrete steppers
// with Polyak/Nesterov momentum, trajectory iteration with termination
// detection, and a fixed-step RK4 integrator for the continuous momentum
// dynamic.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "evodyn/errors.hpp"
#include "evodyn/simplex.hpp"

namespace evodyn {

enum class DynamicKind { Replicator, Projection };
enum class MomentumKind { None, Polyak, Nesterov };
enum class TrajectoryStatus { Converged, Diverged, MaxStepsReached };

const char* to_string(TrajectoryStatus status);

struct DynamicsConfig {
  DynamicKind dynamic = DynamicKind::Replicator;
  MomentumKind momentum = MomentumKind::None;
  double learning_rate = 0.0;        // alpha, must be > 0
  double momentum_coefficient = 0.0; // beta
  bool normalize_by_mean = false;    // opt-in; default drops the denominator
  std::uint64_t max_steps = 10'000'000;
  double convergence_epsilon = 1e-6;
  double boundary_delta = 1e-9;

  // Throws ValidationError naming the offending field. n is the landscape
  // dimension (boundary_delta must stay below 1/n).
  void validate(std::size_t n) const;
};

// Velocity memory carried between momentum steps. Starts at zero; stays in
// the tangent space as long as the driving field is tangent.
struct MomentumState {
  std::vector<double> z;

  static MomentumState zero(std::size_t n) { return {std::vector<double>(n, 0.0)}; }
};

struct TrajectoryRecord {
  std::uint64_t step = 0;
  double time = 0.0;
  std::vector<double> state;
  std::optional<double> lyapunov_kl;
  std::optional<double> lyapunov_euclidean;
};

// Ordered step records of one run. Every recorded state is a valid simplex
// point, with one exception: a run terminated by a step that left the
// simplex records the offending state (negative coordinate) as its final
// entry, so the exit is visible in serialized output.
struct Trajectory {
  std::vector<TrajectoryRecord> records;
  TrajectoryStatus status = TrajectoryStatus::MaxStepsReached;
  std::size_t dimension = 0;
};

using VectorField = std::function<std::vector<double>(std::span<const double>)>;

// Replicator direction F_i = x_i (f_i - x.f), divided by x.f when normalize
// is set. Throws NearZeroMeanFitness if normalization is requested while
// |x.f| <= 1e-9. Accepts arbitrary real vectors (momentum look-ahead).
TangentVector replicator_field(const MatrixLandscape& landscape, std::span<const double> x,
                               bool normalize);

// Projection direction F_i = f_i - avg(f), divided by avg(f) when normalize
// is set; avg is the unweighted mean. Errors as replicator_field.
TangentVector projection_field(const MatrixLandscape& landscape, std::span<const double> x,
                               bool normalize);

// Plain Euclidean step x' = x + alpha F(x).
std::vector<double> euclidean_gd_step(const VectorField& field, std::span<const double> x,
                                      double alpha);

// z' = beta z + F(x); x' = x + alpha z'. Throws StateLeftSimplex (carrying
// the offending state) when x' picks up a negative coordinate.
std::pair<SimplexPoint, MomentumState> polyak_step(const VectorField& field,
                                                   const SimplexPoint& x,
                                                   const MomentumState& z, double alpha,
                                                   double beta);

// Same, with the field evaluated at the look-ahead point x + beta z (which
// need not lie in the simplex; the field formula is applied verbatim).
std::pair<SimplexPoint, MomentumState> nesterov_step(const VectorField& field,
                                                     const SimplexPoint& x,
                                                     const MomentumState& z, double alpha,
                                                     double beta);

// Runs the configured stepper from x0 with z = 0, recording every
// record_every-th state (step 0 and the final state always included).
// When reference is given, KL and Euclidean Lyapunov values are recorded and
// the run stops Converged once the selected value (KL for Replicator,
// Euclidean for Projection) drops below convergence_epsilon. Stops Diverged
// when a coordinate falls to boundary_delta or a step leaves the simplex;
// otherwise MaxStepsReached.
Trajectory iterate(const DynamicsConfig& config, const MatrixLandscape& landscape,
                   const SimplexPoint& x0, const std::optional<SimplexPoint>& reference,
                   std::uint64_t record_every = 1);

// Classical fixed-step RK4 for dx_i/dt = x_i (f_i - x.f) / (1 - beta) from
// time 0 to total_time, recording every step; each state's coordinate sum is
// renormalized. Throws BetaSingularity when |1 - beta| < 1e-9.
Trajectory continuous_integrate(const MatrixLandscape& landscape, const SimplexPoint& x0,
                                double beta, double total_time, double step_size);

namespace detail {

// Shared trajectory loop. classify_cycling runs it with convergence
// stopping disabled ("total steps or until Diverged").
Trajectory run_discrete(const DynamicsConfig& config, const MatrixLandscape& landscape,
                        const SimplexPoint& x0, const std::optional<SimplexPoint>& reference,
                        std::uint64_t record_every, bool stop_on_convergence);

void replicator_field_into(const MatrixLandscape& landscape, std::span<const double> x,
                           bool normalize, std::vector<double>& out);
void projection_field_into(const MatrixLandscape& landscape, std::span<const double> x,
                           bool normalize, std::vector<double>& out);

}  // namespace detail

}  // namespace evodyn
