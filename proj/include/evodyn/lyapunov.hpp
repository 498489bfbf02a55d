// lyapunov.hpp — information divergences, their discrete and continuous
// rates of change along trajectories, the log-sum step bound, and ESS
// verification by neighborhood sampling.
#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "evodyn/errors.hpp"
#include "evodyn/simplex.hpp"

namespace evodyn {

// D(ref || x) = sum_i ref_i ln(ref_i / x_i), natural log, 0 log(0/.) = 0.
// Throws SupportViolation when ref_i > 0 while x_i = 0.
double kl_divergence(const SimplexPoint& reference, const SimplexPoint& x);

// Half squared Euclidean distance (1/2) ||ref - x||^2.
double euclidean_half_sq(const SimplexPoint& reference, const SimplexPoint& x);

// d/dt of D(ref || x) along the continuous momentum replicator:
// (x.f - ref.f) / (1 - beta). Negative at interior x != ref when ref is a
// strict ESS and beta < 1. Throws BetaSingularity at beta = 1.
double kl_time_derivative(const MatrixLandscape& landscape, const SimplexPoint& reference,
                          const SimplexPoint& x, double beta);

// One-step difference quotient (D(ref||x_next) - D(ref||x)) / alpha.
double discrete_lyapunov_quotient(const SimplexPoint& reference, const SimplexPoint& x,
                                  const SimplexPoint& x_next, double alpha);

// -log(sum_i ref_i x_next_i / x_i) / alpha. Equals the quotient exactly when
// the per-coordinate ratios are constant on the reference support (one-point
// support, or no motion). Throws NonpositiveArgument when the log argument
// is <= 0.
double jensen_bound(const SimplexPoint& reference, const SimplexPoint& x,
                    const SimplexPoint& x_next, double alpha);

struct EssReport {
  SimplexPoint candidate;
  bool is_strict_ess = false;
  double worst_margin = 0.0;  // min over samples of ref.f(x) - x.f(x)
  std::uint64_t samples_tested = 0;
  double radius = 0.0;
  std::uint64_t seed = 0;
};

// Samples quasi-uniform points x != candidate in the simplex ball of the
// given radius around the candidate (deterministic low-discrepancy sequence)
// and reports the worst invasion margin candidate.f(x) - x.f(x).
EssReport verify_ess(const MatrixLandscape& landscape, const SimplexPoint& candidate,
                     double radius, std::uint64_t samples, std::uint64_t seed = 0);

namespace detail {

// KL on raw spans; nullopt instead of SupportViolation so trajectory
// recording can degrade gracefully at the boundary.
std::optional<double> kl_on_span(std::span<const double> reference, std::span<const double> x);

double euclidean_on_span(std::span<const double> reference, std::span<const double> x);

}  // namespace detail

}  // namespace evodyn
