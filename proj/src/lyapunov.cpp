#include "evodyn/lyapunov.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "evodyn/sampling.hpp"

namespace evodyn {

namespace detail {

std::optional<double> kl_on_span(std::span<const double> reference, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double r = reference[i];
    if (r <= 0.0) continue;  // 0 log(0/.) = 0
    if (x[i] <= 0.0) return std::nullopt;
    acc += r * std::log(r / x[i]);
  }
  return acc;
}

double euclidean_on_span(std::span<const double> reference, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = reference[i] - x[i];
    acc += d * d;
  }
  return 0.5 * acc;
}

}  // namespace detail

namespace {

void require_same_dim(const SimplexPoint& a, const SimplexPoint& b, const char* where) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(std::string(where) + ": dimension mismatch");
  }
}

}  // namespace

double kl_divergence(const SimplexPoint& reference, const SimplexPoint& x) {
  require_same_dim(reference, x, "kl_divergence");
  const auto value = detail::kl_on_span(reference, x);
  if (!value) {
    throw SupportViolation("kl_divergence: reference has mass where x has none");
  }
  return *value;
}

double euclidean_half_sq(const SimplexPoint& reference, const SimplexPoint& x) {
  require_same_dim(reference, x, "euclidean_half_sq");
  return detail::euclidean_on_span(reference, x);
}

double kl_time_derivative(const MatrixLandscape& landscape, const SimplexPoint& reference,
                          const SimplexPoint& x, double beta) {
  require_same_dim(reference, x, "kl_time_derivative");
  if (std::abs(1.0 - beta) < 1e-9) {
    throw BetaSingularity("kl_time_derivative: beta = 1 is singular");
  }
  const std::vector<double> f = fitness(landscape, x);
  const double along = mean_fitness_weighted(x, f);
  const double at_reference = mean_fitness_weighted(reference, f);
  return (along - at_reference) / (1.0 - beta);
}

double discrete_lyapunov_quotient(const SimplexPoint& reference, const SimplexPoint& x,
                                  const SimplexPoint& x_next, double alpha) {
  require_same_dim(reference, x, "discrete_lyapunov_quotient");
  require_same_dim(reference, x_next, "discrete_lyapunov_quotient");
  if (!(alpha > 0.0)) {
    throw ValidationError("alpha", "discrete_lyapunov_quotient: alpha must be positive");
  }
  return (kl_divergence(reference, x_next) - kl_divergence(reference, x)) / alpha;
}

double jensen_bound(const SimplexPoint& reference, const SimplexPoint& x,
                    const SimplexPoint& x_next, double alpha) {
  require_same_dim(reference, x, "jensen_bound");
  require_same_dim(reference, x_next, "jensen_bound");
  if (!(alpha > 0.0)) {
    throw ValidationError("alpha", "jensen_bound: alpha must be positive");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < reference.dim(); ++i) {
    const double r = reference[i];
    if (r <= 0.0) continue;
    if (x[i] <= 0.0) {
      throw SupportViolation("jensen_bound: reference has mass where x has none");
    }
    acc += r * (x_next[i] / x[i]);
  }
  if (!(acc > 0.0)) {
    throw NonpositiveArgument("jensen_bound: log argument " + std::to_string(acc) +
                              " is not positive");
  }
  return -std::log(acc) / alpha;
}

EssReport verify_ess(const MatrixLandscape& landscape, const SimplexPoint& candidate,
                     double radius, std::uint64_t samples, std::uint64_t seed) {
  if (candidate.dim() != landscape.dim()) {
    throw DimensionMismatch("verify_ess: candidate/landscape dimension mismatch");
  }
  if (!(radius > 0.0)) {
    throw ValidationError("radius", "verify_ess: radius must be positive");
  }
  if (samples < 1) {
    throw ValidationError("samples", "verify_ess: need at least one sample");
  }

  const std::size_t n = candidate.dim();
  // n coordinates drive a quasi-uniform simplex point, one more drives the
  // radial contraction toward the candidate.
  KroneckerSequence sequence(n + 1, seed);
  std::vector<double> point(n);

  double worst = std::numeric_limits<double>::infinity();
  std::uint64_t tested = 0;
  while (tested < samples) {
    const std::vector<double>& u = sequence.next();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      point[i] = -std::log(1.0 - u[i]);
      total += point[i];
    }
    double dist_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      point[i] = point[i] / total - candidate[i];
      dist_sq += point[i] * point[i];
    }
    if (dist_sq == 0.0) continue;  // exact hit on the candidate
    const double dist = std::sqrt(dist_sq);
    // Radial factor in [1/16, 1] of the ball radius keeps samples off the
    // candidate itself.
    const double rho = (1.0 + 15.0 * u[n]) / 16.0;
    const double scale = rho * std::min(1.0, radius / dist);
    for (std::size_t i = 0; i < n; ++i) {
      point[i] = candidate[i] + scale * point[i];
    }
    const std::vector<double> f = fitness(landscape, point);
    const double margin =
        mean_fitness_weighted(candidate, f) - mean_fitness_weighted(point, f);
    if (margin < worst) worst = margin;
    ++tested;
  }

  EssReport report{candidate, worst > 0.0, worst, tested, radius, seed};
  return report;
}

}  // namespace evodyn
