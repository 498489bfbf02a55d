#include "evodyn/simplex.hpp"

#include <cmath>
#include <string>

namespace evodyn {

namespace {

constexpr double kSumKeepTolerance = 1e-12;
constexpr double kSumRepairTolerance = 1e-9;

}  // namespace

namespace detail {

void apply_sum_policy(std::vector<double>& coords) {
  double sum = 0.0;
  for (double c : coords) sum += c;
  const double dev = std::abs(sum - 1.0);
  if (!(dev < kSumRepairTolerance)) {
    throw InvalidSimplexPoint("coordinate sum " + std::to_string(sum) +
                              " deviates from 1 by more than 1e-9");
  }
  if (dev > kSumKeepTolerance) {
    for (double& c : coords) c /= sum;
  }
}

}  // namespace detail

SimplexPoint::SimplexPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) {
    throw InvalidSimplexPoint("simplex point needs at least one coordinate");
  }
  for (double c : coords_) {
    if (!(c >= 0.0)) {  // also rejects NaN
      throw InvalidSimplexPoint("negative coordinate " + std::to_string(c));
    }
  }
  detail::apply_sum_policy(coords_);
}

SimplexPoint SimplexPoint::barycenter(std::size_t n) {
  return SimplexPoint(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

bool SimplexPoint::is_interior(double delta) const noexcept {
  for (double c : coords_) {
    if (c <= delta) return false;
  }
  return true;
}

MatrixLandscape::MatrixLandscape(const std::vector<std::vector<double>>& rows)
    : n_(rows.size()) {
  if (n_ < 2) throw DimensionMismatch("payoff matrix must be at least 2x2");
  entries_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) throw DimensionMismatch("payoff matrix must be square");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

MatrixLandscape::MatrixLandscape(std::vector<double> row_major, std::size_t n)
    : entries_(std::move(row_major)), n_(n) {
  if (n_ < 2) throw DimensionMismatch("payoff matrix must be at least 2x2");
  if (entries_.size() != n_ * n_) {
    throw DimensionMismatch("payoff matrix must be square");
  }
}

MatrixLandscape make_cyclic_matrix(double a, double b) {
  return MatrixLandscape({0.0, a, b, b, 0.0, a, a, b, 0.0}, 3);
}

std::vector<double> fitness(const MatrixLandscape& landscape, std::span<const double> x) {
  const std::size_t n = landscape.dim();
  if (x.size() != n) {
    throw DimensionMismatch("fitness: state has dimension " + std::to_string(x.size()) +
                            ", landscape expects " + std::to_string(n));
  }
  std::vector<double> f(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += landscape.at(i, j) * x[j];
    f[i] = acc;
  }
  return f;
}

double mean_fitness_weighted(std::span<const double> x, std::span<const double> f) {
  if (x.size() != f.size()) {
    throw DimensionMismatch("mean_fitness_weighted: length mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * f[i];
  return acc;
}

double mean_fitness_uniform(std::span<const double> f) {
  if (f.empty()) throw DimensionMismatch("mean_fitness_uniform: empty vector");
  double acc = 0.0;
  for (double v : f) acc += v;
  return acc / static_cast<double>(f.size());
}

}  // namespace evodyn
