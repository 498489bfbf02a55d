// simplex.hpp — population states on the probability simplex, payoff
// landscapes, and fitness evaluation shared by every dynamic.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evodyn/errors.hpp"

namespace evodyn {

// A point of the probability simplex: nonnegative coordinates summing to 1.
//
// Construction accepts a small amount of accumulated drift: a coordinate sum
// within 1e-12 of 1 is kept bit-for-bit, a deviation below 1e-9 is repaired
// by dividing by the sum, anything larger is rejected.
class SimplexPoint {
 public:
  explicit SimplexPoint(std::vector<double> coords);

  static SimplexPoint barycenter(std::size_t n);

  [[nodiscard]] std::size_t dim() const noexcept { return coords_.size(); }
  [[nodiscard]] const std::vector<double>& coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }

  // True when every coordinate exceeds delta.
  [[nodiscard]] bool is_interior(double delta) const noexcept;

  operator std::span<const double>() const noexcept { return coords_; }

  bool operator==(const SimplexPoint&) const = default;

 private:
  std::vector<double> coords_;
};

// Linear fitness landscape f(x) = A x defined by a square payoff matrix
// (not necessarily symmetric).
class MatrixLandscape {
 public:
  explicit MatrixLandscape(const std::vector<std::vector<double>>& rows);
  MatrixLandscape(std::vector<double> row_major, std::size_t n);

  [[nodiscard]] std::size_t dim() const noexcept { return n_; }
  [[nodiscard]] double at(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * n_ + j];
  }
  [[nodiscard]] const std::vector<double>& row_major() const noexcept { return entries_; }

  bool operator==(const MatrixLandscape&) const = default;

 private:
  std::vector<double> entries_;
  std::size_t n_;
};

// Direction of motion in the tangent space of the simplex (components sum
// to zero when produced by one of the dynamic fields).
struct TangentVector {
  std::vector<double> components;
};

// The 3x3 cyclic payoff matrix with rows (0,a,b), (b,0,a), (a,b,0).
// a = -b = 1 is the rock-paper-scissors game.
MatrixLandscape make_cyclic_matrix(double a, double b);

// f(x) = A x. Accepts arbitrary real vectors so momentum look-ahead points
// slightly off the simplex evaluate verbatim.
std::vector<double> fitness(const MatrixLandscape& landscape, std::span<const double> x);

// Population-weighted mean fitness x . f.
double mean_fitness_weighted(std::span<const double> x, std::span<const double> f);

// Unweighted average fitness (1/n) sum_k f_k.
double mean_fitness_uniform(std::span<const double> f);

namespace detail {
// Shared sum policy of SimplexPoint: keep, renormalize, or reject.
// Applied in place; throws InvalidSimplexPoint on deviation >= 1e-9.
void apply_sum_policy(std::vector<double>& coords);
}  // namespace detail

}  // namespace evodyn
