// sampling.hpp — deterministic samplers used by ESS verification and the
// experiment harness. Raw mt19937_64 output is mapped to doubles by hand so
// results are byte-identical across standard libraries.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace evodyn {

// Uniform double strictly inside (0, 1), 53-bit resolution.
double uniform_open(std::mt19937_64& rng);

// Quasi-Dirichlet(1) interior point: normalized exponentials.
std::vector<double> sample_simplex_interior(std::size_t n, std::mt19937_64& rng);

// Additive-recurrence (Kronecker) low-discrepancy sequence on [0,1)^d using
// the generalized golden ratio; the seed shifts the start point.
class KroneckerSequence {
 public:
  KroneckerSequence(std::size_t dims, std::uint64_t seed);

  // Advances to the next point and returns it.
  const std::vector<double>& next();

 private:
  std::vector<double> increment_;
  std::vector<double> state_;
};

}  // namespace evodyn
