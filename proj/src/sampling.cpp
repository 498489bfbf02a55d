#include "evodyn/sampling.hpp"

#include <cmath>

namespace evodyn {

namespace {

// splitmix64, used only to derive per-dimension start offsets from a seed.
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double fract(double v) { return v - std::floor(v); }

}  // namespace

double uniform_open(std::mt19937_64& rng) {
  // (k + 0.5) / 2^53 with k in [0, 2^53) never touches 0 or 1.
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> sample_simplex_interior(std::size_t n, std::mt19937_64& rng) {
  std::vector<double> point(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    point[i] = -std::log(1.0 - uniform_open(rng));
    sum += point[i];
  }
  for (double& c : point) c /= sum;
  return point;
}

KroneckerSequence::KroneckerSequence(std::size_t dims, std::uint64_t seed)
    : increment_(dims), state_(dims) {
  // Generalized golden ratio: the positive root of x^(d+1) = x + 1.
  double phi = 2.0;
  for (int it = 0; it < 64; ++it) {
    phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(dims + 1));
  }
  std::uint64_t mix_state = seed;
  double alpha = 1.0;
  for (std::size_t j = 0; j < dims; ++j) {
    alpha /= phi;
    increment_[j] = alpha;
    state_[j] = (static_cast<double>(splitmix64(mix_state) >> 11) + 0.5) * 0x1.0p-53;
  }
}

const std::vector<double>& KroneckerSequence::next() {
  for (std::size_t j = 0; j < state_.size(); ++j) {
    state_[j] = fract(state_[j] + increment_[j]);
  }
  return state_;
}

}  // namespace evodyn
