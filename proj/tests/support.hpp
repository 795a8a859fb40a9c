#pragma once

#include "genlasso/linalg.hpp"

#include <algorithm>
#include <random>

namespace genlasso::testing {

inline Matrix gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> normal;
  Matrix a(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) a(i, j) = normal(rng);
  }
  return a;
}

inline Vector gaussian_vector(std::mt19937_64& rng, int n) { return gaussian(rng, n, 1).col(0); }

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Closed-form lasso solution for X = I, D = I.
inline Vector soft_threshold(const Vector& y, double lambda) {
  Vector b(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    b(i) = std::copysign(std::max(std::abs(y(i)) - lambda, 0.0), y(i));
  }
  return b;
}

inline double l1(const Vector& v) { return v.lpNorm<1>(); }

/// Relative gap between two numbers on the scale of 1 + |a|.
inline double rel_gap(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(a)); }

}  // namespace genlasso::testing
