#pragma once

/**
 * Shared numeric utilities and error types for the satbif toolkit.
 *
 * Conventions used throughout the library:
 *  - the rotating frame has unit angular speed, so time and arclength are
 *    dimensionless and the centrifugal term of the effective potential is
 *    |x_planar|^2 / 2;
 *  - the force exponent alpha lies in (1,3); beta = alpha - 1 in (0,2);
 *  - planar vectors are Eigen::Vector2d, spatial ones Eigen::Vector3d.
 */

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace satbif {

/** Parameter outside its documented domain (alpha range, masses, indices). */
class ParameterError : public std::invalid_argument {
public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/** Evaluation requested closer to a primary than the hard arithmetic guard. */
class CollisionError : public std::runtime_error {
public:
  explicit CollisionError(const std::string& what) : std::runtime_error(what) {}
};

/** An iterative solver (Newton, corrector, adaptive quadrature) gave up. */
class ConvergenceError : public std::runtime_error {
public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/** Hard guard below which a satellite-primary distance is a collision. */
inline constexpr double kCollisionGuard = 1e-12;

/** Sum in stable pairwise order; preserves accuracy for long positive sums. */
inline double pairwise_sum(const double* data, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 4) {
    double s = data[0];
    for (std::size_t i = 1; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

/** Format with 17 significant digits: round-trips any double through text. */
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace satbif
