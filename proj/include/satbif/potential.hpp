#pragma once

/**
 * Effective potential of a satellite in the rotating frame of a primary
 * configuration:
 *
 *     V(x) = |Ibar x|^2 / 2 + sum_j m_j phi_alpha(|x - (a_j, 0)|),
 *
 * with x in R^3, Ibar = diag(1,1,0) (centrifugal term of the unit-speed
 * frame) and the homogeneous potential kernel
 *
 *     phi_alpha(d) = d^(1-alpha) / (alpha - 1),   phi_alpha'(d) = -d^(-alpha).
 *
 * At planar points the Hessian splits into a symmetric 2x2 planar block and
 * a scalar normal block equal to -nu1^2, nu1^2 = sum_j m_j / d_j^(alpha+1).
 */

#include <cmath>

#include "satbif/common.hpp"
#include "satbif/configuration.hpp"

namespace satbif {

namespace detail {
inline void check_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha < 3.0))
    throw ParameterError("alpha must lie in (1,3), got " + fmt17(alpha));
}
inline void check_distance(double d) {
  if (!(d > kCollisionGuard))
    throw CollisionError("evaluation within collision guard of a primary (d=" +
                         fmt17(d) + ")");
}
}  // namespace detail

/** Kernel phi_alpha(d) = d^(1-alpha)/(alpha-1); positive, decreasing. */
inline double phi_alpha(double d, double alpha) {
  detail::check_alpha(alpha);
  detail::check_distance(d);
  return std::pow(d, 1.0 - alpha) / (alpha - 1.0);
}

/** First derivative phi_alpha'(d) = -d^(-alpha). */
inline double phi_alpha_d1(double d, double alpha) {
  detail::check_alpha(alpha);
  detail::check_distance(d);
  return -std::pow(d, -alpha);
}

/** Second derivative phi_alpha''(d) = alpha d^(-alpha-1). */
inline double phi_alpha_d2(double d, double alpha) {
  detail::check_alpha(alpha);
  detail::check_distance(d);
  return alpha * std::pow(d, -alpha - 1.0);
}

/** Spatial position of primary j (primaries live in the z = 0 plane). */
inline Eigen::Vector3d primary_position3(const Primary& p) {
  return {p.position.x(), p.position.y(), 0.0};
}

inline double potential_value(const PrimaryConfiguration& config,
                              const Eigen::Vector3d& x) {
  double v = 0.5 * (x.x() * x.x() + x.y() * x.y());
  for (const auto& p : config.primaries) {
    const double d = (x - primary_position3(p)).norm();
    v += p.mass * phi_alpha(d, config.alpha);
  }
  return v;
}

inline double potential_value(const PrimaryConfiguration& config,
                              const Eigen::Vector2d& x) {
  return potential_value(config, Eigen::Vector3d(x.x(), x.y(), 0.0));
}

inline Eigen::Vector3d potential_gradient(const PrimaryConfiguration& config,
                                          const Eigen::Vector3d& x) {
  Eigen::Vector3d g(x.x(), x.y(), 0.0);
  for (const auto& p : config.primaries) {
    const Eigen::Vector3d dx = x - primary_position3(p);
    const double d = dx.norm();
    detail::check_distance(d);
    g -= p.mass * dx * std::pow(d, -config.alpha - 1.0);
  }
  return g;
}

/** Planar gradient; the z-component vanishes identically on the plane. */
inline Eigen::Vector2d potential_gradient(const PrimaryConfiguration& config,
                                          const Eigen::Vector2d& x) {
  Eigen::Vector2d g = x;
  for (const auto& p : config.primaries) {
    const Eigen::Vector2d dx = x - p.position;
    const double d = dx.norm();
    detail::check_distance(d);
    g -= p.mass * dx * std::pow(d, -config.alpha - 1.0);
  }
  return g;
}

/** nu1^2 = sum_j m_j / d_j^(alpha+1) > 0; the squared normal frequency. */
inline double nu1_squared(const PrimaryConfiguration& config,
                          const Eigen::Vector2d& x) {
  double s = 0.0;
  for (const auto& p : config.primaries) {
    const double d = (x - p.position).norm();
    detail::check_distance(d);
    s += p.mass * std::pow(d, -config.alpha - 1.0);
  }
  return s;
}

/**
 * Hessian of V at a planar point, split into its invariant blocks:
 * planar 2x2 block I + sum_j m_j A_j and scalar normal block -nu1^2, where
 *
 *   A_j = (alpha+1)/d^(alpha+3) (x-a_j)(x-a_j)^T - I/d^(alpha+1).
 *
 * trace_planar = 2 + (alpha-1) nu1^2 > 2 always.
 */
struct HessianBlocks {
  Eigen::Matrix2d planar = Eigen::Matrix2d::Zero();
  double normal = 0.0;
  double trace_planar = 0.0;
  double det_planar = 0.0;
};

inline HessianBlocks potential_hessian(const PrimaryConfiguration& config,
                                       const Eigen::Vector2d& x) {
  HessianBlocks h;
  h.planar = Eigen::Matrix2d::Identity();
  double nu1sq = 0.0;
  for (const auto& p : config.primaries) {
    const Eigen::Vector2d dx = x - p.position;
    const double d = dx.norm();
    detail::check_distance(d);
    const double inv = std::pow(d, -config.alpha - 1.0);
    h.planar += p.mass * ((config.alpha + 1.0) * inv / (d * d) * dx * dx.transpose() -
                          inv * Eigen::Matrix2d::Identity());
    nu1sq += p.mass * inv;
  }
  h.normal = -nu1sq;
  h.trace_planar = h.planar.trace();
  h.det_planar = h.planar.determinant();
  return h;
}

/** Spatial overload; rejects points off the primary plane. */
inline HessianBlocks potential_hessian(const PrimaryConfiguration& config,
                                       const Eigen::Vector3d& x) {
  if (std::abs(x.z()) > 1e-9)
    throw ParameterError("hessian blocks are defined at planar points only (z=" +
                         fmt17(x.z()) + ")");
  return potential_hessian(config, Eigen::Vector2d(x.x(), x.y()));
}

/**
 * Full 3x3 Hessian at an arbitrary (possibly off-plane) point:
 * Ibar + sum_j m_j d^(-alpha-1) [ (alpha+1) u u^T - I ],  u = (x-a_j)/d.
 * The continuation corrector linearizes spatial loops with this.
 */
inline Eigen::Matrix3d potential_hessian_matrix(const PrimaryConfiguration& config,
                                                const Eigen::Vector3d& x) {
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  h(0, 0) = h(1, 1) = 1.0;
  for (const auto& p : config.primaries) {
    const Eigen::Vector3d dx = x - primary_position3(p);
    const double d = dx.norm();
    detail::check_distance(d);
    const double inv = std::pow(d, -config.alpha - 1.0);
    h += p.mass * ((config.alpha + 1.0) * inv / (d * d) * dx * dx.transpose() -
                   inv * Eigen::Matrix3d::Identity());
  }
  return h;
}

/** Distance from x to the nearest primary. */
inline double min_primary_distance(const PrimaryConfiguration& config,
                                   const Eigen::Vector3d& x) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : config.primaries)
    d = std::min(d, (x - primary_position3(p)).norm());
  return d;
}

inline double min_primary_distance(const PrimaryConfiguration& config,
                                   const Eigen::Vector2d& x) {
  return min_primary_distance(config, Eigen::Vector3d(x.x(), x.y(), 0.0));
}

}  // namespace satbif
