#pragma once

/**
 * Rotating relative-equilibrium configurations of primaries.
 *
 * A configuration is a finite set of point masses m_j at planar positions a_j
 * that rotate rigidly with unit angular speed.  Such a set is a relative
 * equilibrium exactly when every primary satisfies
 *
 *     a_i = sum_{j != i} m_j (a_i - a_j) / |a_i - a_j|^(alpha+1),
 *
 * where alpha in (1,3) is the force exponent (alpha = 2 is Newtonian).
 * Two builders are provided: the two-primary split (mu, 1-mu) on the x-axis
 * and the Maxwell ring of n equal vertices around an optional central mass.
 */

#include <cmath>
#include <complex>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "satbif/common.hpp"

namespace satbif {

struct Primary {
  double mass = 0.0;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
};

struct PrimaryConfiguration {
  double alpha = 2.0;
  std::vector<Primary> primaries;
  std::string label;

  PrimaryConfiguration() = default;

  /** Validates alpha range, positive masses and pairwise distinct positions. */
  PrimaryConfiguration(double alpha_, std::vector<Primary> primaries_,
                       std::string label_ = "")
      : alpha(alpha_), primaries(std::move(primaries_)), label(std::move(label_)) {
    if (!(alpha > 1.0 && alpha < 3.0))
      throw ParameterError("alpha must lie in (1,3), got " + fmt17(alpha));
    if (primaries.empty())
      throw ParameterError("configuration needs at least one primary");
    for (const auto& p : primaries)
      if (!(p.mass > 0.0))
        throw ParameterError("primary masses must be positive");
    for (std::size_t i = 0; i < primaries.size(); ++i)
      for (std::size_t j = i + 1; j < primaries.size(); ++j)
        if ((primaries[i].position - primaries[j].position).norm() < 1e-12)
          throw ParameterError("primary positions must be pairwise distinct");
  }

  double beta() const { return alpha - 1.0; }

  double max_primary_radius() const {
    double r = 0.0;
    for (const auto& p : primaries) r = std::max(r, p.position.norm());
    return r;
  }
};

/**
 * Per-primary residuals of the relative-equilibrium relation.
 * All entries vanish (to roundoff) exactly when the set rotates rigidly at
 * unit angular speed under the alpha-force law.
 */
inline std::vector<Eigen::Vector2d> equilibrium_residual(
    const PrimaryConfiguration& config) {
  const std::size_t n = config.primaries.size();
  std::vector<Eigen::Vector2d> res(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Vector2d acc = Eigen::Vector2d::Zero();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Eigen::Vector2d d =
          config.primaries[i].position - config.primaries[j].position;
      acc += config.primaries[j].mass * d / std::pow(d.norm(), config.alpha + 1.0);
    }
    res[i] = config.primaries[i].position - acc;
  }
  return res;
}

inline double max_residual_norm(const PrimaryConfiguration& config) {
  double m = 0.0;
  for (const auto& r : equilibrium_residual(config)) m = std::max(m, r.norm());
  return m;
}

/**
 * Two primaries with masses (mu, 1-mu) at (1-mu, 0) and (-mu, 0).
 * The mutual distance is 1, so the relation holds at unit angular speed for
 * every alpha in (1,3).
 */
inline PrimaryConfiguration three_body_config(double mu, double alpha) {
  if (!(mu > 0.0 && mu < 1.0))
    throw ParameterError("three-body mass ratio mu must lie in (0,1), got " +
                         fmt17(mu));
  PrimaryConfiguration config(
      alpha,
      {Primary{mu, {1.0 - mu, 0.0}}, Primary{1.0 - mu, {-mu, 0.0}}},
      "three_body(mu=" + fmt17(mu) + ",alpha=" + fmt17(alpha) + ")");
  if (max_residual_norm(config) > 1e-9)
    throw std::logic_error("three-body builder produced a nonzero residual");
  return config;
}

/**
 * Geometry of the scaled Maxwell ring.
 *
 * s is the ring structure constant 2^(-alpha) sum_{j=1}^{n-1} sin^(1-alpha)(j pi/n);
 * the unscaled ring has radius a with a^(alpha+1) = s + mu.  The scaled frame
 * divides positions by a and masses by s + mu, which leaves the equilibrium
 * relation invariant, so the scaled ring (radius 1, vertex mass 1/(s+mu),
 * central mass mu/(s+mu)) again rotates at unit angular speed.
 */
struct RingGeometry {
  int n = 0;
  double mu = 0.0;
  double alpha = 2.0;
  double s = 0.0;            // structure constant of the defining sum
  double a = 0.0;            // unscaled ring radius, a^(alpha+1) = s + mu
  double vertex_mass = 0.0;  // scaled, 1/(s+mu)
  double central_mass = 0.0; // scaled, mu/(s+mu); zero when mu = 0
};

/** Structure constant s(n, alpha), evaluated with pairwise summation. */
inline double ring_structure_constant(int n, double alpha) {
  std::vector<double> terms;
  terms.reserve(n - 1);
  for (int j = 1; j <= n - 1; ++j)
    terms.push_back(std::pow(std::sin(j * M_PI / n), 1.0 - alpha));
  return std::pow(2.0, -alpha) * pairwise_sum(terms);
}

/**
 * Scaled Maxwell ring: n >= 2 unit-spaced vertices on the unit circle plus an
 * optional central mass.  mu = 0 is allowed only for n >= 3 (a bare pair of
 * primaries on a circle of radius 1 cannot rotate at unit speed).
 */
inline std::pair<PrimaryConfiguration, RingGeometry> maxwell_ring_config(
    int n, double mu, double alpha) {
  if (n < 2) throw ParameterError("ring needs n >= 2 vertices");
  if (mu < 0.0) throw ParameterError("central mass ratio mu must be >= 0");
  if (n == 2 && mu == 0.0)
    throw ParameterError("n = 2 ring requires a positive central mass");

  RingGeometry geom;
  geom.n = n;
  geom.mu = mu;
  geom.alpha = alpha;
  geom.s = ring_structure_constant(n, alpha);
  geom.a = std::pow(geom.s + mu, 1.0 / (alpha + 1.0));
  geom.vertex_mass = 1.0 / (geom.s + mu);
  geom.central_mass = mu / (geom.s + mu);

  std::vector<Primary> primaries;
  primaries.reserve(n + 1);
  for (int j = 0; j < n; ++j) {
    const double theta = 2.0 * M_PI * j / n;
    primaries.push_back(
        Primary{geom.vertex_mass, {std::cos(theta), std::sin(theta)}});
  }
  if (mu > 0.0) primaries.push_back(Primary{geom.central_mass, {0.0, 0.0}});

  PrimaryConfiguration config(alpha, std::move(primaries),
                              "ring(n=" + std::to_string(n) + ",mu=" + fmt17(mu) +
                                  ",alpha=" + fmt17(alpha) + ")");
  if (max_residual_norm(config) > 1e-9)
    throw std::logic_error("ring builder produced a nonzero residual");
  return {std::move(config), geom};
}

/**
 * Discrete symmetries of a configuration, used to close equilibrium sets
 * under the symmetry group.  rotation_order m is the largest m such that
 * rotation by 2 pi / m permutes the weighted primaries; reflection marks
 * invariance under y -> -y.
 */
struct ConfigurationSymmetry {
  int rotation_order = 1;
  bool reflection = false;
};

namespace detail {

inline bool maps_to_self(const PrimaryConfiguration& config,
                         const Eigen::Matrix2d& map) {
  constexpr double tol = 1e-9;
  for (const auto& p : config.primaries) {
    const Eigen::Vector2d image = map * p.position;
    bool matched = false;
    for (const auto& q : config.primaries) {
      if ((image - q.position).norm() < tol &&
          std::abs(p.mass - q.mass) < tol * (1.0 + std::abs(p.mass))) {
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace detail

inline ConfigurationSymmetry detect_symmetry(const PrimaryConfiguration& config) {
  ConfigurationSymmetry sym;
  const int count = static_cast<int>(config.primaries.size());
  for (int m = count; m >= 2; --m) {
    const double t = 2.0 * M_PI / m;
    Eigen::Matrix2d rot;
    rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    if (detail::maps_to_self(config, rot)) {
      sym.rotation_order = m;
      break;
    }
  }
  Eigen::Matrix2d refl;
  refl << 1.0, 0.0, 0.0, -1.0;
  sym.reflection = detail::maps_to_self(config, refl);
  return sym;
}

// ---------------------------------------------------------------------------
// JSON configuration files.
//
// Full form:      {"alpha": a, "primaries": [{"mass": m, "position": [x,y]}...],
//                  "label": "..."}
// Shorthands:     {"three_body": {"mu": m}, "alpha": a}
//                 {"ring": {"n": n, "mu": m}, "alpha": a}
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const PrimaryConfiguration& config) {
  nlohmann::json j;
  j["alpha"] = config.alpha;
  j["label"] = config.label;
  j["primaries"] = nlohmann::json::array();
  for (const auto& p : config.primaries)
    j["primaries"].push_back(
        {{"mass", p.mass}, {"position", {p.position.x(), p.position.y()}}});
  return j;
}

inline PrimaryConfiguration config_from_json(const nlohmann::json& j) {
  try {
    if (!j.contains("alpha"))
      throw ParameterError("config is missing required key \"alpha\"");
    const double alpha = j.at("alpha").get<double>();
    if (j.contains("three_body"))
      return three_body_config(j.at("three_body").at("mu").get<double>(), alpha);
    if (j.contains("ring"))
      return maxwell_ring_config(j.at("ring").at("n").get<int>(),
                                 j.at("ring").at("mu").get<double>(), alpha)
          .first;
    if (!j.contains("primaries"))
      throw ParameterError(
          "config needs \"primaries\" or a \"three_body\"/\"ring\" shorthand");
    std::vector<Primary> primaries;
    for (const auto& pj : j.at("primaries")) {
      Primary p;
      p.mass = pj.at("mass").get<double>();
      const auto& pos = pj.at("position");
      p.position = Eigen::Vector2d(pos.at(0).get<double>(), pos.at(1).get<double>());
      primaries.push_back(p);
    }
    return PrimaryConfiguration(alpha, std::move(primaries),
                                j.value("label", std::string{}));
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed configuration JSON: ") + e.what());
  }
}

inline PrimaryConfiguration load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("cannot parse config file ") + path + ": " +
                         e.what());
  }
  return config_from_json(j);
}

}  // namespace satbif
