#pragma once

/**
 * Satellite equilibria: critical points of the effective potential V in the
 * primary plane.
 *
 * Planar critical points are located by damped Newton iteration on grad V
 * from a deterministic polar multistart grid, deduplicated, closed under the
 * configuration's symmetry group and classified by the planar Hessian
 * determinant D: saddles (D < 0, sigma = -1), minima (D > 0, sigma = +1;
 * maxima are impossible since trace > 2).  Counting obeys the identities
 *
 *     #saddle = (#primaries - 1) + #min,      sum sigma = 1 - #primaries.
 *
 * For the Maxwell ring all critical points lie on the rays phi = 0 and
 * phi = pi/n (mod the ring symmetry); a dedicated one-dimensional scan of
 * the radial derivative along those rays provides an independent census.
 */

#include <algorithm>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "satbif/common.hpp"
#include "satbif/configuration.hpp"
#include "satbif/potential.hpp"

namespace satbif {

enum class EquilibriumKind { Minimum, Saddle, Degenerate };

inline std::string to_string(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::Minimum: return "minimum";
    case EquilibriumKind::Saddle: return "saddle";
    default: return "degenerate";
  }
}

struct Equilibrium {
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  HessianBlocks hessian;
  EquilibriumKind kind = EquilibriumKind::Degenerate;
  int sigma = 0;             // sign of det of the planar Hessian block; 0 if degenerate
  double gradient_norm = 0.0;
};

/** Degeneracy threshold |D| < 1e-8 (1 + T^2): sigma is then unreliable. */
inline bool is_degenerate(double trace, double det) {
  return std::abs(det) < 1e-8 * (1.0 + trace * trace);
}

/** Build the classified record for a (refined) critical point. */
inline Equilibrium classify_equilibrium(const PrimaryConfiguration& config,
                                        const Eigen::Vector2d& x) {
  Equilibrium eq;
  eq.position = x;
  eq.hessian = potential_hessian(config, x);
  eq.gradient_norm = potential_gradient(config, x).norm();
  if (is_degenerate(eq.hessian.trace_planar, eq.hessian.det_planar)) {
    eq.kind = EquilibriumKind::Degenerate;
    eq.sigma = 0;
  } else if (eq.hessian.det_planar < 0.0) {
    eq.kind = EquilibriumKind::Saddle;
    eq.sigma = -1;
  } else {
    // trace > 2 rules out maxima, so D > 0 means a minimum
    eq.kind = EquilibriumKind::Minimum;
    eq.sigma = +1;
  }
  return eq;
}

struct NewtonOptions {
  double tol = 1e-10;   // gradient norm at convergence
  int max_iters = 100;
  double max_step = 1.0; // Newton steps are clamped to this length
};

/**
 * Damped Newton iteration on the planar gradient.  Backtracks when a step
 * fails to reduce the gradient norm; throws ConvergenceError when the
 * iteration exhausts its budget, diverges or runs into a primary.
 */
inline Equilibrium newton_refine(const PrimaryConfiguration& config,
                                 const Eigen::Vector2d& guess,
                                 const NewtonOptions& opts = {}) {
  Eigen::Vector2d x = guess;
  const double escape_radius = 100.0 * (1.0 + config.max_primary_radius());
  // One undamped step once converged: quadratic contraction pushes the
  // position error to roundoff even though the loop tolerance is 1e-10.
  const auto polish = [&](Eigen::Vector2d y, double gnorm) {
    try {
      const Eigen::Vector2d g = potential_gradient(config, y);
      const Eigen::Vector2d dy =
          potential_hessian(config, y).planar.fullPivLu().solve(-g);
      const Eigen::Vector2d trial = y + dy;
      if (dy.allFinite() && dy.norm() < 1.0 &&
          potential_gradient(config, trial).norm() < gnorm)
        y = trial;
    } catch (const CollisionError&) {
    }
    return classify_equilibrium(config, y);
  };
  try {
    double gnorm = potential_gradient(config, x).norm();
    for (int iter = 0; iter < opts.max_iters; ++iter) {
      if (gnorm < opts.tol) return polish(x, gnorm);
      const Eigen::Vector2d g = potential_gradient(config, x);
      const Eigen::Matrix2d h = potential_hessian(config, x).planar;
      Eigen::Vector2d dx = h.fullPivLu().solve(-g);
      if (!dx.allFinite() || dx.norm() > opts.max_step)
        dx *= opts.max_step / std::max(dx.norm(), opts.max_step);
      double s = 1.0;
      bool accepted = false;
      for (; s >= 1.0 / 64.0; s *= 0.5) {
        const Eigen::Vector2d trial = x + s * dx;
        if (min_primary_distance(config, trial) <= kCollisionGuard) continue;
        const double gn = potential_gradient(config, trial).norm();
        if (gn < (1.0 - 0.25 * s) * gnorm || gn < opts.tol) {
          x = trial;
          gnorm = gn;
          accepted = true;
          break;
        }
      }
      if (!accepted)
        throw ConvergenceError("newton_refine stalled at gradient norm " +
                               fmt17(gnorm));
      if (x.norm() > escape_radius)
        throw ConvergenceError("newton_refine diverged past the search region");
    }
    if (gnorm < opts.tol) return polish(x, gnorm);
  } catch (const CollisionError&) {
    throw ConvergenceError("newton_refine ran into a primary");
  }
  throw ConvergenceError("newton_refine: no convergence within iteration budget");
}

/**
 * Deterministic polar multistart search.  extra_seeds are refined before the
 * grid (the ring driver passes its ray-scan roots here so that small basins
 * near the center are never missed by the coarse grid).
 */
struct SearchSpec {
  double inner_radius = 0.05;
  double outer_radius = 0.0;   // 0: use 2 * max primary radius + 2
  int radial_nodes = 60;
  int angular_nodes = 120;
  double exclusion_radius = 0.01;  // grid nodes this close to a primary are skipped
  double dedup_tol = 1e-8;
  std::vector<Eigen::Vector2d> extra_seeds;
};

namespace detail {

inline void add_deduplicated(std::vector<Eigen::Vector2d>& points,
                             const Eigen::Vector2d& x, double tol) {
  for (const auto& p : points)
    if ((p - x).norm() < tol) return;
  points.push_back(x);
}

}  // namespace detail

inline std::vector<Equilibrium> find_planar_equilibria(
    const PrimaryConfiguration& config, const SearchSpec& spec = {}) {
  const double rho =
      spec.outer_radius > 0.0 ? spec.outer_radius
                              : 2.0 * config.max_primary_radius() + 2.0;

  // The gradient must point outward on the search boundary, otherwise roots
  // could hide outside the grid.
  for (int k = 0; k < 64; ++k) {
    const double t = 2.0 * M_PI * k / 64.0;
    const Eigen::Vector2d b(rho * std::cos(t), rho * std::sin(t));
    if (potential_gradient(config, b).dot(b) <= 0.0)
      throw ConvergenceError("search radius too small: inward gradient on boundary");
  }

  std::vector<Eigen::Vector2d> found;
  auto try_seed = [&](const Eigen::Vector2d& seed) {
    try {
      const Equilibrium eq = newton_refine(config, seed);
      if (min_primary_distance(config, eq.position) <= kCollisionGuard) return;
      detail::add_deduplicated(found, eq.position, spec.dedup_tol);
    } catch (const ConvergenceError&) {
      // this start failed; the grid has plenty of others
    }
  };

  for (const auto& seed : spec.extra_seeds) try_seed(seed);
  for (int i = 0; i < spec.radial_nodes; ++i) {
    const double r = spec.inner_radius +
                     (rho - spec.inner_radius) * i / (spec.radial_nodes - 1.0);
    for (int k = 0; k < spec.angular_nodes; ++k) {
      const double t = 2.0 * M_PI * k / spec.angular_nodes;
      const Eigen::Vector2d seed(r * std::cos(t), r * std::sin(t));
      if (min_primary_distance(config, seed) < spec.exclusion_radius) continue;
      try_seed(seed);
    }
  }

  // Close the set under the symmetry group of the configuration.
  const auto sym = detect_symmetry(config);
  std::vector<Eigen::Matrix2d> maps;
  for (int k = 1; k < sym.rotation_order; ++k) {
    const double t = 2.0 * M_PI * k / sym.rotation_order;
    Eigen::Matrix2d rot;
    rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    maps.push_back(rot);
  }
  if (sym.reflection) {
    const std::size_t nrot = maps.size();
    Eigen::Matrix2d refl;
    refl << 1.0, 0.0, 0.0, -1.0;
    maps.push_back(refl);
    for (std::size_t k = 0; k < nrot; ++k) maps.push_back(maps[k] * refl);
  }
  const std::vector<Eigen::Vector2d> base = found;
  for (const auto& x : base) {
    for (const auto& map : maps) {
      try {
        const Equilibrium eq = newton_refine(config, map * x);
        detail::add_deduplicated(found, eq.position, spec.dedup_tol);
      } catch (const ConvergenceError&) {
      }
    }
  }

  std::vector<Equilibrium> result;
  result.reserve(found.size());
  for (const auto& x : found) result.push_back(classify_equilibrium(config, x));
  std::sort(result.begin(), result.end(), [](const Equilibrium& a, const Equilibrium& b) {
    if (a.position.x() != b.position.x()) return a.position.x() < b.position.x();
    return a.position.y() < b.position.y();
  });
  return result;
}

/**
 * Counting identities.  Degenerate points make the count inconclusive (they
 * carry no sign); both identities must hold for a clean census.
 */
struct MorseReport {
  int n_minima = 0;
  int n_saddles = 0;
  int n_degenerate = 0;
  int n_primaries = 0;
  int sigma_sum = 0;
  bool saddle_identity = false;  // #saddle == (#primaries - 1) + #min
  bool sigma_identity = false;   // sum sigma == 1 - #primaries
  bool inconclusive = false;     // degenerate points present

  bool passed() const {
    return !inconclusive && saddle_identity && sigma_identity;
  }
  std::string summary() const {
    std::string s = std::to_string(n_saddles) + " = " +
                    std::to_string(n_primaries - 1) + " + " +
                    std::to_string(n_minima) + ": " +
                    (saddle_identity ? "PASS" : "FAIL");
    s += "; sum(sigma) = " + std::to_string(sigma_sum) + " vs " +
         std::to_string(1 - n_primaries) + ": " + (sigma_identity ? "PASS" : "FAIL");
    if (inconclusive) s += "; INCONCLUSIVE (degenerate points present)";
    return s;
  }
};

inline MorseReport morse_consistency(const PrimaryConfiguration& config,
                                     const std::vector<Equilibrium>& equilibria) {
  MorseReport rep;
  rep.n_primaries = static_cast<int>(config.primaries.size());
  for (const auto& eq : equilibria) {
    switch (eq.kind) {
      case EquilibriumKind::Minimum: ++rep.n_minima; break;
      case EquilibriumKind::Saddle: ++rep.n_saddles; break;
      default: ++rep.n_degenerate;
    }
    rep.sigma_sum += eq.sigma;
  }
  rep.saddle_identity = rep.n_saddles == (rep.n_primaries - 1) + rep.n_minima;
  rep.sigma_identity = rep.sigma_sum == 1 - rep.n_primaries;
  rep.inconclusive = rep.n_degenerate > 0;
  return rep;
}

// ---------------------------------------------------------------------------
// Ring potential in polar coordinates.
//
// In the scaled frame V(r, phi) = r^2/2 + mu~ phi_alpha(r)
//                                + m~ sum_j phi_alpha(q_j),
// q_j = sqrt(r^2 - 2 r cos(j zeta - phi) + 1), zeta = 2 pi / n,
// m~ = 1/(s+mu) the vertex mass and mu~ = mu/(s+mu) the central mass.
// ---------------------------------------------------------------------------

inline void detail_ring_check(double q) {
  if (!(q > kCollisionGuard))
    throw CollisionError("ring polar evaluation at a vertex");
}

inline double ring_potential(const RingGeometry& g, double r, double phi) {
  const double a = g.alpha;
  double v = 0.5 * r * r;
  if (g.mu > 0.0) v += g.central_mass * std::pow(r, 1.0 - a) / (a - 1.0);
  for (int j = 1; j <= g.n; ++j) {
    const double c = std::cos(2.0 * M_PI * j / g.n - phi);
    const double q = std::sqrt(r * r - 2.0 * r * c + 1.0);
    detail_ring_check(q);
    v += g.vertex_mass * std::pow(q, 1.0 - a) / (a - 1.0);
  }
  return v;
}

/** V_r: radial derivative of the scaled ring potential. */
inline double ring_radial_derivative(const RingGeometry& g, double r, double phi) {
  const double a = g.alpha;
  double v = r;
  if (g.mu > 0.0) v -= g.central_mass * std::pow(r, -a);
  for (int j = 1; j <= g.n; ++j) {
    const double c = std::cos(2.0 * M_PI * j / g.n - phi);
    const double q = std::sqrt(r * r - 2.0 * r * c + 1.0);
    detail_ring_check(q);
    v -= g.vertex_mass * (r - c) * std::pow(q, -a - 1.0);
  }
  return v;
}

/** V_rr. */
inline double ring_radial_second(const RingGeometry& g, double r, double phi) {
  const double a = g.alpha;
  double v = 1.0;
  if (g.mu > 0.0) v += a * g.central_mass * std::pow(r, -a - 1.0);
  for (int j = 1; j <= g.n; ++j) {
    const double c = std::cos(2.0 * M_PI * j / g.n - phi);
    const double q = std::sqrt(r * r - 2.0 * r * c + 1.0);
    detail_ring_check(q);
    v -= g.vertex_mass * (std::pow(q, -a - 1.0) -
                          (a + 1.0) * (r - c) * (r - c) * std::pow(q, -a - 3.0));
  }
  return v;
}

/** V_phi; its sign is -sign(sin n phi) away from the symmetry rays. */
inline double ring_angular_derivative(const RingGeometry& g, double r, double phi) {
  const double a = g.alpha;
  double v = 0.0;
  for (int j = 1; j <= g.n; ++j) {
    const double arg = 2.0 * M_PI * j / g.n - phi;
    const double q = std::sqrt(r * r - 2.0 * r * std::cos(arg) + 1.0);
    detail_ring_check(q);
    v += g.vertex_mass * r * std::sin(arg) * std::pow(q, -a - 1.0);
  }
  return v;
}

/** V_phiphi. */
inline double ring_angular_second(const RingGeometry& g, double r, double phi) {
  const double a = g.alpha;
  double v = 0.0;
  for (int j = 1; j <= g.n; ++j) {
    const double arg = 2.0 * M_PI * j / g.n - phi;
    const double sn = std::sin(arg), cs = std::cos(arg);
    const double q = std::sqrt(r * r - 2.0 * r * cs + 1.0);
    detail_ring_check(q);
    v += g.vertex_mass * r *
         (-cs * std::pow(q, -a - 1.0) +
          (a + 1.0) * r * sn * sn * std::pow(q, -a - 3.0));
  }
  return v;
}

/**
 * Critical radii of the ring potential on its two symmetry rays.
 *
 * phi = 0 passes through a vertex; phi = pi/n bisects two vertices.  All
 * ring equilibria are rotations/reflections of roots on these rays:
 *   r1 > 1 on phi = 0 (saddle, always),
 *   r2 < 1 (saddle; on phi = 0 when mu > 0, on phi = pi/n when mu = 0),
 *   r3 > 1 on phi = pi/n (minimum, always),
 *   r4 < r5 < 1 on phi = pi/n (minimum + saddle; only n >= 3 with small mu).
 * The origin is itself a critical point (a minimum) exactly when mu = 0.
 */
struct RingCriticalSet {
  double r1 = 0.0;
  double r2 = 0.0;
  bool r2_on_vertex_ray = true;  // false (diagonal ray) exactly when mu = 0
  double r3 = 0.0;
  std::optional<double> r4;
  std::optional<double> r5;
  bool r45_merged = false;       // |r4 - r5| < 1e-6: fold point
  bool origin_critical = false;
};

namespace detail {

/** All sign-change roots of r -> ring_radial_derivative on a log-spaced scan. */
inline std::vector<double> ray_roots(const RingGeometry& g, double phi, double rlo,
                                     double rhi, int samples) {
  std::vector<double> roots;
  const double llo = std::log(rlo), lhi = std::log(rhi);
  double rprev = rlo, fprev = ring_radial_derivative(g, rlo, phi);
  for (int i = 1; i < samples; ++i) {
    const double r = std::exp(llo + (lhi - llo) * i / (samples - 1.0));
    const double f = ring_radial_derivative(g, r, phi);
    if (fprev == 0.0) roots.push_back(rprev);
    if (fprev * f < 0.0) {
      double lo = rprev, hi = r, flo = fprev;
      // plain bisection: the scan spacing guarantees a single sign change
      for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = ring_radial_derivative(g, mid, phi);
        if (flo * fm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    rprev = r;
    fprev = f;
  }
  return roots;
}

}  // namespace detail

inline RingCriticalSet ring_critical_rays(const RingGeometry& g) {
  RingCriticalSet set;
  set.origin_critical = g.mu == 0.0;
  const double rho = 4.0;  // scaled ring radius is 1; cf. the multistart radius
  const double diag = M_PI / g.n;
  const int samples = 5000;  // per segment; two segments = the documented 1e4 scan

  const auto inner_vertex = detail::ray_roots(g, 0.0, 1e-6, 1.0 - 1e-6, samples);
  const auto outer_vertex = detail::ray_roots(g, 0.0, 1.0 + 1e-6, rho, samples);
  const auto inner_diag = detail::ray_roots(g, diag, 1e-6, 1.0 - 1e-6, samples);
  const auto outer_diag = detail::ray_roots(g, diag, 1.0 + 1e-6, rho, samples);

  if (outer_vertex.size() != 1)
    throw ConvergenceError("ring scan: expected exactly one outer vertex-ray root");
  set.r1 = outer_vertex.front();

  if (outer_diag.size() != 1)
    throw ConvergenceError("ring scan: expected exactly one outer diagonal-ray root");
  set.r3 = outer_diag.front();

  if (g.mu > 0.0) {
    if (inner_vertex.size() != 1)
      throw ConvergenceError("ring scan: expected exactly one inner vertex-ray root");
    set.r2 = inner_vertex.front();
    set.r2_on_vertex_ray = true;
    if (inner_diag.size() == 2) {
      set.r4 = inner_diag[0];
      set.r5 = inner_diag[1];
      set.r45_merged = (*set.r5 - *set.r4) < 1e-6;
    } else if (!inner_diag.empty()) {
      throw ConvergenceError("ring scan: unexpected inner diagonal-ray root count " +
                             std::to_string(inner_diag.size()));
    }
  } else {
    if (!inner_vertex.empty())
      throw ConvergenceError("ring scan: unexpected vertex-ray root below 1 at mu=0");
    if (inner_diag.size() != 1)
      throw ConvergenceError(
          "ring scan: expected exactly one inner diagonal-ray root at mu=0");
    set.r2 = inner_diag.front();
    set.r2_on_vertex_ray = false;
  }
  return set;
}

/** Planar points represented by a ring critical set (one per ray root plus
 *  the origin when critical); seeds for the multistart search. */
inline std::vector<Eigen::Vector2d> ring_critical_seeds(const RingGeometry& g,
                                                        const RingCriticalSet& set) {
  const double diag = M_PI / g.n;
  std::vector<Eigen::Vector2d> seeds;
  seeds.emplace_back(set.r1, 0.0);
  if (set.r2_on_vertex_ray)
    seeds.emplace_back(set.r2, 0.0);
  else
    seeds.emplace_back(set.r2 * std::cos(diag), set.r2 * std::sin(diag));
  seeds.emplace_back(set.r3 * std::cos(diag), set.r3 * std::sin(diag));
  if (set.r4) seeds.emplace_back(*set.r4 * std::cos(diag), *set.r4 * std::sin(diag));
  if (set.r5) seeds.emplace_back(*set.r5 * std::cos(diag), *set.r5 * std::sin(diag));
  if (set.origin_critical) seeds.emplace_back(0.0, 0.0);
  return seeds;
}

/**
 * Ring census: the multistart search seeded with the ray-scan roots, so the
 * small basins near the center (r4 at small mu) are found reliably.
 */
inline std::vector<Equilibrium> ring_equilibria(const PrimaryConfiguration& config,
                                                const RingGeometry& geom,
                                                SearchSpec spec = {}) {
  spec.extra_seeds = ring_critical_seeds(geom, ring_critical_rays(geom));
  return find_planar_equilibria(config, spec);
}

// ---------------------------------------------------------------------------
// CSV export: columns x, y, kind, sigma, T, D, nu1_squared (17 digits).
// ---------------------------------------------------------------------------

inline void write_equilibria_csv(std::ostream& out,
                                 const PrimaryConfiguration& config,
                                 const std::vector<Equilibrium>& equilibria) {
  out << "x,y,kind,sigma,T,D,nu1_squared\n";
  for (const auto& eq : equilibria) {
    out << fmt17(eq.position.x()) << ',' << fmt17(eq.position.y()) << ','
        << to_string(eq.kind) << ',' << eq.sigma << ','
        << fmt17(eq.hessian.trace_planar) << ',' << fmt17(eq.hessian.det_planar)
        << ',' << fmt17(-eq.hessian.normal) << '\n';
  }
}

}  // namespace satbif
