#pragma once

/**
 * Linearization blocks and bifurcation data at a satellite equilibrium.
 *
 * Periodic solutions of frequency nu branch off an equilibrium x0 where the
 * mode-1 block of the linearized loop operator is singular.  The blocks are
 *
 *     M0(nu) = nu^2 I - 2 i nu J + H_planar   (2x2 Hermitian, planar modes)
 *     M1(nu) = nu^2 - nu1^2                   (scalar, normal modes)
 *
 * with J the rotation generator [[0,-1],[1,0]] and H_planar the planar
 * Hessian block (trace T, determinant D).  det M0(nu) is the real quartic
 * nu^4 - 2(2 - T/2) nu^2 + D, so planar candidate frequencies are
 *
 *     nu_pm^2 = (2 - T/2) +- sqrt((2 - T/2)^2 - D),
 *
 * giving one candidate (nu_+) at saddles (D < 0) and either two (nu_+ and
 * nu_-) or none at minima.  The normal candidate is always nu1.
 *
 * Each candidate carries the jump eta of the orthogonal-degree index:
 *     eta_k(nu) = sigma * (n_k(nu - rho) - n_k(nu + rho)),
 * where n_k counts negative eigenvalues of the corresponding block and
 * sigma is the sign of D.  A nonzero jump forces a genuine branch of
 * periodic solutions; the case analysis gives
 *     saddles:          eta0(nu_+) = -1,                 eta1(nu1) = -1,
 *     two-root minima:  eta0(nu_+) = +1, eta0(nu_-) = -1, eta1(nu1) = +1.
 */

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "satbif/common.hpp"
#include "satbif/equilibria.hpp"

namespace satbif {

enum class SymmetryClass { PlanarZ2, EightZ2tilde, None };

inline std::string to_string(SymmetryClass s) {
  switch (s) {
    case SymmetryClass::PlanarZ2: return "planar";
    case SymmetryClass::EightZ2tilde: return "eight";
    default: return "none";
  }
}

struct ResonanceFlag {
  int mode = 0;        // planar: nu_+ = mode * nu_-; spatial: 2*mode*nu1 = target
  std::string target;  // "nu_plus" or "nu_minus"
  double residual = 0.0;
};

struct BifurcationPoint {
  double nu = 0.0;
  double period = 0.0;  // 2 pi / nu
  SymmetryClass symmetry = SymmetryClass::None;
  int eta = 0;
  std::vector<ResonanceFlag> resonant_flags;
};

/** Scalar spectral summary of an equilibrium. */
struct SpectralData {
  double T = 0.0;
  double D = 0.0;
  std::optional<double> nu_plus;   // present when the quartic root is positive
  std::optional<double> nu_minus;
  double nu1 = 0.0;
  int sigma = 0;
};

inline SpectralData spectral_data(const Equilibrium& eq) {
  SpectralData s;
  s.T = eq.hessian.trace_planar;
  s.D = eq.hessian.det_planar;
  s.nu1 = std::sqrt(-eq.hessian.normal);
  s.sigma = eq.sigma;
  const double u = 2.0 - 0.5 * s.T;
  const double disc = u * u - s.D;
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    if (u + root > 0.0) s.nu_plus = std::sqrt(u + root);
    if (u - root > 0.0) s.nu_minus = std::sqrt(u - root);
  }
  return s;
}

/** Planar block M0(nu); Hermitian for real nu. */
inline Eigen::Matrix2cd block_M0(const Equilibrium& eq, double nu) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m = eq.hessian.planar.cast<std::complex<double>>();
  m(0, 0) += nu * nu;
  m(1, 1) += nu * nu;
  // -2 i nu J with J = [[0,-1],[1,0]]
  m(0, 1) += 2.0i * nu;
  m(1, 0) += -2.0i * nu;
  return m;
}

/** Normal block M1(nu) = nu^2 - nu1^2. */
inline double block_M1(const Equilibrium& eq, double nu) {
  return nu * nu + eq.hessian.normal;
}

/** Eigenvalues of a 2x2 Hermitian matrix, ascending. */
inline std::array<double, 2> hermitian_eigenvalues(const Eigen::Matrix2cd& m) {
  const double a = m(0, 0).real(), c = m(1, 1).real();
  const double mid = 0.5 * (a + c);
  const double rad = std::sqrt(0.25 * (a - c) * (a - c) + std::norm(m(0, 1)));
  return {mid - rad, mid + rad};
}

/** Morse index of M0(nu): number of negative eigenvalues (0, 1 or 2). */
inline int morse_index_M0(const Equilibrium& eq, double nu) {
  const auto ev = hermitian_eigenvalues(block_M0(eq, nu));
  return (ev[0] < 0.0) + (ev[1] < 0.0);
}

/** Definition-based index jump of the planar block at nu (probe 1e-6(1+nu)). */
inline int eta_planar_by_definition(const Equilibrium& eq, double nu) {
  const double rho = 1e-6 * (1.0 + nu);
  return eq.sigma * (morse_index_M0(eq, nu - rho) - morse_index_M0(eq, nu + rho));
}

/** Definition-based index jump of the normal block at nu. */
inline int eta_spatial_by_definition(const Equilibrium& eq, double nu) {
  const double rho = 1e-6 * (1.0 + nu);
  const int below = block_M1(eq, nu - rho) < 0.0 ? 1 : 0;
  const int above = block_M1(eq, nu + rho) < 0.0 ? 1 : 0;
  return eq.sigma * (below - above);
}

/**
 * Resonance residuals of the planar pair: nu_+ = m nu_- happens exactly when
 * (4 - T) / sqrt(D) = m + 1/m.  Returns residuals for m = 1..m_max (m = 1 is
 * the double-root boundary).  Only meaningful for two-root minima (D > 0).
 */
inline std::vector<ResonanceFlag> planar_resonance_values(double T, double D,
                                                          int m_max = 50) {
  std::vector<ResonanceFlag> out;
  if (!(D > 0.0)) return out;
  const double ratio = (4.0 - T) / std::sqrt(D);
  for (int m = 1; m <= m_max; ++m)
    out.push_back({m, "nu_minus", std::abs(ratio - (m + 1.0 / m))});
  return out;
}

enum class PlanarSpectrumCase {
  SaddleSingle,      // D < 0: one candidate nu_+
  MinimumPair,       // D > 0, (2-T/2)^2 > D, T < 4: candidates nu_+ > nu_-
  NoRealRoots,       // (2-T/2)^2 < D: complex quartet, M0 never singular
  NonPositiveRoots,  // real roots but nu^2 <= 0 (T >= 4 side): no candidates
  DoubleRoot,        // (2-T/2)^2 = D: eta = 0, inconclusive
};

inline std::string to_string(PlanarSpectrumCase c) {
  switch (c) {
    case PlanarSpectrumCase::SaddleSingle: return "saddle: single frequency nu_+";
    case PlanarSpectrumCase::MinimumPair: return "minimum: frequency pair nu_-, nu_+";
    case PlanarSpectrumCase::NoRealRoots:
      return "no planar bifurcation: complex quartic roots";
    case PlanarSpectrumCase::NonPositiveRoots:
      return "no planar bifurcation: no positive quartic roots";
    default: return "double root: index jump 0, inconclusive";
  }
}

struct PlanarBifurcationResult {
  std::vector<BifurcationPoint> points;
  PlanarSpectrumCase spectrum_case = PlanarSpectrumCase::NoRealRoots;
  std::string reason;
};

/** Resonance detection threshold (relative to the frequency scale). */
inline constexpr double kResonanceTol = 1e-9;

/**
 * Planar bifurcation candidates with their index jumps and resonance flags.
 * Degenerate equilibria are rejected: sigma, and with it eta, is undefined.
 */
inline PlanarBifurcationResult planar_bifurcations(const Equilibrium& eq) {
  if (eq.kind == EquilibriumKind::Degenerate)
    throw ParameterError("planar_bifurcations: degenerate equilibrium (sigma = 0)");
  PlanarBifurcationResult res;
  const double T = eq.hessian.trace_planar;
  const double D = eq.hessian.det_planar;
  const double u = 2.0 - 0.5 * T;
  const double disc = u * u - D;

  const auto make_point = [&](double nu, int eta) {
    BifurcationPoint p;
    p.nu = nu;
    p.period = 2.0 * M_PI / nu;
    p.symmetry = SymmetryClass::PlanarZ2;
    p.eta = eta;
    return p;
  };

  if (std::abs(disc) < 1e-10 * (1.0 + u * u)) {
    res.spectrum_case = PlanarSpectrumCase::DoubleRoot;
    res.reason = to_string(res.spectrum_case);
    if (u > 0.0) res.points.push_back(make_point(std::sqrt(u), 0));
    return res;
  }
  if (disc < 0.0) {
    res.spectrum_case = PlanarSpectrumCase::NoRealRoots;
    res.reason = to_string(res.spectrum_case);
    return res;
  }

  const double root = std::sqrt(disc);
  const double zp = u + root, zm = u - root;
  if (eq.kind == EquilibriumKind::Saddle) {
    // D < 0 forces zp > 0 > zm: exactly one candidate, jump -1
    res.spectrum_case = PlanarSpectrumCase::SaddleSingle;
    res.points.push_back(make_point(std::sqrt(zp), -1));
  } else if (zm > 0.0) {
    res.spectrum_case = PlanarSpectrumCase::MinimumPair;
    auto plus = make_point(std::sqrt(zp), +1);
    auto minus = make_point(std::sqrt(zm), -1);
    // flag exact m:1 frequency ratios; they break the simple branch picture
    for (const auto& f : planar_resonance_values(T, D))
      if (f.residual < kResonanceTol) {
        plus.resonant_flags.push_back(f);
        minus.resonant_flags.push_back(f);
      }
    res.points.push_back(plus);
    res.points.push_back(minus);
  } else {
    res.spectrum_case = PlanarSpectrumCase::NonPositiveRoots;
  }
  res.reason = to_string(res.spectrum_case);
  return res;
}

/**
 * The normal-mode candidate (nu1, eta = sigma) with its symmetry class: the
 * branch consists of figure-eight loops, pi-periodic in the plane and
 * pi-antiperiodic in z.  Flags every l <= l_max with 2 l nu1 close to a
 * planar candidate (the mode-2l planar block is then near-singular).
 */
inline BifurcationPoint spatial_bifurcation(const Equilibrium& eq, int l_max = 16) {
  if (eq.kind == EquilibriumKind::Degenerate)
    throw ParameterError("spatial_bifurcation: degenerate equilibrium (sigma = 0)");
  const SpectralData s = spectral_data(eq);
  BifurcationPoint p;
  p.nu = s.nu1;
  p.period = 2.0 * M_PI / s.nu1;
  p.symmetry = SymmetryClass::EightZ2tilde;
  p.eta = eq.sigma;
  for (int l = 1; l <= l_max; ++l) {
    const double v = 2.0 * l * s.nu1;
    if (s.nu_plus && std::abs(v - *s.nu_plus) < kResonanceTol * (1.0 + *s.nu_plus))
      p.resonant_flags.push_back({l, "nu_plus", std::abs(v - *s.nu_plus)});
    if (s.nu_minus && std::abs(v - *s.nu_minus) < kResonanceTol * (1.0 + *s.nu_minus))
      p.resonant_flags.push_back({l, "nu_minus", std::abs(v - *s.nu_minus)});
  }
  return p;
}

/** All candidates of an equilibrium in report order: nu_+, nu_-, nu1. */
inline std::vector<BifurcationPoint> all_bifurcations(const Equilibrium& eq) {
  std::vector<BifurcationPoint> out = planar_bifurcations(eq).points;
  out.push_back(spatial_bifurcation(eq));
  return out;
}

// ---------------------------------------------------------------------------
// Closed forms for the two-primary (mass split mu, 1-mu) configuration.
// ---------------------------------------------------------------------------

/**
 * Triangular (equilateral) equilibrium: T = alpha + 1, D = 3(alpha+1)^2
 * mu(1-mu)/4, nu1 = 1.  The frequency pair exists below the Routh-type
 * threshold where (2 - T/2)^2 = D, i.e. mu(1-mu) = (3-alpha)^2/(3(alpha+1)^2).
 */
struct ThreeBodyClosedForms {
  std::optional<double> nu_plus;
  std::optional<double> nu_minus;
  double nu1 = 1.0;
  double routh_bound = 0.0;  // smaller root of the threshold equation
};

inline ThreeBodyClosedForms three_body_closed_forms(double mu, double alpha) {
  if (!(mu > 0.0 && mu < 1.0))
    throw ParameterError("mass ratio mu must lie in (0,1)");
  if (!(alpha > 1.0 && alpha < 3.0))
    throw ParameterError("alpha must lie in (1,3)");
  ThreeBodyClosedForms f;
  const double c = (3.0 - alpha) * (3.0 - alpha) / (3.0 * (alpha + 1.0) * (alpha + 1.0));
  f.routh_bound = 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * c));
  const double disc =
      (3.0 - alpha) * (3.0 - alpha) -
      3.0 * (alpha + 1.0) * (alpha + 1.0) * mu * (1.0 - mu);
  if (disc >= 0.0) {
    const double root = std::sqrt(disc);
    if (3.0 - alpha + root > 0.0) f.nu_plus = std::sqrt(0.5 * (3.0 - alpha + root));
    if (3.0 - alpha - root > 0.0) f.nu_minus = std::sqrt(0.5 * (3.0 - alpha - root));
  }
  return f;
}

/**
 * Collinear equilibria have planar Hessian diag(1 + alpha nu1^2, 1 - nu1^2)
 * with nu1^2 > 1; the single planar candidate is
 * nu_+^2 = 1 - (alpha-1) nu1^2/2 + sqrt((alpha+1)^2 nu1^4/4 - 2(alpha-1) nu1^2).
 */
inline double collinear_nu_plus_squared(double nu1_sq, double alpha) {
  return 1.0 - 0.5 * (alpha - 1.0) * nu1_sq +
         std::sqrt(0.25 * (alpha + 1.0) * (alpha + 1.0) * nu1_sq * nu1_sq -
                   2.0 * (alpha - 1.0) * nu1_sq);
}

// ---------------------------------------------------------------------------
// JSON spectral report.
// ---------------------------------------------------------------------------

inline nlohmann::json bifurcation_to_json(const BifurcationPoint& p) {
  nlohmann::json flags = nlohmann::json::array();
  for (const auto& f : p.resonant_flags)
    flags.push_back(
        {{"mode", f.mode}, {"target", f.target}, {"residual", f.residual}});
  return {{"nu", p.nu},
          {"period", p.period},
          {"symmetry", to_string(p.symmetry)},
          {"eta", p.eta},
          {"resonances", flags}};
}

/** Per-equilibrium report: position, kind, T, D, sigma and all candidates. */
inline nlohmann::json spectral_report(const std::vector<Equilibrium>& equilibria) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& eq : equilibria) {
    nlohmann::json rec = {
        {"position", {eq.position.x(), eq.position.y()}},
        {"kind", to_string(eq.kind)},
        {"T", eq.hessian.trace_planar},
        {"D", eq.hessian.det_planar},
        {"sigma", eq.sigma},
        {"nu1_squared", -eq.hessian.normal},
    };
    nlohmann::json bifs = nlohmann::json::array();
    if (eq.kind != EquilibriumKind::Degenerate)
      for (const auto& p : all_bifurcations(eq)) bifs.push_back(bifurcation_to_json(p));
    rec["bifurcations"] = bifs;
    out.push_back(rec);
  }
  return out;
}

}  // namespace satbif
