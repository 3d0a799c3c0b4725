#include "satbif/potential.hpp"

#include <cmath>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"

using namespace satbif;
using Catch::Approx;

namespace {

Eigen::Vector2d l4_position(double mu) {
  return {0.5 * (1.0 - 2.0 * mu), std::sqrt(3.0) / 2.0};
}

/** Random planar point at a safe distance from all primaries. */
Eigen::Vector2d safe_planar_point(const PrimaryConfiguration& config) {
  for (int tries = 0; tries < 200; ++tries) {
    Eigen::Vector2d x(oracles::uniform(-2.5, 2.5), oracles::uniform(-2.5, 2.5));
    if (min_primary_distance(config, x) > 0.2) return x;
  }
  throw std::runtime_error("no safe sample point found");
}

}  // namespace

TEST_CASE("kernel values and derivatives") {
  CHECK(phi_alpha(1.0, 2.0) == Approx(1.0));
  CHECK(phi_alpha(4.0, 1.5) == Approx(1.0));
  CHECK(phi_alpha_d1(2.0, 2.0) == Approx(-0.25));

  for (double d : {0.3, 1.0, 2.7}) {
    for (double alpha : {1.2, 2.0, 2.8}) {
      const auto f = [&](double t) { return phi_alpha(t, alpha); };
      CHECK(phi_alpha_d1(d, alpha) ==
            Approx(oracles::fd_derivative(f, d)).epsilon(1e-7));
      CHECK(phi_alpha_d2(d, alpha) ==
            Approx(oracles::fd_second_derivative(f, d)).epsilon(1e-5));
    }
  }

  CHECK_THROWS_AS(phi_alpha(1.0, 3.5), ParameterError);
  CHECK_THROWS_AS(phi_alpha(0.0, 2.0), CollisionError);
  CHECK_THROWS_AS(phi_alpha(1e-13, 2.0), CollisionError);
}

TEST_CASE("potential values at hand-computed points") {
  SECTION("three-body at the equilateral point") {
    const auto config = three_body_config(0.5, 2.0);
    // distances to both primaries are exactly 1, so V = (3/4)/2 + 1 = 1.375
    CHECK(potential_value(config, Eigen::Vector3d(0.0, std::sqrt(3.0) / 2.0, 0.0)) ==
          Approx(1.375).margin(1e-13));
  }
  SECTION("bare ring at its center") {
    const auto config = maxwell_ring_config(3, 0.0, 2.0).first;
    // V(0) = 3 * sqrt(3) * phi_2(1) = 3 sqrt(3)
    CHECK(potential_value(config, Eigen::Vector2d(0.0, 0.0)) ==
          Approx(3.0 * std::sqrt(3.0)).margin(1e-12));
  }
  SECTION("far field is dominated by the centrifugal term") {
    const auto config = maxwell_ring_config(5, 2.0, 2.0).first;
    const Eigen::Vector3d x(1000.0, 0.0, 0.0);
    CHECK(potential_value(config, x) == Approx(5e5).epsilon(0.01));
  }
}

TEST_CASE("gradient vanishes at known equilibria") {
  for (double mu : {0.01, 0.3, 0.5}) {
    const auto config = three_body_config(mu, 2.0);
    CHECK(potential_gradient(config, l4_position(mu)).norm() < 1e-13);
  }
  const auto ring = maxwell_ring_config(4, 0.0, 2.0).first;
  CHECK(potential_gradient(ring, Eigen::Vector2d(0.0, 0.0)).norm() < 1e-13);
}

TEST_CASE("gradient agrees with finite differences of the value") {
  for (const auto& config :
       {three_body_config(0.3, 2.4), maxwell_ring_config(7, 10.0, 1.7).first}) {
    for (int k = 0; k < 6; ++k) {
      const Eigen::Vector2d x = safe_planar_point(config);
      const auto f2 = [&](const Eigen::Vector2d& y) {
        return potential_value(config, y);
      };
      CHECK((potential_gradient(config, x) -
             oracles::fd_gradient<2>(f2, x))
                .norm() < 1e-6);

      const Eigen::Vector3d x3(x.x(), x.y(), oracles::uniform(-1.0, 1.0));
      const auto f3 = [&](const Eigen::Vector3d& y) {
        return potential_value(config, y);
      };
      CHECK((potential_gradient(config, x3) - oracles::fd_gradient<3>(f3, x3))
                .norm() < 1e-6);
    }
  }
}

TEST_CASE("gradient normal component vanishes identically on the plane") {
  const auto config = maxwell_ring_config(5, 1.0, 2.3).first;
  for (int k = 0; k < 10; ++k) {
    const Eigen::Vector2d x = safe_planar_point(config);
    CHECK(potential_gradient(config, Eigen::Vector3d(x.x(), x.y(), 0.0)).z() == 0.0);
  }
}

TEST_CASE("hessian blocks at the equilateral point") {
  for (double mu : {0.1, 0.5}) {
    const auto config = three_body_config(mu, 2.0);
    const auto h = potential_hessian(config, l4_position(mu));
    // closed forms: T = alpha + 1, D = 3 (alpha+1)^2 mu (1-mu) / 4
    CHECK(h.trace_planar == Approx(3.0).margin(1e-12));
    CHECK(h.det_planar ==
          Approx(27.0 * mu * (1.0 - mu) / 4.0).margin(1e-12));
    CHECK(h.normal == Approx(-1.0).margin(1e-13));
  }
}

TEST_CASE("hessian on the axis is diagonal with the collinear closed form") {
  const auto config = three_body_config(0.5, 2.0);
  for (double x : {1.3, 2.0, -0.9}) {
    const Eigen::Vector2d p(x, 0.0);
    const auto h = potential_hessian(config, p);
    const double n1 = nu1_squared(config, p);
    CHECK(h.planar(0, 1) == Approx(0.0).margin(1e-15));
    CHECK(h.planar(0, 0) == Approx(1.0 + 2.0 * n1).margin(1e-12));
    CHECK(h.planar(1, 1) == Approx(1.0 - n1).margin(1e-12));
  }
}

TEST_CASE("hessian agrees with finite differences and respects its blocks") {
  for (const auto& config :
       {three_body_config(0.45, 2.0), maxwell_ring_config(7, 10.0, 2.0).first}) {
    for (int k = 0; k < 5; ++k) {
      const Eigen::Vector2d x = safe_planar_point(config);
      const auto h = potential_hessian(config, x);

      // symmetry and the trace identity T = 2 + (alpha-1) nu1^2
      CHECK(std::abs(h.planar(0, 1) - h.planar(1, 0)) < 1e-14);
      CHECK(h.trace_planar ==
            Approx(2.0 + (config.alpha - 1.0) * nu1_squared(config, x))
                .epsilon(1e-10));
      CHECK(h.trace_planar > 2.0);
      CHECK(h.normal == Approx(-nu1_squared(config, x)).epsilon(1e-14));

      const auto f2 = [&](const Eigen::Vector2d& y) {
        return potential_value(config, y);
      };
      CHECK((h.planar - oracles::fd_hessian<2>(f2, x)).norm() < 2e-5);

      // the full spatial matrix reproduces the planar/normal split exactly
      const auto m = potential_hessian_matrix(config, Eigen::Vector3d(x.x(), x.y(), 0.0));
      CHECK((m.topLeftCorner<2, 2>() - h.planar).norm() < 1e-14);
      CHECK(m(2, 2) == Approx(h.normal).margin(1e-14));
      CHECK(std::abs(m(0, 2)) + std::abs(m(1, 2)) < 1e-15);
    }
  }
}

TEST_CASE("spatial hessian off the plane agrees with finite differences") {
  const auto config = maxwell_ring_config(3, 0.5, 2.0).first;
  for (int k = 0; k < 5; ++k) {
    const Eigen::Vector2d xy = safe_planar_point(config);
    const Eigen::Vector3d x(xy.x(), xy.y(), oracles::uniform(0.2, 1.0));
    const auto f3 = [&](const Eigen::Vector3d& y) {
      return potential_value(config, y);
    };
    const Eigen::Matrix3d m = potential_hessian_matrix(config, x);
    CHECK((m - m.transpose()).norm() < 1e-14);
    CHECK((m - oracles::fd_hessian<3>(f3, x)).norm() < 2e-5);
  }
}

TEST_CASE("hessian is equivariant under the ring rotation") {
  const auto config = maxwell_ring_config(5, 2.0, 2.0).first;
  const double t = 2.0 * M_PI / 5.0;
  Eigen::Matrix2d rot;
  rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  for (int k = 0; k < 5; ++k) {
    const Eigen::Vector2d x = safe_planar_point(config);
    const auto h = potential_hessian(config, x);
    const auto hr = potential_hessian(config, Eigen::Vector2d(rot * x));
    CHECK((hr.planar - rot * h.planar * rot.transpose()).norm() < 1e-12);
    CHECK(hr.normal == Approx(h.normal).epsilon(1e-12));
    CHECK(potential_value(config, Eigen::Vector2d(rot * x)) ==
          Approx(potential_value(config, x)).epsilon(1e-13));
  }
}

TEST_CASE("nu1 squared closed values") {
  // distance 1 to both primaries at the equilateral point: nu1^2 = total mass = 1
  CHECK(nu1_squared(three_body_config(0.3, 2.4), l4_position(0.3)) ==
        Approx(1.0).margin(1e-13));
  // bare triangle center: nu1^2 = n / s = 3 sqrt(3)
  CHECK(nu1_squared(maxwell_ring_config(3, 0.0, 2.0).first,
                    Eigen::Vector2d(0.0, 0.0)) ==
        Approx(3.0 * std::sqrt(3.0)).margin(1e-12));
}

TEST_CASE("planar-only guard and collision guard") {
  const auto config = three_body_config(0.5, 2.0);
  CHECK_THROWS_AS(potential_hessian(config, Eigen::Vector3d(0.0, 1.0, 0.5)),
                  ParameterError);
  CHECK_THROWS_AS(potential_gradient(config, Eigen::Vector2d(0.5, 1e-14)),
                  CollisionError);
}
