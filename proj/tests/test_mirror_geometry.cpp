#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "focalfluc/errors.hpp"
#include "focalfluc/mirror_geometry.hpp"

using namespace focalfluc;
constexpr double pi = std::numbers::pi;

TEST_CASE("mirror and observation point validation") {
  CHECK_THROWS_AS(MirrorGeometry::make(0.0), DomainError);
  CHECK_THROWS_AS(MirrorGeometry::make(2.1), DomainError);
  CHECK_THROWS_AS(MirrorGeometry::make(1.0, -1.0), DomainError);
  CHECK_NOTHROW(MirrorGeometry::make(2.09));
  CHECK_THROWS_AS(FocalPoint::make(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(FocalPoint::make(1.0, 3.2), DomainError);
  const auto g = MirrorGeometry::make(1.0, 10.0);
  CHECK(FocalPoint::make(0.5, 1.0).well_inside(g));
  CHECK_FALSE(FocalPoint::make(2.0, 1.0).well_inside(g));
}

TEST_CASE("incident map values") {
  CHECK(incident_map(0.5, 0.0) ==
        doctest::Approx(std::pow(std::sin(0.5), 3) / (1 - std::cos(0.5))).epsilon(1e-14));
  CHECK(incident_map(0.5, 0.0) == doctest::Approx(0.90016).epsilon(1e-5));
  CHECK(std::abs(incident_map(pi / 2, pi / 2)) < 1e-16);
  CHECK(incident_map(pi / 3, pi / 2) == doctest::Approx(-0.75).epsilon(1e-14));
  // regular through the origin, where the quotient form is 0/0
  CHECK(incident_map(0.0, 0.7) == doctest::Approx(-2 * std::sin(0.7)));
  CHECK(incident_map(1e-9, 0.7) == doctest::Approx(-2 * std::sin(0.7)).epsilon(1e-8));
}

TEST_CASE("incident map agrees with the quotient form away from the origin") {
  for (double t : {-2.0, -1.1, -0.3, 0.01, 0.4, 1.7}) {
    for (double g : {0.0, 0.5, 1.9, pi}) {
      const double s = std::sin(t);
      CHECK(incident_map(t, g) ==
            doctest::Approx(s * s * std::sin(t - g) / (1 - std::cos(t))).epsilon(1e-12));
    }
  }
}

TEST_CASE("reflection symmetry of the incident map") {
  for (double t = -2.0; t <= 2.0; t += 0.173) {
    for (double g : {0.0, 0.4, 1.2, 2.5}) {
      CHECK(incident_map(-t, pi - g) == doctest::Approx(incident_map(t, g)).epsilon(1e-14));
    }
    CHECK(incident_map(-t, pi / 2) == doctest::Approx(incident_map(t, pi / 2)).epsilon(1e-14));
  }
}

TEST_CASE("incident map derivatives") {
  CHECK(incident_map_derivative(pi / 3, pi / 2, 1) == doctest::Approx(std::sqrt(3.0)));
  CHECK_THROWS_AS(incident_map_derivative(0.1, 0.1, 0), DomainError);

  // derivative of the γ=π/2 form sinθ′(2cosθ′+1)
  const auto d1 = [](double t) { return std::sin(t) * (2 * std::cos(t) + 1); };
  CHECK(incident_map_derivative(0.0, pi / 2, 2) ==
        doctest::Approx((d1(1e-6) - d1(-1e-6)) / 2e-6).epsilon(1e-8));
  CHECK(incident_map_derivative(0.0, pi / 2, 2) == doctest::Approx(3.0));

  const double h = 1e-2;
  for (double g : {0.3, 1.1, 2.6}) {
    const double t = 0.7;
    auto f = [g](double x) { return incident_map(x, g); };
    auto f2 = [g](double x) { return incident_map_derivative(x, g, 2); };
    // sixth-order stencils
    const double fd1 = (f(t + 3 * h) - 9 * f(t + 2 * h) + 45 * f(t + h) - 45 * f(t - h) +
                        9 * f(t - 2 * h) - f(t - 3 * h)) / (60 * h);
    const double fd2 = (2 * f(t + 3 * h) - 27 * f(t + 2 * h) + 270 * f(t + h) - 490 * f(t) +
                        270 * f(t - h) - 27 * f(t - 2 * h) + 2 * f(t - 3 * h)) / (180 * h * h);
    const double fd3 = (f2(t + 3 * h) - 9 * f2(t + 2 * h) + 45 * f2(t + h) - 45 * f2(t - h) +
                        9 * f2(t - 2 * h) - f2(t - 3 * h)) / (60 * h);
    const double fd4 = (2 * f2(t + 3 * h) - 27 * f2(t + 2 * h) + 270 * f2(t + h) - 490 * f2(t) +
                        270 * f2(t - h) - 27 * f2(t - 2 * h) + 2 * f2(t - 3 * h)) / (180 * h * h);
    CHECK(incident_map_derivative(t, g, 1) == doctest::Approx(fd1).epsilon(1e-6));
    CHECK(incident_map_derivative(t, g, 2) == doctest::Approx(fd2).epsilon(1e-6));
    CHECK(incident_map_derivative(t, g, 3) == doctest::Approx(fd3).epsilon(1e-6));
    CHECK(incident_map_derivative(t, g, 4) == doctest::Approx(fd4).epsilon(1e-6));
  }
}

TEST_CASE("taylor coefficients of the incident map") {
  const auto s = incident_map_taylor(0.4, 1.3, 6);
  CHECK(s[0] == doctest::Approx(incident_map(0.4, 1.3)));
  CHECK(s.evaluate(0.05) == doctest::Approx(incident_map(0.45, 1.3)).epsilon(1e-9));
  CHECK(s[3] == doctest::Approx(incident_map_derivative(0.4, 1.3, 3) / 6));
}

TEST_CASE("path difference factor") {
  CHECK(path_difference_factor(0.3, 0.3, 1.1) == 0.0);
  CHECK(path_difference_factor(0.6, -0.6, pi / 2) == doctest::Approx(2 * std::sin(0.6)));
  CHECK(path_difference_factor(0.6, -0.6, pi / 2) == doctest::Approx(1.12928).epsilon(1e-5));
  CHECK(path_difference_factor(pi / 3, -pi / 3, pi / 2) == doctest::Approx(std::sqrt(3.0)));
  for (double g : {0.0, 0.7, 2.2}) {
    const double a = 0.9, b = -0.2;
    const double printed = std::abs(std::cos(g) * (std::cos(a) - std::cos(b)) +
                                    std::sin(g) * (std::sin(a) - std::sin(b)));
    CHECK(path_difference_factor(a, b, g) == doctest::Approx(printed).epsilon(1e-14));
  }
}

TEST_CASE("critical angles") {
  auto c = critical_angles(MirrorGeometry::make(1.0), pi / 2);
  REQUIRE(c.size() == 1);
  CHECK(std::abs(c[0]) < 1e-14);

  c = critical_angles(MirrorGeometry::make(1.8), 0.9);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == doctest::Approx((2 * 0.9 - pi) / 3).epsilon(1e-13));
  CHECK(c[1] == doctest::Approx((2 * 0.9 + pi) / 3).epsilon(1e-13));
  CHECK(c[0] == doctest::Approx(-0.44720).epsilon(1e-5));
  CHECK(c[1] == doctest::Approx(1.64720).epsilon(1e-5));

  CHECK(critical_angles(MirrorGeometry::make(0.5), 0.0).empty());

  // closed form on a grid of directions
  for (double g = 0.0; g <= pi; g += 0.1) {
    for (double t : critical_angles(MirrorGeometry::make(2.0), g)) {
      CHECK(std::abs(incident_map_derivative(t, g, 1)) < 1e-12);
      bool matched = false;
      for (double cand : critical_angle_candidates(g)) matched |= std::abs(cand - t) < 1e-12;
      CHECK(matched);
    }
  }
}

TEST_CASE("partner angle") {
  const auto g1 = MirrorGeometry::make(1.0);
  auto b = partner_angle(0.6, g1, pi / 2);
  REQUIRE(b.has_value());
  CHECK(*b == doctest::Approx(-0.6).epsilon(1e-12));

  CHECK_FALSE(partner_angle(0.0, g1, pi / 2).has_value());
  CHECK_THROWS_AS(partner_angle(1.5, g1, pi / 2), DomainError);

  // 40-digit reference
  b = partner_angle(0.2, g1, 1.2);
  REQUIRE(b.has_value());
  CHECK(*b == doctest::Approx(-0.70329697556247728).epsilon(1e-13));
  CHECK(std::abs(incident_map(*b, 1.2) - incident_map(0.2, 1.2)) < 1e-12);

  // α = 0.9, γ = 0.2: f(0.9) lies above everything the other branch reaches
  CHECK_FALSE(partner_angle(0.9, g1, 0.2).has_value());
  const double target = incident_map(0.9, 0.2);
  int hits = 0;
  for (int i = 0; i < 20000; ++i) {
    const double t0 = -1.0 + 2.0 * i / 20000, t1 = -1.0 + 2.0 * (i + 1) / 20000;
    if (std::abs(t0 - 0.9) < 1e-3 || std::abs(t1 - 0.9) < 1e-3) continue;
    if ((incident_map(t0, 0.2) - target) * (incident_map(t1, 0.2) - target) <= 0.0) ++hits;
  }
  CHECK(hits == 0);
}

TEST_CASE("partner angle is unique on a dense grid") {
  for (double th0 : {0.5, 1.2, 1.8, 2.05}) {
    const auto geom = MirrorGeometry::make(th0);
    for (double g : {0.05, 0.6, 1.3, pi / 2, 2.4}) {
      if (extremum_near_edge(geom, g)) continue;
      for (int i = 0; i <= 200; ++i) {
        const double a = -th0 + 2 * th0 * i / 200;
        std::optional<double> b;
        REQUIRE_NOTHROW(b = partner_angle(a, geom, g));
        if (!b) continue;
        CHECK(std::abs(incident_map(*b, g) - incident_map(a, g)) < 1e-11);
        // count level-set crossings other than α
        const double target = incident_map(a, g);
        int crossings = 0;
        const int n = 4000;
        for (int j = 0; j < n; ++j) {
          const double t0 = -th0 + 2 * th0 * j / n, t1 = -th0 + 2 * th0 * (j + 1) / n;
          if (std::abs(t0 - a) < 4 * th0 / n || std::abs(t1 - a) < 4 * th0 / n) continue;
          if ((incident_map(t0, g) - target) * (incident_map(t1, g) - target) < 0.0) ++crossings;
        }
        CHECK(crossings <= 1);
      }
    }
  }
}

TEST_CASE("partner derivative") {
  const auto g1 = MirrorGeometry::make(1.0);
  auto p = ray_pair(0.4, g1, pi / 2);
  REQUIRE(p.has_value());
  CHECK(p->dbeta_dalpha == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(p->h == doctest::Approx(2 * std::sin(0.4)));

  p = ray_pair(0.3, g1, 1.2);
  REQUIRE(p.has_value());
  const double h = 1e-5;
  const double fd =
      (*partner_angle(0.3 + h, g1, 1.2) - *partner_angle(0.3 - h, g1, 1.2)) / (2 * h);
  CHECK(p->dbeta_dalpha == doctest::Approx(fd).epsilon(1e-6));

  RayPair at_crit{0.1, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(partner_derivative(at_crit, pi / 2), SingularDerivativeError);
}

TEST_CASE("pair domain") {
  auto fams = pair_domain(MirrorGeometry::make(1.0), pi / 2);
  REQUIRE(fams.size() == 1);
  CHECK(fams[0].alpha_lo == -1.0);
  CHECK(fams[0].alpha_hi == 1.0);
  CHECK(fams[0].extremum_kind == ExtremumKind::minimum);
  CHECK_FALSE(fams[0].edge_singular);

  CHECK(pair_domain(MirrorGeometry::make(0.5), 0.0).empty());

  // two disjoint families; bounds cross-checked against a dense scan
  const auto geom = MirrorGeometry::make(1.8);
  fams = pair_domain(geom, 0.9);
  REQUIRE(fams.size() == 2);
  CHECK(fams[0].alpha_lo == doctest::Approx(-1.8));
  CHECK(fams[0].alpha_hi == doctest::Approx(0.711).epsilon(1e-3));
  CHECK(fams[1].alpha_lo == doctest::Approx(1.502).epsilon(1e-3));
  CHECK(fams[1].alpha_hi == doctest::Approx(1.8));
  CHECK(fams[0].alpha_hi < fams[1].alpha_lo);
  for (const auto& f : fams) {
    CHECK(f.critical_angle > f.alpha_lo);
    CHECK(f.critical_angle < f.alpha_hi);
    const double mid_in = 0.5 * (f.alpha_lo + f.critical_angle);
    CHECK(partner_angle(mid_in, geom, 0.9).has_value());
  }
  CHECK_FALSE(partner_angle(1.0, geom, 0.9).has_value());
  CHECK(partner_angle(0.70, geom, 0.9).has_value());
  CHECK_FALSE(partner_angle(0.72, geom, 0.9).has_value());

  // mirror image under γ → π − γ
  auto mirrored = pair_domain(geom, pi - 0.9);
  REQUIRE(mirrored.size() == 2);
  CHECK(mirrored[1].alpha_hi == doctest::Approx(-fams[0].alpha_lo).epsilon(1e-12));
  CHECK(mirrored[1].alpha_lo == doctest::Approx(-fams[0].alpha_hi).epsilon(1e-12));
  CHECK(mirrored[0].alpha_lo == doctest::Approx(-fams[1].alpha_hi).epsilon(1e-12));
}

TEST_CASE("edge-singular families are tagged") {
  // θ₀ = 1: critical angle (2γ − π)/3 reaches −1 at γ = (π − 3)/2
  const double gstar = (pi - 3.0) / 2;
  auto fams = pair_domain(MirrorGeometry::make(1.0), gstar + 1e-6);
  REQUIRE(fams.size() == 1);
  CHECK(fams[0].edge_singular);
  CHECK(extremum_near_edge(MirrorGeometry::make(1.0), gstar));
  CHECK_FALSE(extremum_near_edge(MirrorGeometry::make(1.0), gstar + 0.01));
}

TEST_CASE("partner series coefficients") {
  const auto s0 = partner_series(0.0, pi / 2, 6);
  CHECK(s0.size() == 5);
  CHECK(std::abs(s0[0]) < 1e-15);

  for (double g : {0.3, 1.0, 2.2}) {
    for (double tc : critical_angle_candidates(g)) {
      const double f2 = incident_map_derivative(tc, g, 2);
      const double f3 = incident_map_derivative(tc, g, 3);
      const double f4 = incident_map_derivative(tc, g, 4);
      const double f5 = incident_map_derivative(tc, g, 5);
      const auto a = partner_series(tc, g, 6);
      CHECK(a[0] == doctest::Approx(-f3 / (3 * f2)).epsilon(1e-10));
      CHECK(a[1] == doctest::Approx(-f3 * f3 / (9 * f2 * f2)).epsilon(1e-10));
      // symbolic substitution result
      const double a4 =
          -(9 * f2 * f2 * f5 - 30 * f2 * f3 * f4 + 40 * f3 * f3 * f3) / (540 * f2 * f2 * f2);
      CHECK(a[2] == doctest::Approx(a4).epsilon(1e-10));
      const double a5 = -f3 * (27 * f2 * f2 * f5 - 90 * f2 * f3 * f4 + 80 * f3 * f3 * f3) /
                        (1620 * f2 * f2 * f2 * f2);
      CHECK(a[3] == doctest::Approx(a5).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(partner_series(0.0, pi / 2, 1), DomainError);
}

TEST_CASE("partner series converges at sixth order") {
  const auto geom = MirrorGeometry::make(1.8);
  const double g = 1.2;
  const double tc = critical_angles(geom, g).at(0);
  const auto a = partner_series(tc, g, 6);
  auto err = [&](double x) {
    double beta = tc - x;
    for (std::size_t k = 0; k < a.size(); ++k) beta += a[k] * std::pow(x, k + 2);
    return std::abs(beta - *partner_angle(tc + x, geom, g));
  };
  for (double x : {0.2, 0.1, 0.05}) {
    const double ratio = err(x) / err(x / 2);
    CHECK(std::log2(ratio) >= 6.0);
  }
}

TEST_CASE("edge shift") {
  CHECK(edge_shift(MirrorGeometry::make(pi / 2), pi / 2 - 0.1) == doctest::Approx(0.2));
  CHECK(edge_shift(MirrorGeometry::make(1.3), pi / 2) == 0.0);
  CHECK(edge_shift(MirrorGeometry::make(1.0), pi / 2 - 0.1) == doctest::Approx(0.148053).epsilon(1e-5));
}
