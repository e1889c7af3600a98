#include "support.hpp"

#include "impulse_geo/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace igt;

namespace {

std::vector<TangentVector> rays(const ChartPoint& at, int count) {
  std::vector<TangentVector> out;
  for (int k = 0; k < count; ++k) {
    const double a = 2.0 * std::numbers::pi * (k + 0.25) / count;
    out.push_back({at, vec({std::cos(a), std::sin(a)})});
  }
  return out;
}

std::vector<double> radii(double scale = 1.0) {
  std::vector<double> r;
  for (int k = 0; k <= 8; ++k) r.push_back(scale * std::ldexp(1.0, k));
  return r;
}

}  // namespace

TEST_SUITE("profiles") {
  TEST_CASE("metric gradients") {
    const auto lin = linear_profile(vec({1.0, 0.0}));
    for (const auto& x : {vec({0.0, 0.0}), vec({3.0, -2.0})}) {
      CHECK((metric_gradient(lin, euclidean(2), x) - vec({1.0, 0.0})).norm() == 0.0);
    }
    const auto x2 = linear_profile(vec({0.0, 1.0}));
    CHECK((metric_gradient(x2, hyperbolic_half_plane(), vec({0.0, 1.0})) - vec({0.0, 1.0})).norm() < 1e-15);
    CHECK((metric_gradient(x2, hyperbolic_half_plane(), vec({0.0, 2.0})) - vec({0.0, 4.0})).norm() < 1e-14);
    CHECK(metric_gradient(constant_profile(3.0), sphere_stereographic(), vec({0.2, 0.1})).norm() == 0.0);
  }

  TEST_CASE("analytic differentials agree with finite differences") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-1.5, 1.5);
    Matrix A(2, 2);
    A << 2.0, 0.3, 0.3, -1.0;
    const std::vector<WaveProfile> ps = {
        linear_profile(vec({0.5, -2.0}), 1.0), quadratic_form_profile(A, vec({0.1, 0.2})),
        radial_power_profile(2.5, vec({0.0, 0.0}), 1.5), gaussian_bump_profile(2.0, vec({0.3, 0.0}), 0.7)};
    for (const auto& p : ps) {
      REQUIRE(p.analytic_grad());
      const WaveProfile numeric("fd", [&p](const ChartPoint& x) { return p.value(x); });
      for (int t = 0; t < 25; ++t) {
        const ChartPoint x = vec({d(rng), d(rng)});
        CHECK((p.differential(x) - numeric.differential(x)).norm() < 1e-7 * (1.0 + p.differential(x).norm()));
      }
    }
  }

  TEST_CASE("profile values") {
    Matrix A(2, 2);
    A << 1.0, 0.0, 0.0, 2.0;
    CHECK(quadratic_form_profile(A, vec({1.0, 0.0})).value(vec({2.0, 1.0})) == doctest::Approx(3.0));
    CHECK(radial_power_profile(3.0, vec({0.0, 0.0})).value(vec({3.0, 4.0})) == doctest::Approx(125.0));
    CHECK(gaussian_bump_profile(2.0, vec({0.0, 0.0}), 1.0).value(vec({1.0, 0.0})) ==
          doctest::Approx(2.0 * std::exp(-0.5)));
    CHECK(zero_profile().is_zero());
    CHECK_FALSE(constant_profile(0.0).is_zero());
  }

  TEST_CASE("growth exponents on flat space") {
    const ChartPoint o = vec({0.0, 0.0});
    const auto m = euclidean(2);
    const auto sub = classify_growth(radial_power_profile(1.5, o), m, o, rays(o, 6), radii());
    CHECK(sub.exponent == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(sub.classification == GrowthClass::subquadratic);
    const auto quad = classify_growth(radial_power_profile(2.0, o), m, o, rays(o, 6), radii());
    CHECK(quad.exponent == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(quad.classification == GrowthClass::at_most_quadratic);
    const auto cube = classify_growth(radial_power_profile(3.0, o), m, o, rays(o, 6), radii());
    CHECK(cube.exponent == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(cube.classification == GrowthClass::superquadratic);
    const auto flat = classify_growth(constant_profile(4.0), m, o, rays(o, 6), radii());
    CHECK(std::abs(flat.exponent) < 1e-9);
    CHECK(flat.classification == GrowthClass::subquadratic);
  }

  TEST_CASE("growth fit bounds every sample") {
    const ChartPoint o = vec({0.0, 0.0});
    Matrix A(2, 2);
    A << 1.0, 0.0, 0.0, 3.0;
    const auto f = quadratic_form_profile(A, o);
    const auto rep = classify_growth(f, euclidean(2), o, rays(o, 8), radii());
    for (const auto& ray : rays(o, 8)) {
      const Vector w = ray.comps.normalized();
      for (double r : radii()) CHECK(f.value(r * w) <= rep.R1 * std::pow(r, rep.exponent) + rep.R2 + 1e-9);
    }
  }

  TEST_CASE("growth exponent ignores amplitude and the choice of large radii") {
    const ChartPoint o = vec({0.0, 0.0});
    const auto f = gaussian_bump_profile(1.0, vec({0.5, 0.0}), 3.0);
    const WaveProfile g("bumpy", [&](const ChartPoint& x) { return x.squaredNorm() + 5.0 * f.value(x); });
    const WaveProfile g7("bumpy7", [&](const ChartPoint& x) { return 7.0 * g.value(x); });
    const auto a = classify_growth(g, euclidean(2), o, rays(o, 5), radii(1.0));
    const auto b = classify_growth(g, euclidean(2), o, rays(o, 5), radii(1.7));
    const auto c = classify_growth(g7, euclidean(2), o, rays(o, 5), radii(1.0));
    CHECK(std::abs(a.exponent - c.exponent) < 1e-12);
    CHECK(c.R1 == doctest::Approx(7.0 * a.R1).epsilon(1e-12));
    CHECK(std::abs(a.exponent - b.exponent) < 1e-6);
  }

  TEST_CASE("hyperbolic growth uses geodesic distance") {
    // f = x2 along the vertical geodesic grows like exp(d): superquadratic
    const ChartPoint o = vec({0.0, 1.0});
    const std::vector<TangentVector> up = {{o, vec({0.0, 1.0})}};
    const auto rep = classify_growth(linear_profile(vec({0.0, 1.0})), hyperbolic_half_plane(), o, up, radii(1.0 / 16.0));
    CHECK(rep.classification == GrowthClass::superquadratic);
  }

  TEST_CASE("degenerate directions are dropped and reported") {
    const ChartPoint o = vec({0.0, 0.0});
    std::vector<TangentVector> dirs = rays(o, 3);
    dirs.push_back({o, vec({0.0, 0.0})});
    const auto rep = classify_growth(radial_power_profile(2.0, o), euclidean(2), o, dirs, radii());
    REQUIRE(rep.dropped_directions.size() == 1);
    CHECK(rep.dropped_directions[0] == 3);
    const std::vector<TangentVector> none = {{o, vec({0.0, 0.0})}};
    CHECK_THROWS(classify_growth(radial_power_profile(2.0, o), euclidean(2), o, none, radii()));
  }
}
