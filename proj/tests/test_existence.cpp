#include "support.hpp"

#include "impulse_geo/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace igt;

TEST_SUITE("existence") {
  TEST_CASE("alpha bound examples") {
    const auto a = alpha_bound<double>(1.0, 1.0, 1.0, 0.0, 0.5, 1.0);
    CHECK(a.alpha == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(a.eps0 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(alpha_bound<double>(2.0, 1.0, 1.0, 0.0, 0.0, 1.0).alpha == 0.5);
    CHECK(alpha_bound<double>(0.0, 100.0, 1.0, 4.0, 0.0, 1.0).alpha == 0.25);
    CHECK(alpha_bound<double>(0.0, 1.0, 1.0, 0.0, 0.0, 1.0).alpha == 1.0);
    CHECK(alpha_bound<float>(1.0f, 1.0f, 1.0f, 0.0f, 0.5f, 1.0f).alpha == doctest::Approx(2.0 / 3.0));
    CHECK(alpha_bound<long double>(1.0L, 1.0L, 1.0L, 0.0L, 0.5L, 1.0L).eps0 ==
          doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(alpha_bound<double>(1.0, 0.0, 1.0, 0.0, 0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(alpha_bound<double>(1.0, 1.0, 1.0, -1.0, 0.0, 1.0), ValidationError);
  }

  TEST_CASE("alpha bound is monotone in every argument") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(0.01, 5.0);
    std::uniform_real_distribution<double> grow(1.0, 3.0);
    for (int t = 0; t < 500; ++t) {
      double in[6] = {d(rng), d(rng), d(rng), d(rng), d(rng), d(rng)};
      const double base = alpha_bound<double>(in[0], in[1], in[2], in[3], in[4], in[5]).alpha;
      for (int k = 0; k < 6; ++k) {
        double bumped[6];
        std::copy(in, in + 6, bumped);
        bumped[k] *= grow(rng);
        const double a = alpha_bound<double>(bumped[0], bumped[1], bumped[2], bumped[3], bumped[4], bumped[5]).alpha;
        // b and c are arguments 1 and 2
        if (k == 1 || k == 2) {
          CHECK(a >= base);
        } else {
          CHECK(a <= base);
        }
      }
    }
  }

  TEST_CASE("Weissinger coefficients") {
    CHECK(weissinger_coefficient<double>(2, 1.0, 1.0, 0.0, 1.0) == doctest::Approx(2.0));
    CHECK(weissinger_coefficient<double>(3, 2.0 / 3.0, 3.0, 0.0, 1.0) ==
          doctest::Approx(4.0 * 3.0 * std::pow(2.0 / 3.0, 4) / 24.0).epsilon(1e-14));
    CHECK(weissinger_coefficient<double>(3, 2.0 / 3.0, 3.0, 0.0, 1.0) == doctest::Approx(0.0988).epsilon(1e-3));
    // K multiplies Lip F2 only
    CHECK(weissinger_coefficient<double>(2, 1.0, 0.0, 1.0, 1.5) == doctest::Approx(3.0));
    for (int n = 2; n < 30; ++n) CHECK(weissinger_coefficient<double>(n, 2.0 / 3.0, 0.0, 0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(weissinger_coefficient<double>(1, 1.0, 1.0, 1.0, 1.0), ValidationError);
  }

  TEST_CASE("Weissinger series is summable") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> a(0.0, 1.0);
    std::uniform_real_distribution<double> lip(0.0, 1e3);
    std::uniform_real_distribution<double> K(0.5, 2.0);
    for (int t = 0; t < 200; ++t) {
      const auto s = weissinger_series(a(rng), lip(rng), lip(rng), K(rng));
      CHECK(s.stabilized_at >= 2);
      CHECK(s.stabilized_at < 40);
      CHECK(std::isfinite(s.total()));
    }
  }

  TEST_CASE("sup norms for a linear profile on flat space are exact") {
    const auto n = estimate_sup_norms(euclidean(2), linear_profile(vec({1.0, 0.0})), vec({0.0, 0.0}),
                                      vec({1.0, 0.0}), 1.0, 1.0, 1.0);
    CHECK(n.norm_F1 == 0.0);
    CHECK(n.norm_F2 == 0.5);
    CHECK(n.lip_F1 == 0.0);
    CHECK(n.lip_F2 == doctest::Approx(0.0).scale(1e-6));
    CHECK(n.i2_radius == 1.5);
    CHECK(n.grid >= 9);
  }

  TEST_CASE("sup of F2 for a quadratic profile within the safety factor") {
    Matrix A(2, 2);
    A << 1.0, 0.0, 0.0, 0.0;
    const auto n = estimate_sup_norms(euclidean(2), quadratic_form_profile(A, vec({0.0, 0.0})),
                                      vec({1.0, 0.0}), vec({1.0, 0.0}), 1.0, 1.0, 1.0);
    CHECK(n.norm_F2 >= 2.0 - 1e-12);
    CHECK(n.norm_F2 <= 2.0 * 1.1 + 1e-12);
    CHECK(n.lip_F2 == doctest::Approx(1.0).epsilon(1e-5));
  }

  TEST_CASE("hyperbolic F1 sup against a brute-force oracle") {
    const ChartPoint x0 = vec({0.0, 1.0});
    const Vector z0 = vec({0.0, 1.0});
    const auto n = estimate_sup_norms(hyperbolic_half_plane(), zero_profile(), x0, z0, 0.5, 1.0, 1.0);
    CHECK(n.norm_F2 == 0.0);
    CHECK(n.i2_radius == 1.0);
    // F1 = (2 z1 z2, z2^2 - z1^2) / y
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    double oracle = 0.0;
    for (int t = 0; t < 200000; ++t) {
      Vector dy = vec({d(rng), d(rng)}), dz = vec({d(rng), d(rng)});
      if (dy.norm() > 1.0 || dz.norm() > 1.0) continue;
      const Vector y = x0 + 0.5 * dy, z = z0 + dz;
      oracle = std::max(oracle, vec({2.0 * z[0] * z[1], z[1] * z[1] - z[0] * z[0]}).norm() / y[1]);
    }
    CHECK(n.norm_F1 >= oracle * (1.0 - 1e-3));
    CHECK(n.norm_F1 <= oracle * 1.25);
  }

  TEST_CASE("a ball that leaves the chart is a domain error") {
    CHECK_THROWS_AS(estimate_sup_norms(hyperbolic_half_plane(), zero_profile(), vec({0.0, 1.0}), vec({1.0, 0.0}), 1.5,
                                       1.0, 1.0),
                    DomainError);
    CertificateOptions o;
    o.b = 1.5;
    CHECK_THROWS_AS(certify(hyperbolic_half_plane(), zero_profile(), mollifier_net(), vec({0.0, 1.0}), vec({1.0, 0.0}), o),
                    DomainError);
    o.shrink_b_to_chart = true;
    const auto c = certify(hyperbolic_half_plane(), zero_profile(), mollifier_net(), vec({0.0, 1.0}), vec({1.0, 0.0}), o);
    CHECK(c.b == 0.75);
  }

  TEST_CASE("flat linear certificate") {
    const auto c = certify(euclidean(2), linear_profile(vec({1.0, 0.0})), mollifier_net(), vec({0.0, 0.0}),
                           vec({1.0, 0.0}));
    CHECK(c.alpha == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(c.eps0 == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(c.K == 1.0);
    CHECK(c.in_I1(vec({0.9, 0.0})));
    CHECK_FALSE(c.in_I1(vec({1.1, 0.0})));
    CHECK(c.in_I2(vec({2.4, 0.0})));
    CHECK_FALSE(c.in_I2(vec({2.6, 0.0})));
  }

  TEST_CASE("Picard leaves a straight line alone when f vanishes") {
    const auto r = picard_solve(euclidean(2), zero_profile(), mollifier_net(), 0.1, vec({0.5, 0.0}), vec({1.0, 2.0}), 0.5);
    CHECK(r.corrective_iterations <= 1);
    for (std::size_t i = 0; i < r.t.size(); i += 97) {
      CHECK((r.x[i] - (vec({0.5, 0.0}) + (r.t[i] + 0.1) * vec({1.0, 2.0}))).norm() < 1e-13);
    }
  }

  TEST_CASE("Picard reproduces the linear-profile closed form in one correction") {
    const double eps = 0.1;
    const auto net = mollifier_net();
    const auto cert = certify(euclidean(2), linear_profile(vec({1.0, 0.0})), net, vec({1.0 - eps, 0.0}), vec({1.0, 0.0}));
    PicardOptions o;
    o.certificate = cert;
    const auto r = picard_solve(euclidean(2), linear_profile(vec({1.0, 0.0})), net, eps, vec({1.0 - eps, 0.0}),
                                vec({1.0, 0.0}), cert.alpha, o);
    CHECK(r.corrective_iterations == 1);
    CHECK(r.weissinger_bound == 1);
    double err = 0.0;
    for (std::size_t i = 0; i < r.t.size(); i += 7) {
      err = std::max(err, std::abs(r.x[i][0] - linear_x1(net, eps, r.t[i])));
      err = std::max(err, std::abs(r.xdot[i][0] - linear_xdot1(net, eps, r.t[i])));
    }
    CHECK(err < 1e-9);
  }

  TEST_CASE("Picard agrees with the RK integrator on a hyperbolic bump") {
    const auto m = hyperbolic_half_plane();
    const auto f = gaussian_bump_profile(1.0, vec({0.0, 1.2}), 0.5);
    const auto net = mollifier_net();
    const double eps = 1e-2;
    const ChartPoint x = vec({-0.1, 1.0});
    const Vector xd = vec({0.5, 0.1});
    CertificateOptions co;
    co.shrink_b_to_chart = true;
    const auto cert = certify(m, f, net, x, xd, co);
    REQUIRE(eps <= cert.eps0);
    ImpulsiveOptions io;
    io.u_start = -eps;
    const auto rk = integrate_impulsive_geodesic(m, f, net, eps, {x, xd, 0.0, 0.0}, cert.alpha - eps, io);
    PicardOptions po;
    po.certificate = cert;
    const auto pic = picard_solve(m, f, net, eps, x, xd, cert.alpha, po);
    double diff = 0.0;
    for (std::size_t i = 0; i < pic.t.size(); ++i) {
      const auto s = rk.state_at(pic.t[i]);
      diff = std::max({diff, (s.x - pic.x[i]).lpNorm<Eigen::Infinity>(), (s.xdot - pic.xdot[i]).lpNorm<Eigen::Infinity>()});
    }
    CHECK(diff <= 1e-6);
    CHECK(pic.weissinger_bound >= 1);
  }

  TEST_CASE("Picard failure modes") {
    const auto m = euclidean(2);
    const auto f = gaussian_bump_profile(1.0, vec({0.0, 0.0}), 0.5);
    const auto net = mollifier_net();
    CHECK_THROWS_AS(picard_solve(m, f, net, 0.3, vec({0.0, 0.0}), vec({1.0, 0.0}), 0.5), ValidationError);
    PicardOptions few;
    few.max_iter = 1;
    CHECK_THROWS_AS(picard_solve(m, f, net, 0.1, vec({0.0, 0.0}), vec({1.0, 0.0}), 0.5, few), NumericalError);
    CertificateOptions tiny;
    tiny.b = 1e-3;
    PicardOptions boxed;
    boxed.certificate = certify(m, f, net, vec({0.0, 0.0}), vec({1.0, 0.0}), tiny);
    CHECK_THROWS_AS(picard_solve(m, f, net, 0.1, vec({0.0, 0.0}), vec({1.0, 0.0}), 0.5, boxed), CertificateViolation);
    PicardOptions coarse;
    coarse.grid_intervals = 100;
    CHECK_THROWS_AS(picard_solve(m, f, net, 0.1, vec({0.0, 0.0}), vec({1.0, 0.0}), 0.5, coarse), ValidationError);
  }

  TEST_CASE("certified strip crossings stay in the box") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> d(-0.2, 0.2);
    for (const auto& s : builtin_scenarios()) {
      for (int t = 0; t < 5; ++t) {
        const ChartPoint x = s.data.x0 + vec({0.5, 0.0}) + vec({d(rng), d(rng)});
        const Vector xd = s.data.xdot0 + vec({d(rng), d(rng)});
        CertificateOptions co;
        co.shrink_b_to_chart = true;
        const auto cert = certify(s.model, s.profile, s.net, x, xd, co);
        const double eps = cert.eps0;
        ImpulsiveOptions io;
        io.u_start = -eps;
        const auto p = integrate_impulsive_geodesic(s.model, s.profile, s.net, eps, {x, xd, 0.0, 0.0}, cert.alpha - eps, io);
        bool inside = true;
        for (int i = 0; i <= 200; ++i) {
          const auto st = p.state_at(-eps + cert.alpha * i / 200.0);
          inside = inside && cert.in_I1(st.x) && cert.in_I2(st.xdot);
        }
        CHECK_MESSAGE(inside, s.label);
      }
    }
  }
}
