#include "support.hpp"

#include "impulse_geo/errors.hpp"
#include "impulse_geo/ode.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace igt;

TEST_SUITE("numerics") {
  TEST_CASE("dopri5 integrates the harmonic oscillator") {
    const OdeRhs rhs = [](double, const Vector& y) { return vec({y[1], -y[0]}); };
    StepControl ctl;
    ctl.rtol = ctl.atol = 1e-12;
    const auto traj = integrate_dopri5(rhs, 0.0, vec({1.0, 0.0}), 2.0 * std::numbers::pi, ctl);
    CHECK(traj.u_end() == 2.0 * std::numbers::pi);
    CHECK(std::abs(traj.back().y[0] - 1.0) < 1e-10);
    CHECK(std::abs(traj.back().y[1]) < 1e-10);
  }

  TEST_CASE("dense output follows the exact solution between steps") {
    const OdeRhs rhs = [](double, const Vector& y) { return vec({y[1], -y[0]}); };
    StepControl ctl;
    ctl.h_max = 1e-2;
    const auto traj = integrate_dopri5(rhs, 0.0, vec({0.0, 1.0}), 3.0, ctl);
    double err = 0.0, derr = 0.0;
    for (int i = 0; i <= 997; ++i) {
      const double u = 3.0 * i / 997.0;
      err = std::max(err, std::abs(traj.at(u)[0] - std::sin(u)));
      derr = std::max(derr, std::abs(traj.derivative_at(u)[0] - std::cos(u)));
    }
    CHECK(err < 1e-9);
    CHECK(derr < 1e-6);
  }

  TEST_CASE("integration runs backwards when u1 < u0") {
    const OdeRhs rhs = [](double, const Vector& y) { return y; };
    const auto traj = integrate_dopri5(rhs, 1.0, vec({std::exp(1.0)}), 0.0, StepControl{});
    CHECK(std::abs(traj.at(0.0)[0] - 1.0) < 1e-9);
  }

  TEST_CASE("observer rejection carries the last accepted state") {
    const OdeRhs rhs = [](double, const Vector&) { return vec({1.0}); };
    const StepObserver stop = [](double, const Vector& y) -> std::optional<std::string> {
      if (y[0] > 0.5) return "too far";
      return std::nullopt;
    };
    StepControl ctl;
    ctl.h_max = 0.1;
    try {
      integrate_dopri5(rhs, 0.0, vec({0.0}), 1.0, ctl, stop);
      FAIL("expected IntegrationFailure");
    } catch (const IntegrationFailure& e) {
      CHECK(e.state()[0] <= 0.5 + 1e-12);
      CHECK(e.u() <= 0.5 + 1e-12);
    }
  }

  TEST_CASE("finite-time blow-up ends in step underflow") {
    const OdeRhs rhs = [](double, const Vector& y) { return vec({y[0] * y[0]}); };
    CHECK_THROWS_AS(integrate_dopri5(rhs, 0.0, vec({1.0}), 2.0, StepControl{}), IntegrationFailure);
  }

  TEST_CASE("adaptive quadrature is exact on polynomials and scale free") {
    const auto q = integrate_adaptive([](double x) { return x * x * x - 2.0 * x; }, 0.0, 2.0);
    CHECK(q.converged);
    CHECK(std::abs(q.value) < 1e-13);
    const double w = 1e-6;
    const auto narrow =
        integrate_adaptive([w](double x) { return std::exp(-x * x / (w * w)) / w; }, -10 * w, 10 * w);
    CHECK(narrow.converged);
    CHECK(std::abs(narrow.value - std::sqrt(std::numbers::pi)) < 1e-12);
  }

  TEST_CASE("cumulative Simpson is exact for quadratic integrands at every node") {
    const int m = 41;
    const double h = 0.05;
    Matrix s(1, m);
    for (int i = 0; i < m; ++i) {
      const double t = i * h;
      s(0, i) = 3.0 * t * t - 1.0;
    }
    const Matrix c = cumulative_simpson(s, h);
    for (int i = 0; i < m; ++i) {
      const double t = i * h;
      CHECK(c(0, i) == doctest::Approx(t * t * t - t).epsilon(1e-12));
    }
  }
}
