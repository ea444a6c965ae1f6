#include "lpwave/errors.hpp"
#include "lpwave/quadrature.hpp"

#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace lpwave;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const auto& rule = gauss_legendre(16);
  CHECK(rule.apply([](double x) { return 1.0; }) == doctest::Approx(2.0).epsilon(1e-14));
  // degree 30 monomial
  CHECK(rule.apply([](double x) { return std::pow(x, 30); }) == doctest::Approx(2.0 / 31.0).epsilon(1e-13));
  CHECK(integrate_gl([](double x) { return x * x; }, 0.0, 3.0, 4) == doctest::Approx(9.0).epsilon(1e-13));
}

TEST_CASE("simpson and trapezoid") {
  const auto rule = simpson_rule(0.0, 1.0, 8);
  CHECK(rule.apply([](double x) { return x * x * x; }) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(simpson_rule(0.0, 1.0, 7), ValidationError);
  const auto w = simpson_weights(9, 0.125);
  CHECK(w.sum() == doctest::Approx(1.0).epsilon(1e-14));
  std::vector<double> v{0.0, 1.0, 2.0};
  CHECK(trapezoid(v, 0.5) == doctest::Approx(1.0));
}

TEST_CASE("graded rule resolves an endpoint singularity") {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [](double x) { return std::cos(x) / std::sqrt(x); };
  const double oracle = ts.integrate(f, 0.0, 1.0);
  CHECK(integrate_graded(f, 0.0, 1.0) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("half line integrals") {
  boost::math::quadrature::exp_sinh<double> es;
  auto f = [](double x) { return std::pow(1.0 + x, -2.5) * (1.0 + 0.3 / (1.0 + x)); };
  const double oracle = es.integrate(f);
  CHECK(integrate_half_line(f).value == doctest::Approx(oracle).epsilon(1e-7));
  CHECK(integrate_real_line([](double x) { return 1.0 / (1.0 + x * x); }) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-7));
  CHECK_THROWS_AS(integrate_half_line([](double x) { return 1.0 / (1.0 + x); }), DivergenceError);
}
