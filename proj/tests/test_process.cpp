#include "lpwave/errors.hpp"
#include "lpwave/process.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace lpwave;
using boost::math::quadrature::gauss_kronrod;
constexpr double pi = std::numbers::pi;

namespace {

double gk(const std::function<double(double)>& f, double a, double b) {
  double s = 0.0;
  const int panels = 64;
  for (int i = 0; i < panels; ++i)
    s += gauss_kronrod<double, 61>::integrate(f, a + (b - a) * i / panels, a + (b - a) * (i + 1) / panels, 10, 1e-13);
  return s;
}

ProcessModel constant_one() {
  ProcessModel::Parts parts;
  parts.covariance = [](double, double) { return 1.0; };
  parts.stationary = true;
  return ProcessModel::custom(parts);
}

}  // namespace

TEST_CASE("ou model") {
  const auto m = make_ou(1.0);
  CHECK(m.covariance(0, 0) == 1.0);
  CHECK(m.covariance(0, 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(m.spectral_density(0.0) == doctest::Approx(2.0));
  CHECK(m.stationary());
  CHECK(m.gaussian());
  CHECK(m.det_constant() == 1.0);
  CHECK(m.spec() == "ou:1");
  const auto m2 = make_ou(2.0);
  for (double t : {-3.0, 0.0, 0.7, 12.0}) CHECK(m2.tau_phi(t) == 1.0);
  CHECK_THROWS_AS(make_ou(0.0), ValidationError);
  CHECK_THROWS_AS(make_ou(-1.0), ValidationError);
  CHECK_THROWS_AS(m.double_transform(0.0, 0.0), ConfigurationError);
}

TEST_CASE("ou spectral density matches a numeric transform") {
  const auto m = make_ou(1.0);
  for (double z : {0.0, 1.0, 5.0}) {
    const double oracle = 2.0 * gk([&](double t) { return m.lag_covariance(t) * std::cos(z * t); }, 0.0, 60.0);
    CHECK(m.spectral_density(z) == doctest::Approx(oracle).epsilon(1e-3));
  }
}

TEST_CASE("separable gauss bump") {
  const auto m = make_gauss_bump();
  CHECK(m.covariance(1, 1) == doctest::Approx(std::exp(-1.0)));
  const double g_int = gk([](double t) { return std::exp(-t * t / 2); }, -20.0, 20.0);
  CHECK(std::abs(m.double_transform(0.0, 0.0)) == doctest::Approx(g_int * g_int).epsilon(1e-10));
  CHECK(std::abs(m.double_transform(0.0, 0.0)) == doctest::Approx(2 * pi).epsilon(1e-12));
  const double oracle = gk([](double t) { return std::exp(-t * t / 2) * std::cos(1.5 * t); }, -20.0, 20.0);
  CHECK(m.double_transform(1.5, 0.0).real() == doctest::Approx(oracle * g_int).epsilon(1e-10));
  CHECK_FALSE(m.stationary());
  CHECK(m.tau_phi(1.0) == doctest::Approx(std::exp(-0.5)));
  CHECK_THROWS_AS(m.spectral_density(0.0), ConfigurationError);

  const Eigen::VectorXd pts = Eigen::VectorXd::LinSpaced(40, -3, 3);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.covariance_matrix(pts));
  const auto& s = svd.singularValues();
  CHECK(s[1] <= 1e-12 * s[0]);
}

TEST_CASE("parse_model") {
  CHECK(parse_model("ou:0.5").covariance(0, 2) == doctest::Approx(std::exp(-1.0)));
  CHECK(parse_model("separable:gauss-bump").kind() == ModelKind::separable);
  CHECK_THROWS_AS(parse_model("ou:abc"), ValidationError);
  CHECK_THROWS_AS(parse_model("ou:-1"), ValidationError);
  CHECK_THROWS_AS(parse_model("brownian"), ValidationError);
}

TEST_CASE("custom models are validated") {
  ProcessModel::Parts asym;
  asym.covariance = [](double t, double s) { return std::exp(-std::abs(t - s)) * (1 + 0.1 * t); };
  CHECK_THROWS_AS(ProcessModel::custom(asym), ValidationError);

  ProcessModel::Parts not_psd;
  not_psd.covariance = [](double t, double s) { return std::abs(t - s) < 1e-12 ? 1.0 : -0.5; };
  CHECK_THROWS_AS(ProcessModel::custom(not_psd), ValidationError);

  ProcessModel::Parts not_stat;
  not_stat.covariance = [](double t, double s) { return std::exp(-(t * t + s * s)); };
  not_stat.stationary = true;
  CHECK_THROWS_AS(ProcessModel::custom(not_stat), ValidationError);

  ProcessModel::Parts bad_tau;
  bad_tau.covariance = [](double t, double s) { return std::exp(-std::abs(t - s)); };
  bad_tau.tau_phi = [](double) { return 2.0; };
  CHECK_THROWS_AS(ProcessModel::custom(bad_tau), ValidationError);

  ProcessModel::Parts bad_cx;
  bad_cx.covariance = [](double t, double s) { return std::exp(-std::abs(t - s)); };
  bad_cx.det_constant = 2.0;
  CHECK_THROWS_AS(ProcessModel::custom(bad_cx), ValidationError);

  CHECK(constant_one().tau_phi(3.0) == 1.0);
}

TEST_CASE("grids") {
  const auto g = symmetric_grid(2.0, 0.25);
  CHECK(g.size() == 17);
  CHECK(g[0] == -2.0);
  CHECK(g[16] == 2.0);
  CHECK_THROWS_AS(symmetric_grid(1.0, 0.3), ValidationError);
  CHECK_THROWS_AS(symmetric_grid(100.0, 0.001), ResourceError);
  CHECK_THROWS_AS(symmetric_grid(1.0, 0.0), ValidationError);
}

TEST_CASE("simulation law of the ou model") {
  const auto m = make_ou(1.0);
  const auto paths = simulate_paths(m, 1.0, 0.5, 2000, 42);
  REQUIRE(paths.size() == 2000);
  double v0 = 0.0, c = 0.0;
  for (const auto& p : paths) {
    REQUIRE(p.values.size() == 5);
    v0 += p.values[2] * p.values[2];
    c += p.values[2] * p.values[3];
  }
  v0 /= 2000;
  c /= 2000;
  CHECK(std::abs(v0 - 1.0) <= 0.15);
  const double rho = std::exp(-0.5);
  CHECK(std::abs(c - rho) <= 3.0 * std::sqrt((1.0 + rho * rho) / 2000.0));
  CHECK(paths[5].path_index == 5);
  CHECK(paths[5].seed == 42);
  CHECK(paths[5].step() == doctest::Approx(0.5));
}

TEST_CASE("simulation is deterministic and keyed by path") {
  const auto m = make_ou(1.0);
  const auto a = simulate_paths(m, 2.0, 0.125, 10, 9);
  const auto b = simulate_paths(m, 2.0, 0.125, 10, 9);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].values == b[i].values);
  const auto c = simulate_paths(m, 2.0, 0.125, 10, 10);
  CHECK(a[0].values != c[0].values);
  // column i depends only on (seed, i)
  const auto z1 = standard_normals(7, 0, 5, 3);
  const auto z2 = standard_normals(7, 3, 2, 3);
  CHECK(z1.col(3) == z2.col(0));
  CHECK(z1.col(4) == z2.col(1));
}

TEST_CASE("separable paths are proportional to g") {
  const auto m = make_gauss_bump();
  const auto paths = simulate_paths(m, 3.0, 0.25, 3, 1);
  for (const auto& p : paths) {
    const double z = p.values[12];  // t = 0, g = 1
    for (Eigen::Index i = 0; i < p.grid.size(); ++i)
      CHECK(p.values[i] == doctest::Approx(z * std::exp(-p.grid[i] * p.grid[i] / 2)).epsilon(1e-8));
  }
}

TEST_CASE("covariance factor") {
  Eigen::MatrixXd k(3, 3);
  k << 1, 1, 0, 1, 1, 0, 0, 0, 2;  // singular, handled by the eigen path
  const auto f = covariance_factor(k);
  CHECK((f * f.transpose() - k).cwiseAbs().maxCoeff() < 1e-12);
  k(0, 1) = k(1, 0) = 2;
  CHECK_THROWS_AS(covariance_factor(k), ValidationError);
}

TEST_CASE("validate_model") {
  const auto haar = make_basis("haar");
  const auto two = [](double) { return 2.0; };
  const auto r1 = validate_model(make_ou(1.0), haar, two, 5.0);
  CHECK(r1.passed());
  CHECK(r1.growth_a2 == 1.0);
  CHECK(r1.growth_a4 == 1.0);
  CHECK(validate_model(make_gauss_bump(), haar, two, 5.0).passed());
  CHECK_THROWS_AS(validate_model(make_ou(1.0), haar, [](double) { return 0.5; }, 5.0), ValidationError);
  CHECK_THROWS_AS(validate_model(make_ou(1.0), haar, [](double x) { return 2.0 + x; }, 5.0), ValidationError);
  ProcessModel::Parts big;
  big.covariance = [](double t, double s) { return 4.0 * std::exp(-std::abs(t - s)); };
  big.stationary = true;
  const auto r2 = validate_model(ProcessModel::custom(big), haar, [](double) { return 1.5; }, 5.0);
  CHECK_FALSE(r2.passed());
  CHECK_FALSE(r2.checks.at(0).passed);
  const auto meyer = make_basis("meyer");
  // exponential growth: the weighted envelope integral is finite (compact staircase) but A(a) is large
  const auto r3 = validate_model(make_ou(1.0), meyer, [](double x) { return 2.0 * std::exp(x * x); }, 5.0);
  CHECK(r3.growth_a2 > 1e30);
}

TEST_CASE("generalized minkowski gap") {
  for (double lambda : {0.5, 1.0, 2.0})
    for (double T : {1.0, 5.0}) {
      const auto g = minkowski_gap(make_ou(lambda), T);
      CHECK(g.lhs <= g.rhs + 1e-9);
    }
  for (double T : {1.0, 5.0}) {
    const auto g = minkowski_gap(make_gauss_bump(), T);
    CHECK(g.lhs <= g.rhs + 1e-9);
  }
  const auto g = minkowski_gap(make_ou(1.0), 1.0);
  CHECK(g.lhs == doctest::Approx(std::sqrt(2.0 * std::exp(-1.0))).epsilon(1e-4));
  CHECK(g.lhs == doctest::Approx(0.85776).epsilon(1e-4));
  CHECK(g.rhs == doctest::Approx(1.0).epsilon(1e-12));
  const auto tiny = minkowski_gap(make_ou(1.0), 1e-4);
  CHECK(tiny.lhs / tiny.rhs == doctest::Approx(1.0).epsilon(1e-4));
  const auto flat = minkowski_gap(constant_one(), 3.0);
  CHECK(flat.lhs == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(flat.rhs == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS_AS(minkowski_gap(make_ou(1.0), 0.0), ValidationError);
}
