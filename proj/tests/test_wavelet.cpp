#include "lpwave/errors.hpp"
#include "lpwave/wavelet.hpp"

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/daubechies_scaling.hpp>
#include <boost/math/special_functions/daubechies_wavelet.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace lpwave;
using boost::math::quadrature::gauss_kronrod;
constexpr double pi = std::numbers::pi;

namespace {

// fixed 61-point rule on 8 sub-panels
double gk(const std::function<double(double)>& f, double a, double b) {
  double s = 0.0;
  for (int i = 0; i < 8; ++i)
    s += gauss_kronrod<double, 61>::integrate(f, a + (b - a) * i / 8, a + (b - a) * (i + 1) / 8, 0, 0);
  return s;
}

// Meyer oracle from the textbook frequency-side definition.
double nu(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return std::pow(x, 4) * (35 - 84 * x + 70 * x * x - 20 * x * x * x);
}
double meyer_phi_oracle(double x) {
  auto hat = [](double w) {
    if (w <= 2 * pi / 3) return 1.0;
    return std::cos(pi / 2 * nu(3 * w / (2 * pi) - 1));
  };
  double s = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double a = 4 * pi / 3 * i / 16, b = 4 * pi / 3 * (i + 1) / 16;
    s += gk([&](double w) { return hat(w) * std::cos(w * x); }, a, b);
  }
  return s / pi;
}
double meyer_psi_oracle(double x) {
  auto mod = [](double w) {
    if (w <= 4 * pi / 3) return std::sin(pi / 2 * nu(3 * w / (2 * pi) - 1));
    return std::cos(pi / 2 * nu(3 * w / (4 * pi) - 1));
  };
  double s = 0.0;
  for (int i = 0; i < 32; ++i) {
    const double a = 2 * pi / 3 + 2 * pi * i / 32, b = 2 * pi / 3 + 2 * pi * (i + 1) / 32;
    s += gk([&](double w) { return mod(w) * std::cos(w * (x - 0.5)); }, a, b);
  }
  return s / pi;
}

// int w(x) e^{-izx} dx by trapezoid on the table grid.
std::complex<double> numeric_ft(const WaveletPair& b, bool mother, double z, double lo, double hi, double h) {
  std::complex<double> s = 0.0;
  const long n = std::lround((hi - lo) / h);
  for (long i = 0; i <= n; ++i) {
    const double x = lo + i * h;
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    s += w * (mother ? b.m_wavelet(x) : b.f_wavelet(x)) * std::polar(1.0, -z * x);
  }
  return s * h;
}

}  // namespace

TEST_CASE("haar basics") {
  const auto b = make_basis("haar");
  CHECK(b.m_wavelet(0.25) == 1.0);
  CHECK(b.m_wavelet(0.75) == -1.0);
  CHECK(std::abs(b.m_hat(0.0)) == 0.0);
  CHECK(eval_dilated(b, Which::m, 0, 0, 0.25) == 1.0);
  CHECK(eval_dilated(b, Which::m, 1, 0, 0.125) == doctest::Approx(std::sqrt(2.0)));
  CHECK_FALSE(b.continuous());
  CHECK_FALSE(b.caveat().empty());
  CHECK(b.spec() == "haar");
}

TEST_CASE("compact support outside the translate") {
  for (const char* spec : {"haar", "daubechies:2", "daubechies:4"}) {
    const auto b = make_basis(spec);
    for (double t : {0.0, 0.3, -1.0, 3.0}) {
      CHECK(eval_dilated(b, Which::m, 2, 5, t) == 0.0);
      CHECK(eval_dilated(b, Which::f, 2, 5, t) == 0.0);
    }
  }
}

TEST_CASE("unknown basis specs") {
  CHECK_THROWS_AS(make_basis("daubechies:8"), ValidationError);
  CHECK_THROWS_AS(make_basis("daubechies:x"), ValidationError);
  CHECK_THROWS_AS(make_basis("battle-lemarie"), ValidationError);
}

TEST_CASE_TEMPLATE("daubechies tables against boost", N, std::integral_constant<int, 2>, std::integral_constant<int, 3>,
                   std::integral_constant<int, 4>) {
  constexpr int order = N::value;
  const auto b = make_basis("daubechies:" + std::to_string(order));
  boost::math::daubechies_scaling<double, order> phi;
  boost::math::daubechies_wavelet<double, order> psi;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0 * order - 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    CHECK(b.f_wavelet(x) == doctest::Approx(phi(x)).epsilon(2e-3));
    // boost centres psi on [1 - N, N]
    CHECK(b.m_wavelet(x) == doctest::Approx(psi(x - order + 1)).epsilon(2e-3));
  }
}

TEST_CASE("meyer tables against a frequency-side oracle") {
  const auto b = make_basis("meyer");
  for (double x : {0.0, 0.37, 1.0, -2.25, 4.5, 9.1}) {
    CHECK(b.f_wavelet(x) == doctest::Approx(meyer_phi_oracle(x)).epsilon(1e-5));
    CHECK(b.m_wavelet(x) == doctest::Approx(meyer_psi_oracle(x)).epsilon(1e-5));
  }
  CHECK(b.m_wavelet(0.5 + 1.3) == doctest::Approx(b.m_wavelet(0.5 - 1.3)).epsilon(1e-9));
}

TEST_CASE("fourier evaluators") {
  for (const char* spec : {"haar", "daubechies:2", "daubechies:3", "daubechies:4", "meyer"}) {
    CAPTURE(spec);
    const auto b = make_basis(spec);
    CHECK(std::abs(b.m_hat(0.0)) < 1e-8);
    CHECK(std::abs(b.f_hat(0.0)) == doctest::Approx(1.0).epsilon(1e-8));
    // partition identity
    for (double y : {0.0, 0.4, 1.3, 2.9, -2.0}) {
      double s = 0.0;
      for (int k = -400; k <= 400; ++k) s += std::norm(b.f_hat(y + 2 * pi * k));
      CHECK(s == doctest::Approx(1.0).epsilon(1e-3));
    }
    const bool meyer = b.family() == WaveletFamily::meyer;
    const double lo = meyer ? -40.0 : 0.0, hi = meyer ? 40.0 : std::max(1.0, 2.0 * b.order() - 1.0);
    for (double z : {0.5, 1.0, 2.0}) {
      CHECK(std::abs(numeric_ft(b, true, z, lo, hi, b.table_step()) - b.m_hat(z)) < 1e-3);
      CHECK(std::abs(numeric_ft(b, false, z, lo, hi, b.table_step()) - b.f_hat(z)) < 1e-3);
    }
  }
}

TEST_CASE("envelopes dominate the mother functions") {
  for (const char* spec : {"haar", "daubechies:2", "daubechies:3", "daubechies:4", "meyer"}) {
    CAPTURE(spec);
    const auto b = make_basis(spec);
    for (double x = -50.0; x <= 50.0; x += 1.0 / 512 + 1e-5) {
      CHECK(std::abs(b.f_wavelet(x)) <= b.envelope_f()(x) + 1e-12);
      CHECK(std::abs(b.m_wavelet(x)) <= b.envelope_m()(x) + 1e-12);
    }
    for (const Envelope* e : {&b.envelope_f(), &b.envelope_m()}) {
      CHECK(e->tail_integral(0.0) == doctest::Approx(e->total_integral()).epsilon(1e-10));
      double prev = e->tail_integral(0.0), prev_phi = (*e)(0.0);
      for (double a = 0.1; a < 60.0; a += 0.37) {
        CHECK(e->tail_integral(a) <= prev);
        CHECK((*e)(a) <= prev_phi);
        prev = e->tail_integral(a);
        prev_phi = (*e)(a);
      }
    }
  }
}

TEST_CASE("envelope constants") {
  const auto ex = Envelope::custom([](double x) { return std::exp(-x); }, [](double a) { return std::exp(-a); });
  CHECK(envelope_constant(ex) == doctest::Approx(3.0 + 4.0 * std::exp(-0.5)).epsilon(1e-12));
  CHECK(envelope_constant(ex) == doctest::Approx(5.42612).epsilon(1e-5));
  CHECK(envelope_constant(Envelope::box(1.0, 1.0)) == doctest::Approx(5.0));
  CHECK(envelope_constant(ex.scaled(2.0)) == doctest::Approx(2.0 * envelope_constant(ex)));
  CHECK(tail_constant(ex, 1.0, 3) == doctest::Approx(std::exp(-1.0) + std::exp(-2.0)).epsilon(1e-12));
  CHECK(tail_constant(ex, 1.0, 3) == doctest::Approx(0.50321).epsilon(1e-5));
  CHECK(tail_constant(Envelope::box(1.0, 1.0), 1.0, 3) == 0.0);
  double prev = tail_constant(ex, 1.0, 2);
  for (long k1 = 3; k1 < 40; ++k1) {
    const double c = tail_constant(ex, 1.0, k1);
    CHECK(c < prev);
    prev = c;
  }
  CHECK(prev < 1e-15);
  CHECK_THROWS_AS(tail_constant(ex, 2.5, 3), ValidationError);
}

TEST_CASE("staircase and rational envelopes integrate correctly") {
  const auto st = Envelope::staircase(0.25, {3.0, 2.0, 2.0, 0.5});
  CHECK(st(0.1) == 3.0);
  CHECK(st(0.8) == 0.5);
  CHECK(st(1.1) == 0.0);
  CHECK(st.total_integral() == doctest::Approx(0.25 * 7.5));
  CHECK(st.tail_integral(0.6) == doctest::Approx(0.15 * 2.0 + 0.25 * 0.5));
  CHECK_THROWS_AS(Envelope::staircase(0.25, {1.0, 2.0}), ValidationError);

  const auto r = Envelope::rational(2.0, 0.5, 3.0);
  const double oracle = gauss_kronrod<double, 61>::integrate(
      [](double x) { return 2.0 * std::pow(1.0 + x / 0.5, -3.0); }, 1.5, std::numeric_limits<double>::infinity(), 15,
      1e-12);
  CHECK(r.tail_integral(1.5) == doctest::Approx(oracle).epsilon(1e-9));
  const double rad = r.effective_radius(1e-6);
  CHECK(2.0 * r.tail_integral(rad) <= 1e-6 * (1 + 1e-9));
  CHECK(2.0 * r.tail_integral(0.99 * rad) > 1e-6);
}

TEST_CASE("direct sums stay below the envelope constants") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (const char* spec : {"meyer", "daubechies:3"}) {
    CAPTURE(spec);
    const auto b = make_basis(spec);
    for (Which which : {Which::f, Which::m}) {
      const double c = envelope_constant(b.envelope(which));
      const double c7 = tail_constant(b.envelope(which), 5.0, 7);
      const double c10 = tail_constant(b.envelope(which), 5.0, 10);
      for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        double all = 0.0, t7 = 0.0, t10 = 0.0;
        for (long k = -200; k <= 200; ++k) {
          const double v = std::abs(b.evaluate(which, x - k));
          all += v;
          if (std::abs(k) >= 7) t7 += v;
          if (std::abs(k) >= 10) t10 += v;
        }
        CHECK(all <= c + 1e-6);
        CHECK(t7 <= c7 + 1e-6);
        CHECK(t10 <= c10 + 1e-6);
      }
    }
  }
}

TEST_CASE("dilates are normalised") {
  for (const char* spec : {"daubechies:2", "meyer"}) {
    const auto b = make_basis(spec);
    for (int j = 0; j <= 4; ++j) {
      const auto [lo, hi] = effective_support(b, Which::m, j, 3);
      const double h = b.table_step() / std::ldexp(1.0, j);
      double s = 0.0;
      for (double t = lo; t <= hi; t += h) s += std::pow(eval_dilated(b, Which::m, j, 3, t), 2);
      CHECK(s * h == doctest::Approx(1.0).epsilon(1e-4));
    }
  }
}

TEST_CASE("effective support of compact bases") {
  const auto b = make_basis("daubechies:3");
  const auto [lo, hi] = effective_support(b, Which::m, 1, 2);
  CHECK(lo == doctest::Approx(1.0));
  CHECK(hi == doctest::Approx(3.5));
}

TEST_CASE("gram matrix of daubechies:2 is the identity") {
  const auto g = gram_matrix(make_basis("daubechies:2"), 3, 8);
  CHECK(g.rows() == 17 * 5);
  CHECK((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("lipschitz data") {
  const auto haar = make_basis("haar");
  // |psi_hat(z)| / |z| = 4 sin^2(z/4) / z^2, supremum 1/4 at the origin
  const auto c1 = lipschitz_constant(haar, 1.0);
  REQUIRE(c1);
  CHECK(*c1 == doctest::Approx(0.25).epsilon(1e-6));
  CHECK_FALSE(lipschitz_constant(haar, 2.0));
  CHECK(lipschitz_fit(haar, {0.5, 1.0, 1.5}).order == 1.0);

  const auto meyer = make_basis("meyer");
  CHECK(lipschitz_constant(meyer, 1.0));
  CHECK(lipschitz_fit(meyer, {0.5, 1.0}).order == 1.0);
  CHECK_THROWS_AS(lipschitz_fit(meyer, {}), NumericError);

  // order-1 constant dominates on a dense grid
  const double c = *lipschitz_constant(make_basis("daubechies:3"), 1.0);
  const auto d3 = make_basis("daubechies:3");
  for (double z = 1e-4; z < 50; z *= 1.01) CHECK(std::abs(d3.m_hat(z)) <= c * z * (1 + 1e-9));
}
