#include "lpwave/orlicz.hpp"

#include "lpwave/errors.hpp"
#include "lpwave/quadrature.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <regex>

namespace lpwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> validation_grid() {
  std::vector<double> grid;
  for (int k = 1; k >= -6; --k) grid.push_back(-std::pow(10.0, k));
  grid.push_back(0.0);
  for (int k = -6; k <= 1; ++k) grid.push_back(std::pow(10.0, k));
  return grid;
}

double estimate_q_constant(const NFunction::Evaluator& phi) {
  const double coarse = phi(1e-4) / 1e-8;
  const double fine = phi(1e-6) / 1e-12;
  // phi(x)/x^2 still growing as x -> 0 marks an infinite limit.
  if (fine > 1.5 * coarse) return kInf;
  return fine;
}

}  // namespace

NFunction NFunction::power(double alpha) {
  if (!(alpha > 1.0 && alpha <= 2.0))
    throw ValidationError("power N-function requires 1 < alpha <= 2, got " + std::to_string(alpha));
  const double beta = alpha / (alpha - 1.0);
  NFunction nf;
  nf.family_ = NFamily::power;
  nf.params_ = {alpha};
  nf.phi_ = [alpha](double x) { return std::pow(std::abs(x), alpha) / alpha; };
  nf.density_ = [alpha](double x) { return std::pow(x, alpha - 1.0); };
  nf.conjugate_ = [beta](double x) { return std::pow(std::abs(x), beta) / beta; };
  nf.q_constant_ = alpha == 2.0 ? 0.5 : kInf;
  return nf;
}

NFunction NFunction::gaussian() {
  NFunction nf;
  nf.family_ = NFamily::gaussian;
  nf.phi_ = [](double x) { return 0.5 * x * x; };
  nf.density_ = [](double x) { return x; };
  nf.conjugate_ = [](double x) { return 0.5 * x * x; };
  nf.q_constant_ = 0.5;
  return nf;
}

NFunction NFunction::custom(Evaluator phi, Evaluator density, Evaluator conjugate) {
  if (!phi) throw ValidationError("custom N-function requires a phi evaluator");
  NFunction nf;
  nf.family_ = NFamily::custom;
  nf.phi_ = std::move(phi);
  nf.density_ = std::move(density);
  nf.conjugate_ = std::move(conjugate);
  nf.q_constant_ = estimate_q_constant(nf.phi_);
  nf.validate();
  return nf;
}

void NFunction::validate() const {
  const std::vector<double> grid = validation_grid();
  auto fail = [](const std::string& what) { throw ValidationError("N-function invariant violated: " + what); };

  if (std::abs(phi_(0.0)) > 1e-15) fail("phi(0) != 0");
  for (double x : grid) {
    const double v = phi_(x);
    if (!std::isfinite(v) || v < 0.0) fail("phi must be finite and nonnegative");
    if (std::abs(v - phi_(-x)) > 1e-12 * (1.0 + v)) fail("phi is not even");
  }
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = grid[i], b = grid[i + 1];
    const double mid = phi_(0.5 * (a + b));
    const double chord = 0.5 * (phi_(a) + phi_(b));
    if (mid > chord * (1.0 + 1e-12) + 1e-300) fail("phi is not convex");
  }
  double prev_ratio = 0.0;
  double first_ratio = 0.0;
  for (double x : grid) {
    if (x <= 0.0) continue;
    const double ratio = phi_(x) / x;
    if (first_ratio == 0.0) first_ratio = ratio;
    if (ratio < prev_ratio * (1.0 - 1e-12)) fail("phi(x)/x is not nondecreasing");
    prev_ratio = ratio;
  }
  if (!(prev_ratio > first_ratio)) fail("phi(x)/x does not grow from 0 toward infinity");

  double prev_f = 0.0;
  for (double x : grid) {
    if (x < 0.0) continue;
    const double f = density(*this, x);
    if (f < prev_f * (1.0 - 1e-9) - 1e-12) fail("density is not nondecreasing");
    prev_f = f;
  }
  if (density_) {
    if (std::abs(density_(0.0)) > 1e-12) fail("density(0) != 0");
    for (double u : {0.1, 1.0, 5.0}) {
      const double integral = integrate_graded(density_, 0.0, u);
      if (std::abs(integral - phi_(u)) > 1e-8 * std::abs(phi_(u)))
        fail("phi is not the integral of its density");
    }
  }
  if (!(q_constant_ > 0.0)) fail("lim phi(x)/x^2 at 0 must be positive");
}

std::string NFunction::spec() const {
  switch (family_) {
    case NFamily::gaussian:
      return "gaussian";
    case NFamily::power: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof(buf), params_[0]);
      return "power:" + std::string(buf, res.ptr);
    }
    case NFamily::custom:
      break;
  }
  return "custom";
}

double conjugate(const NFunction& nf, double x) {
  if (nf.has_closed_form_conjugate()) return nf.closed_form_conjugate()(x);
  return conjugate_numeric(nf, x);
}

double conjugate_numeric(const NFunction& nf, double x) {
  x = std::abs(x);
  if (x == 0.0) return 0.0;
  auto objective = [&](double y) { return x * y - nf.phi(y); };
  auto outside = [&](double y) { return nf.phi(y) / y > x; };

  // Bracket [0, hi]: phi(hi)/hi > x makes the objective negative at hi, and
  // concavity with objective(0) = 0 puts the maximiser inside.
  double hi = std::max(1.0, x);
  int steps = 0;
  while (!outside(hi)) {
    hi *= 2.0;
    if (++steps > 60 || !std::isfinite(hi))
      throw NumericError("conjugate: could not bracket the maximiser for x = " + std::to_string(x));
  }
  while (hi > 1e-300 && outside(0.5 * hi)) hi *= 0.5;

  constexpr double kInvPhi = 0.6180339887498949;
  double a = 0.0, b = hi;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 400 && (b - a) > 1e-15 * hi; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = objective(d);
    }
  }
  return std::max({fc, fd, objective(0.5 * (a + b)), 0.0});
}

double density(const NFunction& nf, double x) {
  if (x < 0.0) throw ValidationError("density: argument must be nonnegative");
  if (nf.has_analytic_density()) return nf.analytic_density()(x);
  const double h = 1e-6 * (1.0 + x);
  return (nf.phi(x + h) - nf.phi(x)) / h;
}

double parse_decimal(std::string_view text) {
  static const std::regex pattern(R"(^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$)");
  const std::string s(text);
  if (!std::regex_match(s, pattern)) throw ValidationError("not a decimal number: '" + s + "'");
  const char* first = s.data();
  if (*first == '+') ++first;
  double value = 0.0;
  auto res = std::from_chars(first, s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(value))
    throw ValidationError("not a finite decimal number: '" + s + "'");
  return value;
}

NFunction parse_nfunction(std::string_view spec) {
  if (spec == "gaussian") return NFunction::gaussian();
  constexpr std::string_view prefix = "power:";
  if (spec.starts_with(prefix)) return NFunction::power(parse_decimal(spec.substr(prefix.size())));
  throw ValidationError("unknown N-function spec '" + std::string(spec) +
                        "' (expected gaussian or power:<alpha>)");
}

}  // namespace lpwave
