#include "lpwave/wavelet.hpp"

#include "lpwave/errors.hpp"
#include "lpwave/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace lpwave {

using std::numbers::pi;
using cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Envelope

Envelope Envelope::box(double height, double radius) {
  if (!(height >= 0.0) || !(radius > 0.0)) throw ValidationError("box envelope: bad parameters");
  Envelope env;
  env.phi_ = [height, radius](double x) { return x <= radius ? height : 0.0; };
  env.tail_ = [height, radius](double a) { return height * std::max(0.0, radius - a); };
  return env;
}

Envelope Envelope::rational(double height, double scale, double power) {
  if (!(height >= 0.0) || !(scale > 0.0) || !(power > 1.0))
    throw ValidationError("rational envelope: bad parameters");
  Envelope env;
  env.phi_ = [=](double x) { return height * std::pow(1.0 + x / scale, -power); };
  env.tail_ = [=](double a) {
    return height * scale / (power - 1.0) * std::pow(1.0 + a / scale, 1.0 - power);
  };
  return env;
}

Envelope Envelope::staircase(double step, std::vector<double> levels) {
  if (!(step > 0.0) || levels.empty()) throw ValidationError("staircase envelope: bad parameters");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] > levels[i - 1]) throw ValidationError("staircase envelope must be nonincreasing");
  // suffix[i] = step * sum_{m >= i} levels[m]
  std::vector<double> suffix(levels.size() + 1, 0.0);
  for (std::size_t i = levels.size(); i-- > 0;) suffix[i] = suffix[i + 1] + step * levels[i];
  auto data = std::make_shared<const std::pair<std::vector<double>, std::vector<double>>>(
      std::move(levels), std::move(suffix));
  Envelope env;
  env.phi_ = [data, step](double x) {
    const double u = x / step;
    if (u >= static_cast<double>(data->first.size())) return 0.0;
    return data->first[static_cast<std::size_t>(u)];
  };
  env.tail_ = [data, step](double a) {
    const double u = a / step;
    const auto& lv = data->first;
    if (u >= static_cast<double>(lv.size())) return 0.0;
    const auto i = static_cast<std::size_t>(u);
    return data->second[i + 1] + (static_cast<double>(i + 1) - u) * step * lv[i];
  };
  return env;
}

Envelope Envelope::custom(Evaluator phi, Evaluator tail) {
  if (!phi || !tail) throw ValidationError("custom envelope requires phi and tail evaluators");
  Envelope env;
  env.phi_ = std::move(phi);
  env.tail_ = std::move(tail);
  return env;
}

double Envelope::effective_radius(double mass) const {
  double hi = 1.0;
  while (2.0 * tail_integral(hi) > mass) {
    hi *= 2.0;
    if (hi > 1e12) throw NumericError("envelope tail does not fall below the requested mass");
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (2.0 * tail_integral(mid) > mass ? lo : hi) = mid;
  }
  return hi;
}

Envelope Envelope::scaled(double factor) const {
  Envelope env;
  env.phi_ = [phi = phi_, factor](double x) { return factor * phi(x); };
  env.tail_ = [tail = tail_, factor](double a) { return factor * tail(a); };
  return env;
}

double envelope_constant(const Envelope& env) {
  return 3.0 * env(0.0) + 4.0 * env.tail_integral(0.5);
}

double tail_constant(const Envelope& env, double T, long k1) {
  if (static_cast<double>(k1) < T + 1.0)
    throw ValidationError("tail_constant requires k1 >= T + 1 (k1 = " + std::to_string(k1) +
                          ", T = " + std::to_string(T) + ")");
  const double k = static_cast<double>(k1);
  return env.tail_integral(k - T - 1.0) + env.tail_integral(k - 1.0);
}

// ---------------------------------------------------------------------------
// Tabulated mother functions

namespace {

/// Samples on x0 + i * step, zero outside, linear interpolation between.
struct Table {
  double x0 = 0.0;
  double step = 1.0;
  std::vector<double> values;

  double operator()(double x) const {
    const double u = (x - x0) / step;
    if (!(u >= 0.0) || u > static_cast<double>(values.size() - 1)) return 0.0;
    const auto i = static_cast<std::size_t>(u);
    if (i + 1 >= values.size()) return values.back();
    const double frac = u - static_cast<double>(i);
    return values[i] + frac * (values[i + 1] - values[i]);
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
};

constexpr int kCascadeLevels = 12;

const std::vector<double>& daubechies_filter(int order) {
  static const std::map<int, std::vector<double>> filters = {
      {2, {0.48296291314453416, 0.83651630373780794, 0.22414386804201339, -0.12940952255126037}},
      {3,
       {0.33267055295008263, 0.80689150931109255, 0.45987750211849154, -0.13501102001025458,
        -0.085441273882026658, 0.035226291885709533}},
      {4,
       {0.23037781330889651, 0.71484657055291567, 0.63088076792985892, -0.027983769416859854,
        -0.18703481171909309, 0.030841381835560764, 0.032883011666885197,
        -0.010597401785069032}},
  };
  auto it = filters.find(order);
  if (it == filters.end()) throw ValidationError("daubechies order must be 2, 3 or 4");
  return it->second;
}

/// Scaling and wavelet tables on the dyadic grid i / 2^12 over [0, 2N-1]:
/// integer values from the refinement eigenproblem, then one dyadic level per
/// pass of phi(x) = sqrt2 sum_k h_k phi(2x - k).
std::pair<Table, Table> daubechies_tables(int order) {
  const std::vector<double>& h = daubechies_filter(order);
  const int taps = static_cast<int>(h.size());
  const int support = taps - 1;
  const long scale = 1L << kCascadeLevels;
  const long n = support * scale + 1;
  const double sqrt2 = std::numbers::sqrt2;

  Eigen::MatrixXd refine = Eigen::MatrixXd::Zero(support + 1, support + 1);
  for (int i = 0; i <= support; ++i)
    for (int m = 0; m <= support; ++m) {
      const int k = 2 * i - m;
      if (k >= 0 && k < taps) refine(i, m) = sqrt2 * h[static_cast<std::size_t>(k)];
    }
  Eigen::EigenSolver<Eigen::MatrixXd> es(refine);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()[i] - 1.0) < std::abs(es.eigenvalues()[best] - 1.0)) best = i;
  Eigen::VectorXd integer_values = es.eigenvectors().col(best).real();
  integer_values /= integer_values.sum();

  std::vector<double> phi(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i <= support; ++i) phi[static_cast<std::size_t>(i * scale)] = integer_values[i];
  for (int level = 1; level <= kCascadeLevels; ++level) {
    const long stride = scale >> level;
    for (long idx = stride; idx < n; idx += 2 * stride) {
      double v = 0.0;
      for (int k = 0; k < taps; ++k) {
        const long src = 2 * idx - k * scale;
        if (src >= 0 && src < n) v += h[static_cast<std::size_t>(k)] * phi[static_cast<std::size_t>(src)];
      }
      phi[static_cast<std::size_t>(idx)] = sqrt2 * v;
    }
  }

  std::vector<double> psi(static_cast<std::size_t>(n), 0.0);
  for (long idx = 0; idx < n; ++idx) {
    double v = 0.0;
    for (int k = 0; k < taps; ++k) {
      const double g = ((k % 2 == 0) ? 1.0 : -1.0) * h[static_cast<std::size_t>(taps - 1 - k)];
      const long src = 2 * idx - k * scale;
      if (src >= 0 && src < n) v += g * phi[static_cast<std::size_t>(src)];
    }
    psi[static_cast<std::size_t>(idx)] = sqrt2 * v;
  }
  const double step = 1.0 / static_cast<double>(scale);
  return {Table{0.0, step, std::move(phi)}, Table{0.0, step, std::move(psi)}};
}

double meyer_nu(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * x * x * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
}

double meyer_phi_hat(double w) {
  w = std::abs(w);
  if (w <= 2.0 * pi / 3.0) return 1.0;
  if (w <= 4.0 * pi / 3.0) return std::cos(0.5 * pi * meyer_nu(3.0 * w / (2.0 * pi) - 1.0));
  return 0.0;
}

/// |psi_hat|; the full transform carries the phase e^{-iw/2}.
double meyer_psi_modulus(double w) {
  w = std::abs(w);
  if (w < 2.0 * pi / 3.0) return 0.0;
  if (w <= 4.0 * pi / 3.0) return std::sin(0.5 * pi * meyer_nu(3.0 * w / (2.0 * pi) - 1.0));
  if (w <= 8.0 * pi / 3.0) return std::cos(0.5 * pi * meyer_nu(3.0 * w / (4.0 * pi) - 1.0));
  return 0.0;
}

constexpr double kMeyerRange = 48.0;
constexpr int kMeyerStepLog2 = 10;

/// Samples (1/pi) int_0^inf A(w) cos(w (x - shift)) dw on the table grid,
/// with A given at quadrature nodes. Phases advance by complex rotation and
/// are re-anchored periodically.
Table cosine_transform_table(const QuadratureRule& rule, const Eigen::VectorXd& amplitude,
                             double shift, const std::function<double(double)>& analytic) {
  const double step = std::ldexp(1.0, -kMeyerStepLog2);
  const long n = static_cast<long>(std::llround(2.0 * kMeyerRange / step)) + 1;
  Table table{-kMeyerRange, step, std::vector<double>(static_cast<std::size_t>(n))};
  const Eigen::ArrayXd omega = rule.nodes.array();
  const Eigen::ArrayXd coeff = rule.weights.array() * amplitude.array() / pi;
  const Eigen::ArrayXcd rotation = (cplx(0.0, 1.0) * omega * step).exp();
  Eigen::ArrayXcd phase;
  for (long i = 0; i < n; ++i) {
    const double x = -kMeyerRange + static_cast<double>(i) * step;
    if (i % 512 == 0)
      phase = (cplx(0.0, 1.0) * omega * (x - shift)).exp();
    else
      phase *= rotation;
    double v = (coeff * phase.real()).sum();
    if (analytic) v += analytic(x);
    table.values[static_cast<std::size_t>(i)] = v;
  }
  return table;
}

std::pair<Table, Table> meyer_tables() {
  // phi: the flat part on [0, 2pi/3] is integrated in closed form.
  const QuadratureRule phi_rule = composite_gauss_legendre(2.0 * pi / 3.0, 4.0 * pi / 3.0, 24, 16);
  Eigen::VectorXd phi_amp(phi_rule.nodes.size());
  for (Eigen::Index i = 0; i < phi_amp.size(); ++i) phi_amp[i] = meyer_phi_hat(phi_rule.nodes[i]);
  auto flat = [](double x) {
    const double a = 2.0 * pi / 3.0;
    if (std::abs(x) < 1e-12) return a / pi;
    return std::sin(a * x) / (pi * x);
  };
  Table phi = cosine_transform_table(phi_rule, phi_amp, 0.0, flat);

  QuadratureRule lo = composite_gauss_legendre(2.0 * pi / 3.0, 4.0 * pi / 3.0, 24, 16);
  QuadratureRule hi = composite_gauss_legendre(4.0 * pi / 3.0, 8.0 * pi / 3.0, 48, 16);
  QuadratureRule psi_rule;
  psi_rule.nodes.resize(lo.nodes.size() + hi.nodes.size());
  psi_rule.weights.resize(psi_rule.nodes.size());
  psi_rule.nodes << lo.nodes, hi.nodes;
  psi_rule.weights << lo.weights, hi.weights;
  Eigen::VectorXd psi_amp(psi_rule.nodes.size());
  for (Eigen::Index i = 0; i < psi_amp.size(); ++i) psi_amp[i] = meyer_psi_modulus(psi_rule.nodes[i]);
  Table psi = cosine_transform_table(psi_rule, psi_amp, 0.5, {});
  return {std::move(phi), std::move(psi)};
}

/// Least decreasing majorant of |w| over the table: on [x_i, x_{i+1}) it is
/// the largest |sample| at any node with |x| >= x_i. Linear interpolation
/// between nodes never exceeds the larger endpoint, so it dominates everywhere.
Envelope majorant_envelope(const Table& table) {
  const double reach = std::max(std::abs(table.x0),
                                std::abs(table.x0 + static_cast<double>(table.values.size() - 1) * table.step));
  const auto cells = static_cast<std::size_t>(std::ceil(reach / table.step)) + 1;
  std::vector<double> levels(cells, 0.0);
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    const double x = std::abs(table.x0 + static_cast<double>(i) * table.step);
    const auto cell = std::min(cells - 1, static_cast<std::size_t>(std::llround(x / table.step)));
    levels[cell] = std::max(levels[cell], std::abs(table.values[i]));
  }
  for (std::size_t i = cells - 1; i-- > 0;) levels[i] = std::max(levels[i], levels[i + 1]);
  return Envelope::staircase(table.step, std::move(levels));
}

double haar_phi(double x) { return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0; }
double haar_psi(double x) {
  if (x >= 0.0 && x < 0.5) return 1.0;
  if (x >= 0.5 && x < 1.0) return -1.0;
  return 0.0;
}

}  // namespace

struct WaveletPair::Impl {
  WaveletFamily family = WaveletFamily::haar;
  int order = 0;
  std::vector<double> filter;  // Daubechies only
  Table f_table, m_table;
  Envelope env_f, env_m;
  double support_lo = -std::numeric_limits<double>::infinity();
  double support_hi = std::numeric_limits<double>::infinity();
  double table_step = 1.0;
  double quadrature_step = 1.0;
};

namespace {

std::shared_ptr<const WaveletPair::Impl> build_impl(WaveletFamily family, int order) {
  auto impl = std::make_shared<WaveletPair::Impl>();
  impl->family = family;
  impl->order = order;
  switch (family) {
    case WaveletFamily::haar:
      impl->env_f = Envelope::box(1.0, 1.0);
      impl->env_m = Envelope::box(1.0, 1.0);
      impl->support_lo = 0.0;
      impl->support_hi = 1.0;
      impl->table_step = std::ldexp(1.0, -10);
      impl->quadrature_step = std::ldexp(1.0, -9);
      break;
    case WaveletFamily::daubechies: {
      impl->filter = daubechies_filter(order);
      auto [phi, psi] = daubechies_tables(order);
      const double support = 2.0 * order - 1.0;
      impl->env_f = Envelope::box(phi.max_abs(), support);
      impl->env_m = Envelope::box(psi.max_abs(), support);
      impl->f_table = std::move(phi);
      impl->m_table = std::move(psi);
      impl->support_lo = 0.0;
      impl->support_hi = support;
      impl->table_step = std::ldexp(1.0, -kCascadeLevels);
      impl->quadrature_step = std::ldexp(1.0, -7);
      break;
    }
    case WaveletFamily::meyer: {
      auto [phi, psi] = meyer_tables();
      impl->env_f = majorant_envelope(phi);
      impl->env_m = majorant_envelope(psi);
      impl->f_table = std::move(phi);
      impl->m_table = std::move(psi);
      impl->table_step = std::ldexp(1.0, -kMeyerStepLog2);
      impl->quadrature_step = std::ldexp(1.0, -5);
      break;
    }
  }
  return impl;
}

cplx daubechies_m0(const std::vector<double>& h, double xi) {
  cplx sum = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) sum += h[k] * std::polar(1.0, -static_cast<double>(k) * xi);
  return sum / std::numbers::sqrt2;
}

cplx daubechies_m1(const std::vector<double>& h, double xi) {
  const std::size_t taps = h.size();
  cplx sum = 0.0;
  for (std::size_t k = 0; k < taps; ++k) {
    const double g = ((k % 2 == 0) ? 1.0 : -1.0) * h[taps - 1 - k];
    sum += g * std::polar(1.0, -static_cast<double>(k) * xi);
  }
  return sum / std::numbers::sqrt2;
}

cplx daubechies_phi_hat(const std::vector<double>& h, double y) {
  cplx prod = 1.0;
  double xi = 0.5 * y;
  for (int m = 0; m < 80 && std::abs(xi) > 1e-15; ++m, xi *= 0.5) prod *= daubechies_m0(h, xi);
  return prod;
}

}  // namespace

WaveletPair make_basis(WaveletFamily family, int order) {
  if (family == WaveletFamily::daubechies) daubechies_filter(order);  // validates the order
  if (family != WaveletFamily::daubechies) order = 0;
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const WaveletPair::Impl>> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(static_cast<int>(family), order);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_impl(family, order)).first;
  return WaveletPair(it->second);
}

WaveletPair make_basis(std::string_view spec) {
  if (spec == "haar") return make_basis(WaveletFamily::haar);
  if (spec == "meyer") return make_basis(WaveletFamily::meyer);
  if (spec == "daubechies:2") return make_basis(WaveletFamily::daubechies, 2);
  if (spec == "daubechies:3") return make_basis(WaveletFamily::daubechies, 3);
  if (spec == "daubechies:4") return make_basis(WaveletFamily::daubechies, 4);
  throw ValidationError("unknown basis spec '" + std::string(spec) +
                        "' (expected haar, daubechies:2|3|4 or meyer)");
}

WaveletFamily WaveletPair::family() const { return impl_->family; }
int WaveletPair::order() const { return impl_->order; }

std::string WaveletPair::spec() const {
  switch (impl_->family) {
    case WaveletFamily::haar:
      return "haar";
    case WaveletFamily::daubechies:
      return "daubechies:" + std::to_string(impl_->order);
    case WaveletFamily::meyer:
      return "meyer";
  }
  return {};
}

double WaveletPair::f_wavelet(double x) const {
  if (impl_->family == WaveletFamily::haar) return haar_phi(x);
  return impl_->f_table(x);
}

double WaveletPair::m_wavelet(double x) const {
  if (impl_->family == WaveletFamily::haar) return haar_psi(x);
  return impl_->m_table(x);
}

cplx WaveletPair::f_hat(double y) const {
  switch (impl_->family) {
    case WaveletFamily::haar:
      if (std::abs(y) < 1e-8) return cplx(1.0, -0.5 * y);
      return (1.0 - std::polar(1.0, -y)) / cplx(0.0, y);
    case WaveletFamily::daubechies:
      return daubechies_phi_hat(impl_->filter, y);
    case WaveletFamily::meyer:
      return meyer_phi_hat(y);
  }
  return 0.0;
}

cplx WaveletPair::m_hat(double y) const {
  switch (impl_->family) {
    case WaveletFamily::haar: {
      if (std::abs(y) < 1e-8) return cplx(0.0, 0.25 * y);
      const cplx a = 1.0 - std::polar(1.0, -0.5 * y);
      return a * a / cplx(0.0, y);
    }
    case WaveletFamily::daubechies:
      return daubechies_m1(impl_->filter, 0.5 * y) * daubechies_phi_hat(impl_->filter, 0.5 * y);
    case WaveletFamily::meyer:
      return std::polar(meyer_psi_modulus(y), -0.5 * y);
  }
  return 0.0;
}

const Envelope& WaveletPair::envelope_f() const { return impl_->env_f; }
const Envelope& WaveletPair::envelope_m() const { return impl_->env_m; }

bool WaveletPair::continuous() const { return impl_->family != WaveletFamily::haar; }

std::string WaveletPair::caveat() const {
  if (impl_->family == WaveletFamily::haar)
    return "discontinuous: mean-square convergence needs a continuous basis";
  return {};
}

double WaveletPair::table_step() const { return impl_->table_step; }
double WaveletPair::quadrature_step() const { return impl_->quadrature_step; }

double eval_dilated(const WaveletPair& basis, Which which, int j, long k, double t) {
  const double scale = std::ldexp(1.0, j);
  return std::sqrt(scale) * basis.evaluate(which, scale * t - static_cast<double>(k));
}

std::pair<double, double> effective_support(const WaveletPair& basis, Which which, int j, long k,
                                            double mass) {
  const double r = basis.envelope(which).effective_radius(mass);
  double lo = -r, hi = r;
  if (basis.family() != WaveletFamily::meyer) {
    lo = 0.0;
    hi = std::min(r, 2.0 * std::max(basis.order(), 1) - 1.0);
  }
  const double scale = std::ldexp(1.0, j);
  return {(lo + static_cast<double>(k)) / scale, (hi + static_cast<double>(k)) / scale};
}

// ---------------------------------------------------------------------------
// Lipschitz data for m_hat near zero

std::optional<double> lipschitz_constant(const WaveletPair& basis, double order) {
  if (!(order > 0.0)) throw ValidationError("lipschitz order must be positive");
  const cplx at_zero = basis.m_hat(0.0);
  auto ratio = [&](double z) { return std::abs(basis.m_hat(z) - at_zero) / std::pow(std::abs(z), order); };

  double band = 0.0;
  constexpr int kPerOctave = 128;
  for (double sign : {1.0, -1.0}) {
    int best = 0;
    double best_value = -1.0;
    for (int i = 0; i <= 10 * kPerOctave; ++i) {
      const double v = ratio(sign * std::exp2(static_cast<double>(i) / kPerOctave));
      if (v > best_value) best_value = v, best = i;
    }
    // golden-section polish between the neighbours of the best sample
    double a = std::exp2(static_cast<double>(std::max(best - 1, 0)) / kPerOctave);
    double b = std::exp2(static_cast<double>(std::min(best + 1, 10 * kPerOctave)) / kPerOctave);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 60; ++it) {
      const double c = b - g * (b - a), d = a + g * (b - a);
      const double fc = ratio(sign * c), fd = ratio(sign * d);
      best_value = std::max({best_value, fc, fd});
      (fc > fd ? b : a) = fc > fd ? d : c;
    }
    band = std::max(band, best_value);
  }
  double previous = band;
  double running = band;
  for (int m = 0; m <= 20; ++m) {
    const double z = std::ldexp(1.0, -m);
    previous = running;
    running = std::max({running, ratio(z), ratio(-z)});
  }
  if (!std::isfinite(running)) return std::nullopt;
  if (previous > 0.0 && running / previous > 1.05) return std::nullopt;
  if (previous == 0.0 && running > 0.0) return std::nullopt;
  return running;
}

LipschitzFit lipschitz_fit(const WaveletPair& basis, const std::vector<double>& orders) {
  if (orders.empty()) throw NumericError("lipschitz_fit: no candidate orders");
  std::optional<LipschitzFit> best;
  for (double order : orders) {
    auto c = lipschitz_constant(basis, order);
    if (c && (!best || order > best->order)) best = LipschitzFit{order, *c};
  }
  if (!best) throw NumericError("lipschitz_fit: no candidate order gives a stable constant");
  return *best;
}

// ---------------------------------------------------------------------------
// Gram matrix

Eigen::MatrixXd gram_matrix(const WaveletPair& basis, int j_max, long k_max) {
  struct Sampled {
    long first = 0;
    Eigen::VectorXd values;
  };
  const double base = basis.family() == WaveletFamily::meyer ? basis.quadrature_step() : basis.table_step();
  const double h = std::ldexp(base, -j_max);
  std::vector<Sampled> fns;
  auto sample = [&](Which which, int j, long k) {
    auto [lo, hi] = effective_support(basis, which, j, k);
    Sampled s;
    s.first = static_cast<long>(std::floor(lo / h));
    const long last = static_cast<long>(std::ceil(hi / h));
    s.values.resize(last - s.first + 1);
    for (long i = s.first; i <= last; ++i)
      s.values[i - s.first] = eval_dilated(basis, which, j, k, static_cast<double>(i) * h);
    fns.push_back(std::move(s));
  };
  for (long k = -k_max; k <= k_max; ++k) sample(Which::f, 0, k);
  for (int j = 0; j <= j_max; ++j)
    for (long k = -k_max; k <= k_max; ++k) sample(Which::m, j, k);

  const auto n = static_cast<Eigen::Index>(fns.size());
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a; b < n; ++b) {
      const Sampled& fa = fns[static_cast<std::size_t>(a)];
      const Sampled& fb = fns[static_cast<std::size_t>(b)];
      const long lo = std::max(fa.first, fb.first);
      const long hi = std::min(fa.first + static_cast<long>(fa.values.size()),
                               fb.first + static_cast<long>(fb.values.size()));
      if (hi <= lo) continue;
      const double dot = fa.values.segment(lo - fa.first, hi - lo).dot(fb.values.segment(lo - fb.first, hi - lo));
      gram(a, b) = gram(b, a) = dot * h;
    }
  return gram;
}

}  // namespace lpwave
