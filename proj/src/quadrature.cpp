#include "lpwave/quadrature.hpp"

#include "lpwave/errors.hpp"

#include <map>
#include <mutex>
#include <numbers>

namespace lpwave {

namespace {

QuadratureRule compute_gauss_legendre(int order) {
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order) {
  const QuadratureRule& gl = gauss_legendre(order);
  QuadratureRule rule;
  rule.nodes.resize(static_cast<Eigen::Index>(panels) * order);
  rule.weights.resize(rule.nodes.size());
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    for (int i = 0; i < order; ++i) {
      rule.nodes[p * order + i] = mid + 0.5 * width * gl.nodes[i];
      rule.weights[p * order + i] = 0.5 * width * gl.weights[i];
    }
  }
  return rule;
}

QuadratureRule simpson_rule(double a, double b, int panels) {
  if (panels < 2 || panels % 2 != 0)
    throw ValidationError("simpson_rule: panel count must be even and positive");
  QuadratureRule rule;
  rule.nodes = Eigen::VectorXd::LinSpaced(panels + 1, a, b);
  rule.weights = simpson_weights(panels + 1, (b - a) / panels);
  return rule;
}

Eigen::VectorXd simpson_weights(Eigen::Index n, double h) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  if (n < 2) return w;
  if (n == 2) {
    w.setConstant(0.5 * h);
    return w;
  }
  // Simpson on the largest even number of panels, trapezoid on a leftover cell.
  Eigen::Index last = (n - 1) % 2 == 0 ? n - 1 : n - 2;
  for (Eigen::Index i = 0; i <= last; ++i) {
    double c = (i == 0 || i == last) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w[i] += c * h / 3.0;
  }
  if (last != n - 1) {
    w[n - 2] += 0.5 * h;
    w[n - 1] += 0.5 * h;
  }
  return w;
}

double trapezoid(std::span<const double> values, double h) {
  if (values.size() < 2) return 0.0;
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  return sum * h;
}

HalfLineRule half_line_rule(const HalfLineOptions& opts) {
  std::vector<double> nodes, weights;
  std::vector<int> panel_ids;
  const QuadratureRule& gl = gauss_legendre(opts.order);
  auto add_panel = [&](double a, double b, int id) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (Eigen::Index i = 0; i < gl.nodes.size(); ++i) {
      nodes.push_back(mid + half * gl.nodes[i]);
      weights.push_back(half * gl.weights[i]);
      panel_ids.push_back(id);
    }
  };
  // [0, 1]: graded toward zero.
  double right = 1.0;
  for (int m = 0; m < opts.near_levels; ++m) {
    add_panel(0.5 * right, right, -1);
    right *= 0.5;
  }
  add_panel(0.0, right, -1);
  // [1, cutoff]: octaves split into panels no wider than max_width.
  for (double a = 1.0; a < opts.cutoff; a *= 2.0) {
    const double b = std::min(2.0 * a, opts.cutoff);
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / opts.max_width)));
    for (int p = 0; p < pieces; ++p)
      add_panel(a + (b - a) * p / pieces, a + (b - a) * (p + 1) / pieces, -1);
  }
  double a = opts.cutoff;
  for (int m = 0; m < opts.far_panels; ++m, a *= 2.0) add_panel(a, 2.0 * a, m);

  HalfLineRule rule;
  rule.nodes = Eigen::Map<Eigen::VectorXd>(nodes.data(), static_cast<Eigen::Index>(nodes.size()));
  rule.weights = Eigen::Map<Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  rule.far_panel = std::move(panel_ids);
  rule.far_panels = opts.far_panels;
  return rule;
}

HalfLineIntegral integrate_half_line(const std::function<double(double)>& f,
                                     const HalfLineOptions& opts, double divergence_ratio) {
  const HalfLineRule rule = half_line_rule(opts);
  std::vector<double> far(static_cast<std::size_t>(rule.far_panels), 0.0);
  double near = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    const double v = rule.weights[i] * f(rule.nodes[i]);
    if (!std::isfinite(v)) throw NumericError("integrate_half_line: non-finite integrand");
    const int id = rule.far_panel[static_cast<std::size_t>(i)];
    if (id < 0)
      near += v;
    else
      far[static_cast<std::size_t>(id)] += v;
  }

  // Decay ratio from a log-linear fit over the trailing far-field panels.
  const int fit = std::min<int>(20, rule.far_panels);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int used = 0;
  for (int m = rule.far_panels - fit; m < rule.far_panels; ++m) {
    const double c = std::abs(far[static_cast<std::size_t>(m)]);
    if (c <= 0.0) continue;
    const double y = std::log2(c);
    sx += m;
    sy += y;
    sxx += double(m) * m;
    sxy += m * y;
    ++used;
  }
  HalfLineIntegral out;
  double total = near;
  for (double c : far) total += c;
  if (used >= 2) {
    const double slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
    out.tail_ratio = std::exp2(slope);
  }
  if (out.tail_ratio >= divergence_ratio)
    throw DivergenceError("integral over [0, inf) does not converge: far-field panel ratio " +
                          std::to_string(out.tail_ratio));
  const double last = far.empty() ? 0.0 : far.back();
  out.tail_estimate = out.tail_ratio > 0.0 ? last * out.tail_ratio / (1.0 - out.tail_ratio) : 0.0;
  out.value = total + out.tail_estimate;
  return out;
}

double integrate_real_line(const std::function<double(double)>& f, const HalfLineOptions& opts) {
  const double pos = integrate_half_line(f, opts).value;
  const double neg = integrate_half_line([&](double z) { return f(-z); }, opts).value;
  return pos + neg;
}

}  // namespace lpwave
