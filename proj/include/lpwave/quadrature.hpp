#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace lpwave {

/// Nodes and weights of a fixed quadrature rule.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;

  template <typename F>
  double apply(F&& f) const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

/// Gauss-Legendre rule of the given order on [-1, 1].
const QuadratureRule& gauss_legendre(int order);

/// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels.
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int order = 16);

/// Composite Simpson rule on [a, b]; `panels` must be even.
QuadratureRule simpson_rule(double a, double b, int panels);

/// Composite Simpson weights for n uniformly spaced samples with step h.
/// Falls back to a trapezoid end cell when n - 1 is odd.
Eigen::VectorXd simpson_weights(Eigen::Index n, double h);

/// Composite trapezoid integral of uniformly spaced samples.
double trapezoid(std::span<const double> values, double h);

template <typename F>
double integrate_gl(F&& f, double a, double b, int panels, int order = 16) {
  const QuadratureRule& gl = gauss_legendre(order);
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    double panel = 0.0;
    for (Eigen::Index i = 0; i < gl.nodes.size(); ++i)
      panel += gl.weights[i] * f(mid + 0.5 * width * gl.nodes[i]);
    sum += 0.5 * width * panel;
  }
  return sum;
}

/// Integral of f over [a, b] with panels graded geometrically toward `a`.
/// Resolves integrable power singularities at the left endpoint.
template <typename F>
double integrate_graded(F&& f, double a, double b, int levels = 60, int order = 16) {
  double sum = 0.0;
  double right = b;
  for (int m = 0; m < levels; ++m) {
    const double left = a + 0.5 * (right - a);
    sum += integrate_gl(f, left, right, 1, order);
    right = left;
  }
  return sum;
}

/// A rule on [0, inf) built from panels: graded toward zero, uniform up to a
/// cutoff, then geometric. Panel ids let callers inspect far-field decay.
struct HalfLineRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  std::vector<int> far_panel;  // -1 for near-field nodes, else geometric panel index
  int far_panels = 0;
};

struct HalfLineOptions {
  double max_width = 0.5;  // uniform panel width on [1, cutoff]
  double cutoff = 1024.0;
  int far_panels = 60;     // geometric panels [cutoff 2^m, cutoff 2^(m+1)]
  int order = 16;
  int near_levels = 30;    // geometric panels toward zero below 1
};

HalfLineRule half_line_rule(const HalfLineOptions& opts = {});

/// Result of an integral over [0, inf) with a geometric tail closure.
struct HalfLineIntegral {
  double value = 0.0;
  double tail_ratio = 0.0;  // fitted per-panel decay ratio of the far field
  double tail_estimate = 0.0;
};

/// Integrates f over [0, inf). The far-field panels decay geometrically for a
/// power-law integrand; a ratio at or above `divergence_ratio` throws
/// DivergenceError. The remainder past the last panel is closed analytically.
HalfLineIntegral integrate_half_line(const std::function<double(double)>& f,
                                     const HalfLineOptions& opts = {},
                                     double divergence_ratio = 0.999);

/// Integral of f over the real line (both half lines).
double integrate_real_line(const std::function<double(double)>& f,
                           const HalfLineOptions& opts = {});

}  // namespace lpwave
