#pragma once

#include "lpwave/expansion.hpp"
#include "lpwave/orlicz.hpp"
#include "lpwave/process.hpp"
#include "lpwave/wavelet.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace lpwave {

struct TailBoundReport {
  double c = 0.0;
  double epsilon = 0.0;
  double threshold = 0.0;  // smallest valid epsilon
  double bound = 2.0;      // 2 exp(-phi*((epsilon / c)^(1/p)))
  bool valid = false;      // epsilon > threshold
  std::string route;       // "uniform" or "integral" when c is a rate constant
};

/// {"c", "epsilon", "threshold", "bound", "valid"} plus "route" when set.
nlohmann::json to_json(const TailBoundReport& report);

/// Root of eps = c (f(p (c/eps)^(1/p)))^p; closed forms for the gaussian and
/// power families, bisection otherwise.
double epsilon_threshold(const NFunction& nf, double c, double p);

/// The same root by bisection on the monotone crossing, ignoring closed forms.
double epsilon_threshold_numeric(const NFunction& nf, double c, double p);

TailBoundReport tail_probability_bound(const NFunction& nf, double c, double p, double epsilon);

/// E(X_n(t) - X(t))^2 at each t, from covariances: the coefficients are
/// Simpson functionals of X on a grid covering every retained term, so the
/// value is the variance of a discrete linear functional. At most 200
/// coefficients; ResourceError beyond that or when the grid is too large.
Eigen::VectorXd pointwise_ms_errors(const ProcessModel& model, const WaveletPair& basis,
                                    const TruncationScheme& scheme, const Eigen::VectorXd& t);

double pointwise_ms_error(const ProcessModel& model, const WaveletPair& basis, const TruncationScheme& scheme,
                          double t);

/// C_X^p int_0^T (E(X_n(t) - X(t))^2)^(p/2) dt by Simpson on 257 nodes.
double c_n_infty_integral(const ProcessModel& model, const WaveletPair& basis, const TruncationScheme& scheme,
                          double p, double T);

/// k-independent bounds on E|xi_0k|^2 and E|eta_jk|^2 = eta0 * ratio^j.
struct SpectralMoments {
  double xi = 0.0;
  double eta0 = 0.0;
  double ratio = 0.0;
  double alpha = 0.0;
  bool stationary = true;

  double eta(int j) const { return eta0 * std::pow(ratio, j); }
};

/// From the stationary spectral bounds when the model is stationary with a
/// spectral density, else from the double-transform bounds. A model with
/// neither is refused with ConfigurationError.
SpectralMoments spectral_moments(const ProcessModel& model, const WaveletPair& basis, double alpha);

/// J = min{n, min{j : k_j < 2^j T + 1}}.
int cutoff_level(const TruncationScheme& scheme, double T);

/// Uniform rate constant with level-j tail constants C_psi(2^j T, k_j) below J,
/// the full constant from J on, and the geometric remainder past
/// J + j_max_extra levels summed in closed form.
double c_n_infty_uniform(const SpectralMoments& moments, const WaveletPair& basis, const TruncationScheme& scheme,
                         double p, double T, double det_constant, int j_max_extra = 64);

double c_n_infty_uniform(const ProcessModel& model, const WaveletPair& basis, const TruncationScheme& scheme,
                         double p, double T, double alpha, int j_max_extra = 64);

struct SeriesReport {
  std::vector<double> terms;   // scaling term, then one term per detail level
  std::vector<double> ratios;  // consecutive detail-term ratios
  double partial_sum = 0.0;
  double tail_estimate = 0.0;  // geometric closure, infinite when divergent
  bool convergent = false;
};

/// Series sqrt(xi) C_phi + sum_j sqrt(eta_j) 2^{j/2} C_psi from explicit moments.
SeriesReport series_condition_check(double xi_moment, const std::vector<double>& eta_moments, double c_phi,
                                    double c_psi);

/// The same series with spectral moments, levels 0 .. j_probe.
SeriesReport series_condition_check(const ProcessModel& model, const WaveletPair& basis, double alpha, int j_probe);

/// k0' = ceil(T) + 1 + m, k_j = ceil(2^j T) + 1 + m for j < n.
TruncationScheme lattice_scheme(int n, int m, double T);

struct Plan {
  TruncationScheme scheme;
  TailBoundReport report;
  int n = 0;
  int m = 0;
};

constexpr int kPlanMaxLevels = 12;
constexpr int kPlanMaxShift = 64;

/// First lattice scheme in (n, m) row-major order whose uniform-route bound
/// is valid and at most delta. InfeasibleError carries the best bound seen.
Plan plan_truncation(const ProcessModel& model, const WaveletPair& basis, const NFunction& nf, double p, double T,
                     double epsilon, double delta, double alpha);

}  // namespace lpwave
