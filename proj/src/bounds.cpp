#include "lpwave/bounds.hpp"

#include "lpwave/errors.hpp"
#include "lpwave/quadrature.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace lpwave {

nlohmann::json to_json(const TailBoundReport& report) {
  nlohmann::json j;
  j["c"] = report.c;
  j["epsilon"] = report.epsilon;
  j["threshold"] = report.threshold;
  j["bound"] = report.bound;
  j["valid"] = report.valid;
  if (!report.route.empty()) j["route"] = report.route;
  return j;
}

namespace {

void check_c_p(double c, double p) {
  if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("c must be positive and finite");
  if (!(p >= 1.0) || !std::isfinite(p)) throw ValidationError("p must be at least 1");
}

}  // namespace

double epsilon_threshold(const NFunction& nf, double c, double p) {
  check_c_p(c, p);
  switch (nf.family()) {
    case NFamily::gaussian:
      return c * std::pow(p, 0.5 * p);
    case NFamily::power: {
      const double alpha = nf.params()[0];
      return c * std::pow(p, (alpha - 1.0) / alpha * p);
    }
    case NFamily::custom:
      break;
  }
  return epsilon_threshold_numeric(nf, c, p);
}

double epsilon_threshold_numeric(const NFunction& nf, double c, double p) {
  check_c_p(c, p);
  // g increases in eps: the subtracted term falls as eps grows.
  auto g = [&](double eps) { return eps - c * std::pow(density(nf, p * std::pow(c / eps, 1.0 / p)), p); };
  double lo = c, hi = c;
  for (int i = 0; g(lo) > 0.0; ++i) {
    lo *= 0.5;
    if (i > 200) throw NumericError("epsilon_threshold: no lower bracket");
  }
  for (int i = 0; g(hi) <= 0.0; ++i) {
    hi *= 2.0;
    if (i > 200 || !std::isfinite(hi)) throw NumericError("epsilon_threshold: no upper bracket");
  }
  for (int it = 0; it < 400 && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? hi : lo) = mid;
  }
  return hi;
}

TailBoundReport tail_probability_bound(const NFunction& nf, double c, double p, double epsilon) {
  check_c_p(c, p);
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon must be positive and finite");
  TailBoundReport report;
  report.c = c;
  report.epsilon = epsilon;
  report.threshold = epsilon_threshold(nf, c, p);
  report.bound = std::min(2.0, 2.0 * std::exp(-conjugate(nf, std::pow(epsilon / c, 1.0 / p))));
  report.valid = epsilon > report.threshold;
  return report;
}

// ---------------------------------------------------------------------------
// Integral route

Eigen::VectorXd pointwise_ms_errors(const ProcessModel& model, const WaveletPair& basis,
                                    const TruncationScheme& scheme, const Eigen::VectorXd& t) {
  if (scheme.size() > 200)
    throw ResourceError("integral route handles at most 200 coefficients, scheme has " + std::to_string(scheme.size()));
  Eigen::VectorXd out(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) out[i] = model.covariance(t[i], t[i]);
  const std::vector<BasisTerm> terms = basis_terms(scheme);
  if (terms.empty()) return out;

  int finest = 0;
  for (const auto& term : terms) finest = std::max(finest, term.j);
  const double h = std::ldexp(basis.quadrature_step(), -finest);
  struct Range {
    Eigen::Index first = 0, last = 0;
  };
  std::vector<Range> ranges(terms.size());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& term : terms) {
    const auto [a, b] = effective_support(basis, term.which, term.j, term.k);
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  lo = h * std::floor(lo / h);
  Eigen::Index cells = static_cast<Eigen::Index>(std::ceil((hi - lo) / h));
  cells += cells % 2;
  const Eigen::Index n = cells + 1;
  const Eigen::Index cap = model.stationary() ? 16384 : 8192;
  if (n > cap)
    throw ResourceError("integral route grid needs " + std::to_string(n) + " nodes (limit " + std::to_string(cap) + ")");

  Eigen::VectorXd u(n);
  for (Eigen::Index i = 0; i < n; ++i) u[i] = lo + static_cast<double>(i) * h;
  const Eigen::VectorXd w = simpson_weights(n, h);
  const auto m = static_cast<Eigen::Index>(terms.size());
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const BasisTerm& term = terms[static_cast<std::size_t>(a)];
    const auto [s0, s1] = effective_support(basis, term.which, term.j, term.k);
    Range& r = ranges[static_cast<std::size_t>(a)];
    r.first = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::floor((s0 - lo) / h)), 0, n - 1);
    r.last = std::clamp<Eigen::Index>(static_cast<Eigen::Index>(std::ceil((s1 - lo) / h)), 0, n - 1);
    for (Eigen::Index i = r.first; i <= r.last; ++i)
      B(i, a) = w[i] * eval_dilated(basis, term.which, term.j, term.k, u[i]);
  }

  // KB = K B with K the covariance on the nodes.
  Eigen::MatrixXd KB = Eigen::MatrixXd::Zero(n, m);
  if (model.stationary()) {
    Eigen::VectorXd lag(n);
    for (Eigen::Index i = 0; i < n; ++i) lag[i] = model.lag_covariance(static_cast<double>(i) * h);
    for (Eigen::Index a = 0; a < m; ++a) {
      const Range r = ranges[static_cast<std::size_t>(a)];
      for (Eigen::Index i = 0; i < n; ++i) {
        double s = 0.0;
        for (Eigen::Index l = r.first; l <= r.last; ++l) s += lag[std::abs(i - l)] * B(l, a);
        KB(i, a) = s;
      }
    }
  } else {
    Eigen::VectorXd row(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index l = 0; l < n; ++l) row[l] = model.covariance(u[i], u[l]);
      for (Eigen::Index a = 0; a < m; ++a) {
        const Range r = ranges[static_cast<std::size_t>(a)];
        KB(i, a) = row.segment(r.first, r.last - r.first + 1).dot(B.col(a).segment(r.first, r.last - r.first + 1));
      }
    }
  }
  Eigen::MatrixXd G(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const Range r = ranges[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < m; ++b)
      G(a, b) = B.col(a).segment(r.first, r.last - r.first + 1).dot(KB.col(b).segment(r.first, r.last - r.first + 1));
  }
  G = 0.5 * (G + G.transpose()).eval();

  for (Eigen::Index i = 0; i < t.size(); ++i) {
    Eigen::VectorXd e(m), b(m);
    for (Eigen::Index a = 0; a < m; ++a) {
      const BasisTerm& term = terms[static_cast<std::size_t>(a)];
      const Range r = ranges[static_cast<std::size_t>(a)];
      double s = 0.0;
      for (Eigen::Index l = r.first; l <= r.last; ++l)
        if (B(l, a) != 0.0) s += model.covariance(t[i], u[l]) * B(l, a);
      e[a] = s;
      b[a] = eval_dilated(basis, term.which, term.j, term.k, t[i]);
    }
    const double v = out[i] - 2.0 * b.dot(e) + b.dot(G * b);
    if (v < -1e-8 * std::max(1.0, out[i]))
      throw NumericError("pointwise mean-square error is negative: " + std::to_string(v));
    out[i] = std::max(v, 0.0);
  }
  return out;
}

double pointwise_ms_error(const ProcessModel& model, const WaveletPair& basis, const TruncationScheme& scheme,
                          double t) {
  return pointwise_ms_errors(model, basis, scheme, Eigen::VectorXd::Constant(1, t))[0];
}

double c_n_infty_integral(const ProcessModel& model, const WaveletPair& basis, const TruncationScheme& scheme,
                          double p, double T) {
  if (!(p >= 1.0)) throw ValidationError("p must be at least 1");
  if (!(T > 0.0)) throw ValidationError("T must be positive");
  const QuadratureRule rule = simpson_rule(0.0, T, 256);
  const Eigen::VectorXd ms = pointwise_ms_errors(model, basis, scheme, rule.nodes);
  const double integral = rule.weights.dot(ms.array().pow(0.5 * p).matrix());
  return std::pow(model.det_constant(), p) * integral;
}

// ---------------------------------------------------------------------------
// Uniform route

SpectralMoments spectral_moments(const ProcessModel& model, const WaveletPair& basis, double alpha) {
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  SpectralMoments mom;
  mom.alpha = alpha;
  if (model.stationary() && model.has_spectral_density()) {
    mom.stationary = true;
    mom.xi = second_moment_xi_bound(model, basis);
    mom.eta0 = second_moment_eta_spectral_bound(model, basis, 0, alpha);
    mom.ratio = std::exp2(-(1.0 + alpha));
  } else if (model.has_double_transform()) {
    mom.stationary = false;
    mom.xi = second_moment_xi_bound_ns(model, basis);
    mom.eta0 = second_moment_eta_spectral_bound_ns(model, basis, 0, alpha);
    mom.ratio = std::exp2(-(1.0 + 2.0 * alpha));
  } else {
    throw ConfigurationError("model '" + model.spec() +
                             "' has no spectral data: sup_k of the coefficient moments is unavailable");
  }
  return mom;
}

int cutoff_level(const TruncationScheme& scheme, double T) {
  for (int j = 0; j < scheme.n(); ++j)
    if (static_cast<double>(scheme.levels[static_cast<std::size_t>(j)]) < std::ldexp(T, j) + 1.0) return j;
  return scheme.n();
}

double c_n_infty_uniform(const SpectralMoments& moments, const WaveletPair& basis, const TruncationScheme& scheme,
                         double p, double T, double det_constant, int j_max_extra) {
  if (!(p >= 1.0)) throw ValidationError("p must be at least 1");
  if (!(T > 0.0)) throw ValidationError("T must be positive");
  if (j_max_extra < 1) throw ValidationError("j_max_extra must be positive");
  if (static_cast<double>(scheme.k0_prime) < T + 1.0)
    throw ConfigurationError("scaling cut k0' = " + std::to_string(scheme.k0_prime) + " is below T + 1");
  const int J = cutoff_level(scheme, T);
  const Envelope& env_f = basis.envelope_f();
  const Envelope& env_m = basis.envelope_m();
  const double full = envelope_constant(env_m);

  double sum = std::sqrt(moments.xi) * tail_constant(env_f, T, scheme.k0_prime);
  for (int j = 0; j < J; ++j)
    sum += std::sqrt(moments.eta(j)) * std::exp2(0.5 * j) *
           tail_constant(env_m, std::ldexp(T, j), scheme.levels[static_cast<std::size_t>(j)]);
  const double r = std::sqrt(moments.ratio * 2.0);
  if (!(r < 1.0)) throw DivergenceError("level series does not converge: term ratio " + std::to_string(r));
  double last = 0.0;
  for (int j = J; j < J + j_max_extra; ++j) {
    last = std::sqrt(moments.eta(j)) * std::exp2(0.5 * j) * full;
    sum += last;
  }
  sum += last * r / (1.0 - r);
  return std::pow(det_constant, p) * T * std::pow(sum, p);
}

double c_n_infty_uniform(const ProcessModel& model, const WaveletPair& basis, const TruncationScheme& scheme,
                         double p, double T, double alpha, int j_max_extra) {
  return c_n_infty_uniform(spectral_moments(model, basis, alpha), basis, scheme, p, T, model.det_constant(),
                           j_max_extra);
}

SeriesReport series_condition_check(double xi_moment, const std::vector<double>& eta_moments, double c_phi,
                                    double c_psi) {
  SeriesReport rep;
  rep.terms.push_back(std::sqrt(xi_moment) * c_phi);
  for (std::size_t j = 0; j < eta_moments.size(); ++j)
    rep.terms.push_back(std::sqrt(eta_moments[j]) * std::exp2(0.5 * static_cast<double>(j)) * c_psi);
  for (double v : rep.terms) rep.partial_sum += v;
  for (std::size_t i = 2; i < rep.terms.size(); ++i)
    rep.ratios.push_back(rep.terms[i - 1] > 0.0 ? rep.terms[i] / rep.terms[i - 1] : 0.0);
  if (rep.ratios.empty()) {
    rep.tail_estimate = std::numeric_limits<double>::infinity();
    return rep;
  }
  double worst = 0.0;
  const std::size_t window = std::min<std::size_t>(3, rep.ratios.size());
  for (std::size_t i = rep.ratios.size() - window; i < rep.ratios.size(); ++i) worst = std::max(worst, rep.ratios[i]);
  rep.convergent = worst < 1.0 - 1e-12;
  rep.tail_estimate = rep.convergent ? rep.terms.back() * worst / (1.0 - worst) : std::numeric_limits<double>::infinity();
  return rep;
}

SeriesReport series_condition_check(const ProcessModel& model, const WaveletPair& basis, double alpha, int j_probe) {
  if (j_probe < 1) throw ValidationError("j_probe must be at least 1");
  const SpectralMoments mom = spectral_moments(model, basis, alpha);
  std::vector<double> eta;
  for (int j = 0; j <= j_probe; ++j) eta.push_back(mom.eta(j));
  return series_condition_check(mom.xi, eta, envelope_constant(basis.envelope_f()),
                                envelope_constant(basis.envelope_m()));
}

TruncationScheme lattice_scheme(int n, int m, double T) {
  if (n < 0 || m < 0) throw ValidationError("lattice indices must be nonnegative");
  if (!(T > 0.0)) throw ValidationError("T must be positive");
  TruncationScheme s;
  s.k0_prime = static_cast<long>(std::ceil(T)) + 1 + m;
  for (int j = 0; j < n; ++j) s.levels.push_back(static_cast<long>(std::ceil(std::ldexp(T, j))) + 1 + m);
  return s;
}

Plan plan_truncation(const ProcessModel& model, const WaveletPair& basis, const NFunction& nf, double p, double T,
                     double epsilon, double delta, double alpha) {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  const SpectralMoments mom = spectral_moments(model, basis, alpha);
  double best = 2.0;
  for (int n = 1; n <= kPlanMaxLevels; ++n)
    for (int m = 0; m <= kPlanMaxShift; ++m) {
      const TruncationScheme scheme = lattice_scheme(n, m, T);
      const double c = c_n_infty_uniform(mom, basis, scheme, p, T, model.det_constant());
      TailBoundReport report = tail_probability_bound(nf, c, p, epsilon);
      report.route = "uniform";
      if (report.valid) best = std::min(best, report.bound);
      if (report.valid && report.bound <= delta) return {scheme, report, n, m};
    }
  std::ostringstream msg;
  msg << "no lattice scheme with n <= " << kPlanMaxLevels << ", m <= " << kPlanMaxShift
      << " reaches the target; best valid bound " << best << " > delta " << delta;
  throw InfeasibleError(msg.str(), best);
}

}  // namespace lpwave
