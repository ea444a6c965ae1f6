#include "lpwave/process.hpp"

#include "lpwave/errors.hpp"
#include "lpwave/quadrature.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

namespace lpwave {

namespace {

Eigen::VectorXd check_grid() { return Eigen::VectorXd::LinSpaced(41, -10.0, 10.0); }

}  // namespace

ProcessModel ProcessModel::custom(Parts parts) {
  if (!parts.covariance) throw ValidationError("process model requires a covariance evaluator");
  if (!(parts.det_constant > 0.0)) throw ValidationError("determinative constant must be positive");
  const auto cov = parts.covariance;
  if (parts.gaussian) {
    if (parts.det_constant != 1.0) throw ValidationError("Gaussian models have determinative constant 1");
    auto sigma = [cov](double t) { return std::sqrt(std::max(0.0, cov(t, t))); };
    if (parts.tau_phi) {
      for (double t : check_grid())
        if (std::abs(parts.tau_phi(t) - sigma(t)) > 1e-12 * (1.0 + sigma(t)))
          throw ValidationError("Gaussian models need tau_phi(t) = sqrt(R(t,t))");
    }
    parts.tau_phi = sigma;
  } else if (!parts.tau_phi) {
    throw ValidationError("non-Gaussian models require a tau_phi evaluator");
  }

  const Eigen::VectorXd grid = check_grid();
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (!(cov(grid[i], grid[i]) >= 0.0)) throw ValidationError("covariance has a negative variance");
    for (Eigen::Index l = 0; l < i; ++l) {
      const double a = cov(grid[i], grid[l]), b = cov(grid[l], grid[i]);
      if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a))) throw ValidationError("covariance is not symmetric");
      if (parts.stationary) {
        const double lag = cov(grid[i] - grid[l], 0.0);
        if (std::abs(a - lag) > 1e-10 * (1.0 + std::abs(a)))
          throw ValidationError("stationary model covariance does not depend on t - s only");
      }
    }
  }
  ProcessModel model(std::move(parts));
  const Eigen::MatrixXd K = model.covariance_matrix(grid);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  if (es.eigenvalues().minCoeff() < -1e-10 * std::max(top, 0.0))
    throw ValidationError("covariance is not positive semidefinite on the check grid");
  return model;
}

double ProcessModel::spectral_density(double z) const {
  if (!parts_.spectral_density) throw ConfigurationError("model '" + parts_.spec + "' has no spectral density");
  return parts_.spectral_density(z);
}

std::complex<double> ProcessModel::double_transform(double z, double w) const {
  if (!parts_.double_transform)
    throw ConfigurationError("model '" + parts_.spec + "' has no double Fourier transform");
  return parts_.double_transform(z, w);
}

Eigen::MatrixXd ProcessModel::covariance_matrix(const Eigen::VectorXd& points) const {
  const Eigen::Index n = points.size();
  Eigen::MatrixXd K(n, n);
  if (parts_.stationary && n > 1) {
    // Uniform grids reuse one lag vector.
    const double h = points[1] - points[0];
    bool uniform = h > 0.0;
    for (Eigen::Index i = 1; uniform && i < n; ++i)
      uniform = std::abs(points[i] - points[0] - static_cast<double>(i) * h) <= 1e-12 * (1.0 + std::abs(points[i]));
    if (uniform) {
      Eigen::VectorXd lag(n);
      for (Eigen::Index m = 0; m < n; ++m) lag[m] = lag_covariance(static_cast<double>(m) * h);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index l = 0; l < n; ++l) K(i, l) = lag[std::abs(i - l)];
      return K;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index l = 0; l <= i; ++l) K(i, l) = K(l, i) = covariance(points[i], points[l]);
  return K;
}

ProcessModel make_ou(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ValidationError("ou model requires lambda > 0, got " + std::to_string(lambda));
  ProcessModel::Parts parts;
  parts.kind = ModelKind::ou;
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), lambda);
  parts.spec = "ou:" + std::string(buf, res.ptr);
  parts.covariance = [lambda](double t, double s) { return std::exp(-lambda * std::abs(t - s)); };
  parts.stationary = true;
  parts.spectral_density = [lambda](double z) { return 2.0 * lambda / (lambda * lambda + z * z); };
  parts.double_transform = {};
  return ProcessModel::custom(std::move(parts));
}

ProcessModel make_separable(std::function<double(double)> g, std::function<std::complex<double>(double)> g_hat,
                            std::string spec) {
  if (!g || !g_hat) throw ValidationError("separable model requires g and its Fourier transform");
  ProcessModel::Parts parts;
  parts.kind = ModelKind::separable;
  parts.spec = std::move(spec);
  parts.covariance = [g](double u, double v) { return g(u) * g(v); };
  parts.double_transform = [g_hat](double z, double w) { return g_hat(z) * g_hat(w); };
  return ProcessModel::custom(std::move(parts));
}

ProcessModel make_gauss_bump() {
  const double amp = std::sqrt(2.0 * std::numbers::pi);
  return make_separable([](double t) { return std::exp(-0.5 * t * t); },
                        [amp](double z) { return std::complex<double>(amp * std::exp(-0.5 * z * z), 0.0); },
                        "separable:gauss-bump");
}

ProcessModel parse_model(std::string_view spec) {
  if (spec == "separable:gauss-bump") return make_gauss_bump();
  constexpr std::string_view prefix = "ou:";
  if (spec.starts_with(prefix)) return make_ou(parse_decimal(spec.substr(prefix.size())));
  throw ValidationError("unknown model spec '" + std::string(spec) +
                        "' (expected ou:<lambda> or separable:gauss-bump)");
}

Eigen::VectorXd symmetric_grid(double L, double h) {
  if (!(L > 0.0) || !(h > 0.0)) throw ValidationError("grid requires L > 0 and h > 0");
  const double cells = 2.0 * L / h;
  if (cells > 1e4) throw ResourceError("grid [-L, L] with step h exceeds 10^4 points");
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells))
    throw ValidationError("grid step h must divide 2L exactly");
  const auto n = static_cast<Eigen::Index>(rounded) + 1;
  if (n > 10000) throw ResourceError("grid [-L, L] with step h exceeds 10^4 points");
  Eigen::VectorXd grid(n);
  for (Eigen::Index i = 0; i < n; ++i) grid[i] = -L + static_cast<double>(i) * h;
  return grid;
}

Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) {
    // Round-off pivots on a singular matrix would inject sqrt(eps) noise.
    const Eigen::VectorXd pivots = llt.matrixLLT().diagonal().cwiseAbs2();
    if (cov.rows() == 0 || pivots.minCoeff() >= 1e-10 * cov.diagonal().maxCoeff()) return llt.matrixL();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) throw NumericError("covariance eigen-decomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  const double top = std::max(ev.maxCoeff(), 0.0);
  if (ev.minCoeff() < -1e-10 * top)
    throw ValidationError("covariance matrix is indefinite beyond tolerance (min eigenvalue " +
                          std::to_string(ev.minCoeff()) + ")");
  // round-off sized eigenvalues of a singular matrix are zeroed too
  ev = (ev.array() <= 1e-12 * top).select(0.0, ev).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal();
}

Eigen::MatrixXd standard_normals(Eigen::Index rows, long first_path, long n_paths, std::uint64_t seed) {
  Eigen::MatrixXd z(rows, n_paths);
  for (long i = 0; i < n_paths; ++i) {
    const auto path = static_cast<std::uint64_t>(first_path + i);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    for (Eigen::Index r = 0; r < rows; ++r) z(r, i) = normal(rng);
  }
  return z;
}

Eigen::MatrixXd simulate_matrix(const ProcessModel& model, const Eigen::VectorXd& grid, long n_paths,
                                std::uint64_t seed) {
  if (!model.gaussian()) throw ConfigurationError("only Gaussian models can be simulated");
  if (n_paths < 1) throw ValidationError("n_paths must be at least 1");
  if (grid.size() > 10000) throw ResourceError("simulation grid exceeds 10^4 points");
  const Eigen::MatrixXd factor = covariance_factor(model.covariance_matrix(grid));
  return factor * standard_normals(grid.size(), 0, n_paths, seed);
}

std::vector<SamplePath> simulate_paths(const ProcessModel& model, double L, double h, long n_paths,
                                       std::uint64_t seed) {
  const Eigen::VectorXd grid = symmetric_grid(L, h);
  const Eigen::MatrixXd values = simulate_matrix(model, grid, n_paths, seed);
  std::vector<SamplePath> paths;
  paths.reserve(static_cast<std::size_t>(n_paths));
  for (long i = 0; i < n_paths; ++i) paths.push_back({grid, values.col(i), seed, i});
  return paths;
}

bool ModelValidation::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

ModelValidation validate_model(const ProcessModel& model, const WaveletPair& basis,
                               const std::function<double(double)>& c_bound, double T_check) {
  if (!c_bound) throw ValidationError("validate_model requires a bound function");
  if (!(T_check > 0.0)) throw ValidationError("validate_model requires T_check > 0");
  if (!(c_bound(0.0) > 1.0)) throw ValidationError("bound function must satisfy c(0) > 1");
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(401, -T_check, T_check);
  double prev = c_bound(0.0);
  for (Eigen::Index i = 200; i < grid.size(); ++i) {
    const double x = grid[i];
    const double v = c_bound(x);
    if (std::abs(v - c_bound(-x)) > 1e-12 * (1.0 + std::abs(v))) throw ValidationError("bound function must be even");
    if (v < prev * (1.0 - 1e-12)) throw ValidationError("bound function must be nondecreasing on [0, inf)");
    prev = v;
  }

  ModelValidation out;
  double worst = 0.0;
  bool dominated = true;
  for (double t : grid) {
    const double gap = model.tau_phi(t) - c_bound(t);
    worst = std::max(worst, gap);
    if (gap > 1e-12) dominated = false;
  }
  out.checks.push_back({"tau_phi <= c", dominated, "max excess " + std::to_string(worst)});

  for (Which which : {Which::f, Which::m}) {
    const Envelope& env = basis.envelope(which);
    bool finite = true;
    std::string detail;
    try {
      const double v = 2.0 * integrate_half_line([&](double x) { return c_bound(x) * env(x); }).value;
      finite = std::isfinite(v);
      detail = "integral " + std::to_string(v);
    } catch (const NumericError& e) {
      finite = false;
      detail = e.what();
    }
    out.checks.push_back({which == Which::f ? "int c * Phi_f < inf" : "int c * Phi_m < inf", finite, detail});
  }

  auto growth = [&](double a) {
    double ratio = 0.0;
    for (Eigen::Index i = 200; i < grid.size(); ++i) ratio = std::max(ratio, c_bound(a * grid[i]) / c_bound(grid[i]));
    return ratio;
  };
  out.growth_a2 = growth(2.0);
  out.growth_a4 = growth(4.0);
  const bool finite = std::isfinite(out.growth_a2) && std::isfinite(out.growth_a4);
  out.checks.push_back({"c(a x) <= c(x) A(a) on grid", finite,
                        "A(2) = " + std::to_string(out.growth_a2) + ", A(4) = " + std::to_string(out.growth_a4)});
  return out;
}

MinkowskiGap minkowski_gap(const ProcessModel& model, double T) {
  if (!(T > 0.0)) throw ValidationError("minkowski_gap requires T > 0");
  const QuadratureRule rule = simpson_rule(0.0, T, 512);
  const Eigen::MatrixXd K = model.covariance_matrix(rule.nodes);
  const double lhs2 = rule.weights.dot(K * rule.weights);
  if (lhs2 < -1e-10) throw NumericError("minkowski_gap: negative double integral " + std::to_string(lhs2));
  MinkowskiGap gap;
  gap.lhs = std::sqrt(std::max(lhs2, 0.0));
  gap.rhs = rule.weights.dot(K.diagonal().cwiseMax(0.0).cwiseSqrt());
  return gap;
}

}  // namespace lpwave
