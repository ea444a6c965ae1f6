#include "lpwave/expansion.hpp"

#include "lpwave/errors.hpp"
#include "lpwave/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <regex>
#include <sstream>

namespace lpwave {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// TruncationScheme

namespace {

// A cut of -1 keeps no terms at that level.
long cut_count(long k) { return k < 0 ? 0 : 2 * k + 1; }

}  // namespace

long TruncationScheme::size() const {
  long total = cut_count(k0_prime);
  for (long k : levels) total += cut_count(k);
  return total;
}

bool TruncationScheme::contains(const TruncationScheme& inner) const {
  if (inner.k0_prime > k0_prime) return false;
  for (std::size_t j = 0; j < inner.levels.size(); ++j) {
    if (inner.levels[j] < 0) continue;
    if (j >= levels.size() || inner.levels[j] > levels[j]) return false;
  }
  return true;
}

std::string TruncationScheme::spec() const {
  std::ostringstream out;
  out << "k0'=" << k0_prime << ";k=";
  for (std::size_t j = 0; j < levels.size(); ++j) out << (j ? "," : "") << levels[j];
  return out.str();
}

TruncationScheme TruncationScheme::parse(std::string_view spec) {
  static const std::regex pattern(R"(^k0'=(-?\d+);k=(-?\d+(,-?\d+)*)?$)");
  const std::string s(spec);
  std::smatch m;
  if (!std::regex_match(s, m, pattern))
    throw ValidationError("malformed scheme '" + s + "' (expected k0'=<int>;k=<int,...>)");
  auto to_long = [&](const std::string& text) {
    const long v = std::stol(text);
    if (v < -1) throw ValidationError("scheme cuts must be >= -1 in '" + s + "'");
    return v;
  };
  TruncationScheme scheme;
  scheme.k0_prime = to_long(m[1].str());
  if (m[2].matched) {
    std::stringstream list(m[2].str());
    std::string item;
    while (std::getline(list, item, ',')) scheme.levels.push_back(to_long(item));
  }
  return scheme;
}

std::vector<BasisTerm> basis_terms(const TruncationScheme& scheme) {
  std::vector<BasisTerm> terms;
  terms.reserve(static_cast<std::size_t>(scheme.size()));
  for (long k = -scheme.k0_prime; k <= scheme.k0_prime; ++k) terms.push_back({Which::f, 0, k});
  for (int j = 0; j < scheme.n(); ++j) {
    const long kj = scheme.levels[static_cast<std::size_t>(j)];
    for (long k = -kj; k <= kj; ++k) terms.push_back({Which::m, j, k});
  }
  return terms;
}

Eigen::VectorXd CoefficientSet::flat() const {
  Eigen::VectorXd out(scheme.size());
  Eigen::Index pos = 0;
  out.segment(pos, xi.size()) = xi;
  pos += xi.size();
  for (const auto& level : eta) {
    out.segment(pos, level.size()) = level;
    pos += level.size();
  }
  return out;
}

CoefficientSet CoefficientSet::from_flat(const TruncationScheme& scheme, const Eigen::VectorXd& flat) {
  if (flat.size() != scheme.size())
    throw ValidationError("coefficient vector length does not match the scheme");
  CoefficientSet set;
  set.scheme = scheme;
  Eigen::Index pos = 0;
  set.xi = flat.segment(pos, cut_count(scheme.k0_prime));
  pos += set.xi.size();
  for (long kj : scheme.levels) {
    set.eta.push_back(flat.segment(pos, cut_count(kj)));
    pos += cut_count(kj);
  }
  return set;
}

// ---------------------------------------------------------------------------
// Pathwise operators

namespace {

std::string describe(const BasisTerm& term) {
  std::ostringstream out;
  out << (term.which == Which::f ? "phi" : "psi") << " (j=" << term.j << ", k=" << term.k << ")";
  return out.str();
}

double uniform_step(const Eigen::VectorXd& grid) {
  if (grid.size() < 2) throw ValidationError("grid needs at least two points");
  const double h = (grid[grid.size() - 1] - grid[0]) / static_cast<double>(grid.size() - 1);
  if (!(h > 0.0)) throw ValidationError("grid must be strictly increasing");
  return h;
}

}  // namespace

Eigen::MatrixXd coefficient_operator(const WaveletPair& basis, const TruncationScheme& scheme,
                                     const Eigen::VectorXd& grid) {
  const std::vector<BasisTerm> terms = basis_terms(scheme);
  const double h = uniform_step(grid);
  const Eigen::Index n = grid.size();
  const double first = grid[0], last = grid[n - 1];
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(terms.size()), n);
  for (std::size_t a = 0; a < terms.size(); ++a) {
    const BasisTerm& term = terms[a];
    const auto [lo, hi] = effective_support(basis, term.which, term.j, term.k);
    const double slack = 1e-9 * (1.0 + std::abs(first) + std::abs(last));
    if (lo < first - slack || hi > last + slack) {
      std::ostringstream msg;
      msg << "path grid [" << first << ", " << last << "] does not cover the support [" << lo << ", " << hi
          << "] of " << describe(term);
      throw DomainError(msg.str());
    }
    const auto i0 = static_cast<Eigen::Index>(std::max(0.0, std::floor((lo - first) / h)));
    const auto i1 = std::min(n - 1, static_cast<Eigen::Index>(std::ceil((hi - first) / h)));
    for (Eigen::Index i = i0; i <= i1; ++i) {
      const double w = (i == 0 || i == n - 1) ? 0.5 * h : h;
      op(static_cast<Eigen::Index>(a), i) = w * eval_dilated(basis, term.which, term.j, term.k, grid[i]);
    }
  }
  return op;
}

Eigen::MatrixXd synthesis_operator(const WaveletPair& basis, const TruncationScheme& scheme,
                                   const Eigen::VectorXd& t_grid) {
  const std::vector<BasisTerm> terms = basis_terms(scheme);
  Eigen::MatrixXd op(t_grid.size(), static_cast<Eigen::Index>(terms.size()));
  for (std::size_t a = 0; a < terms.size(); ++a)
    for (Eigen::Index i = 0; i < t_grid.size(); ++i)
      op(i, static_cast<Eigen::Index>(a)) = eval_dilated(basis, terms[a].which, terms[a].j, terms[a].k, t_grid[i]);
  return op;
}

CoefficientSet compute_coefficients(const SamplePath& path, const WaveletPair& basis,
                                    const TruncationScheme& scheme) {
  if (path.grid.size() != path.values.size()) throw ValidationError("path grid and values differ in length");
  return CoefficientSet::from_flat(scheme, coefficient_operator(basis, scheme, path.grid) * path.values);
}

Eigen::VectorXd reconstruct(const CoefficientSet& coeffs, const WaveletPair& basis, const Eigen::VectorXd& t_grid) {
  return synthesis_operator(basis, coeffs.scheme, t_grid) * coeffs.flat();
}

double lp_integral(const Eigen::VectorXd& grid, const Eigen::VectorXd& diff, double p, double T) {
  if (!(p >= 1.0)) throw ValidationError("lp_error requires p >= 1");
  if (!(T > 0.0)) throw ValidationError("lp_error requires T > 0");
  if (grid.size() != diff.size()) throw ValidationError("lp_error: grid and values differ in length");
  const double h = uniform_step(grid);
  const Eigen::Index n = grid.size();
  const double slack = 1e-9 * h;
  if (grid[0] > slack || grid[n - 1] < T - slack) throw DomainError("[0, T] is not inside the path grid");

  auto value_at = [&](double t) {
    const double u = std::clamp((t - grid[0]) / h, 0.0, static_cast<double>(n - 1));
    const auto i = std::min(n - 2, static_cast<Eigen::Index>(u));
    const double frac = u - static_cast<double>(i);
    return diff[i] + frac * (diff[i + 1] - diff[i]);
  };
  auto power = [p](double v) { return p == 2.0 ? v * v : std::pow(std::abs(v), p); };

  auto i0 = static_cast<Eigen::Index>(std::ceil((0.0 - grid[0]) / h - 1e-9));
  auto i1 = static_cast<Eigen::Index>(std::floor((T - grid[0]) / h + 1e-9));
  i0 = std::clamp<Eigen::Index>(i0, 0, n - 1);
  i1 = std::clamp<Eigen::Index>(i1, 0, n - 1);
  if (i1 < i0) return 0.5 * T * (power(value_at(0.0)) + power(value_at(T)));

  double sum = 0.0;
  for (Eigen::Index i = i0; i < i1; ++i) sum += 0.5 * h * (power(diff[i]) + power(diff[i + 1]));
  const double left = grid[i0] - 0.0, right = T - grid[i1];
  if (left > slack) sum += 0.5 * left * (power(value_at(0.0)) + power(diff[i0]));
  if (right > slack) sum += 0.5 * right * (power(diff[i1]) + power(value_at(T)));
  return sum;
}

double lp_error(const SamplePath& path, const Eigen::VectorXd& recon, double p, double T) {
  if (recon.size() != path.values.size()) throw ValidationError("reconstruction length does not match the path");
  return lp_integral(path.grid, path.values - recon, p, T);
}

// ---------------------------------------------------------------------------
// Coefficient second moments

namespace {

double second_moment(const ProcessModel& model, const WaveletPair& basis, Which which, int j, long k) {
  if (j < 0) throw ValidationError("level j must be nonnegative");
  const auto [lo, hi] = effective_support(basis, which, 0, 0);
  const double hq = basis.quadrature_step();
  Eigen::Index cells = static_cast<Eigen::Index>(std::ceil((hi - lo) / hq));
  cells += cells % 2;
  const Eigen::Index n = cells + 1;
  const Eigen::VectorXd w = simpson_weights(n, hq);
  Eigen::VectorXd a(n);
  for (Eigen::Index i = 0; i < n; ++i) a[i] = w[i] * basis.evaluate(which, lo + static_cast<double>(i) * hq);

  // E|c|^2 = 2^-j int int R((x + k) / 2^j, (y + k) / 2^j) w(x) w(y) dx dy
  const double scale = std::ldexp(1.0, -j);
  double value = 0.0;
  if (model.stationary()) {
    for (Eigen::Index m = 0; m < n; ++m) {
      const double c = a.head(n - m).dot(a.tail(n - m));
      value += (m == 0 ? 1.0 : 2.0) * c * model.lag_covariance(static_cast<double>(m) * hq * scale);
    }
  } else {
    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) u[i] = (lo + static_cast<double>(i) * hq + static_cast<double>(k)) * scale;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (a[i] == 0.0) continue;
      double row = 0.5 * a[i] * model.covariance(u[i], u[i]);
      for (Eigen::Index l = 0; l < i; ++l) row += a[l] * model.covariance(u[i], u[l]);
      value += 2.0 * a[i] * row;
    }
  }
  value *= scale;
  if (value < -1e-8) throw NumericError("coefficient second moment is negative: " + std::to_string(value));
  return std::max(value, 0.0);
}

double lipschitz_or_throw(const WaveletPair& basis, double order) {
  const auto c = lipschitz_constant(basis, order);
  if (!c)
    throw ConfigurationError("m-wavelet transform of " + basis.spec() + " has no stable Lipschitz constant of order " +
                             std::to_string(order));
  return *c;
}

void require_stationary_spectrum(const ProcessModel& model) {
  if (!model.stationary() || !model.has_spectral_density())
    throw ConfigurationError("model '" + model.spec() + "' is not stationary with a spectral density");
}

void require_double_transform(const ProcessModel& model) {
  if (!model.has_double_transform())
    throw ConfigurationError("model '" + model.spec() + "' has no double Fourier transform");
}

/// int int |R_hat_2(z, w)| a(z) a(w) dz dw: the inner integral on a fixed
/// full-line rule, the outer one with the divergence test.
double plane_integral(const ProcessModel& model, const std::function<double(double)>& a) {
  HalfLineOptions opts;
  opts.cutoff = 64.0;
  opts.far_panels = 40;
  opts.order = 8;
  const HalfLineRule half = half_line_rule(opts);
  const Eigen::Index m = half.nodes.size();
  Eigen::VectorXd nodes(2 * m), weights(2 * m);
  nodes << half.nodes, -half.nodes;
  weights << half.weights, half.weights;
  Eigen::VectorXd aw(2 * m);
  for (Eigen::Index i = 0; i < 2 * m; ++i) aw[i] = weights[i] * a(nodes[i]);

  // The inner integrand must decay as well.
  integrate_half_line([&](double w) { return std::abs(model.double_transform(1.0, w)) * a(w); }, opts);

  auto inner = [&](double z) {
    const double az = a(z);
    if (az == 0.0) return 0.0;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < 2 * m; ++i)
      if (aw[i] != 0.0) sum += aw[i] * std::abs(model.double_transform(z, nodes[i]));
    return az * sum;
  };
  return integrate_half_line(inner, opts).value + integrate_half_line([&](double z) { return inner(-z); }, opts).value;
}

}  // namespace

double second_moment_eta(const ProcessModel& model, const WaveletPair& basis, int j, long k) {
  return second_moment(model, basis, Which::m, j, k);
}

double second_moment_xi(const ProcessModel& model, const WaveletPair& basis, long k) {
  return second_moment(model, basis, Which::f, 0, k);
}

double second_moment_eta_spectral(const ProcessModel& model, const WaveletPair& basis, int j) {
  require_stationary_spectrum(model);
  const double scale = std::ldexp(1.0, -j);
  const double integral = integrate_real_line([&](double z) {
    return std::abs(model.spectral_density(z)) * std::norm(basis.m_hat(z * scale));
  });
  return scale * integral / (2.0 * pi);
}

double spectral_weight(const ProcessModel& model, double alpha) {
  require_stationary_spectrum(model);
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  return integrate_real_line([&](double z) { return std::abs(model.spectral_density(z)) * std::pow(std::abs(z), alpha); });
}

double spectral_weight_2(const ProcessModel& model, double alpha) {
  require_double_transform(model);
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  return plane_integral(model, [alpha](double z) { return std::pow(std::abs(z), alpha); });
}

double second_moment_eta_spectral_bound(const ProcessModel& model, const WaveletPair& basis, int j, double alpha) {
  if (j < 0) throw ValidationError("level j must be nonnegative");
  require_stationary_spectrum(model);
  const double lip = lipschitz_or_throw(basis, 0.5 * alpha);
  const double weight = spectral_weight(model, alpha);
  return lip * lip * weight / (pi * std::exp2(1.0 + j * (1.0 + alpha)));
}

double second_moment_eta_spectral_bound_ns(const ProcessModel& model, const WaveletPair& basis, int j, double alpha) {
  if (j < 0) throw ValidationError("level j must be nonnegative");
  require_double_transform(model);
  const double lip = lipschitz_or_throw(basis, alpha);
  const double weight = spectral_weight_2(model, alpha);
  return lip * lip * weight / (4.0 * pi * pi * std::exp2(j * (1.0 + 2.0 * alpha)));
}

double second_moment_xi_bound(const ProcessModel& model, const WaveletPair& basis) {
  require_stationary_spectrum(model);
  return integrate_real_line([&](double z) {
           return std::abs(model.spectral_density(z)) * std::norm(basis.f_hat(z));
         }) / (2.0 * pi);
}

double second_moment_xi_bound_ns(const ProcessModel& model, const WaveletPair& basis) {
  require_double_transform(model);
  return plane_integral(model, [&](double z) { return std::abs(basis.f_hat(z)); }) / (4.0 * pi * pi);
}

}  // namespace lpwave
