#pragma once

#include "lpwave/process.hpp"
#include "lpwave/wavelet.hpp"

#include <Eigen/Dense>

#include <string>
#include <string_view>
#include <vector>

namespace lpwave {

/// Cuts of the truncated expansion: |k| <= k0_prime at the scaling level and
/// |k| <= levels[j] at detail level j < n. A cut of -1 keeps no terms.
struct TruncationScheme {
  long k0_prime = 0;
  std::vector<long> levels;

  int n() const { return static_cast<int>(levels.size()); }
  /// Number of retained coefficients.
  long size() const;
  /// True when every index of `inner` is also an index of this scheme.
  bool contains(const TruncationScheme& inner) const;
  /// "k0'=<int>;k=<int,...>".
  std::string spec() const;
  static TruncationScheme parse(std::string_view spec);

  bool operator==(const TruncationScheme&) const = default;
};

/// One retained basis function w_{jk}; j = 0 for the scaling level.
struct BasisTerm {
  Which which = Which::f;
  int j = 0;
  long k = 0;
};

/// Scaling terms by k, then detail terms by (j, k).
std::vector<BasisTerm> basis_terms(const TruncationScheme& scheme);

/// xi[k + k0_prime] and eta[j][k + k_j].
struct CoefficientSet {
  TruncationScheme scheme;
  Eigen::VectorXd xi;
  std::vector<Eigen::VectorXd> eta;

  double xi_at(long k) const { return xi[k + scheme.k0_prime]; }
  double eta_at(int j, long k) const { return eta[static_cast<std::size_t>(j)][k + scheme.levels[static_cast<std::size_t>(j)]]; }
  /// Coefficients in basis_terms order.
  Eigen::VectorXd flat() const;
  static CoefficientSet from_flat(const TruncationScheme& scheme, const Eigen::VectorXd& flat);
};

/// Row a integrates a path sampled on the uniform grid against term a by the
/// composite trapezoid rule. A term whose effective support (tail mass 1e-6)
/// leaves the grid throws DomainError naming it.
Eigen::MatrixXd coefficient_operator(const WaveletPair& basis, const TruncationScheme& scheme,
                                     const Eigen::VectorXd& grid);

/// Entry (i, a) is term a evaluated at t_grid[i].
Eigen::MatrixXd synthesis_operator(const WaveletPair& basis, const TruncationScheme& scheme,
                                   const Eigen::VectorXd& t_grid);

CoefficientSet compute_coefficients(const SamplePath& path, const WaveletPair& basis,
                                    const TruncationScheme& scheme);

Eigen::VectorXd reconstruct(const CoefficientSet& coeffs, const WaveletPair& basis,
                            const Eigen::VectorXd& t_grid);

/// int_0^T |d(t)|^p dt for samples d on a uniform grid by the trapezoid rule,
/// with linear interpolation in partial end cells.
double lp_integral(const Eigen::VectorXd& grid, const Eigen::VectorXd& diff, double p, double T);

/// int_0^T |X(t) - X_n(t)|^p dt, recon sampled on the path grid. Not the p-th root.
double lp_error(const SamplePath& path, const Eigen::VectorXd& recon, double p, double T);

/// E|eta_jk|^2 as a tensor Simpson double integral of R against psi_jk over
/// its effective support. Throws NumericError below -1e-8.
double second_moment_eta(const ProcessModel& model, const WaveletPair& basis, int j, long k);

/// E|xi_0k|^2, same quadrature with phi_0k.
double second_moment_xi(const ProcessModel& model, const WaveletPair& basis, long k);

/// (1 / 2^{j+1} pi) int R_hat(z) |psi_hat(z / 2^j)|^2 dz, the frequency-side
/// value of E|eta_jk|^2 for stationary models.
double second_moment_eta_spectral(const ProcessModel& model, const WaveletPair& basis, int j);

/// int |R_hat(z)| |z|^alpha dz. DivergenceError when the tail does not decay.
double spectral_weight(const ProcessModel& model, double alpha);

/// int int |R_hat_2(z, w)| |z|^alpha |w|^alpha dz dw.
double spectral_weight_2(const ProcessModel& model, double alpha);

/// C / (pi 2^{1 + j(1 + alpha)}) int |R_hat| |z|^alpha dz, C the squared
/// Lipschitz constant of psi_hat of order alpha / 2.
double second_moment_eta_spectral_bound(const ProcessModel& model, const WaveletPair& basis, int j,
                                        double alpha);

/// C^2 / ((2 pi)^2 2^{j(1 + 2 alpha)}) int int |R_hat_2| |z|^alpha |w|^alpha,
/// C the Lipschitz constant of psi_hat of order alpha.
double second_moment_eta_spectral_bound_ns(const ProcessModel& model, const WaveletPair& basis, int j,
                                           double alpha);

/// (1 / 2 pi) int |R_hat(z)| |phi_hat(z)|^2 dz.
double second_moment_xi_bound(const ProcessModel& model, const WaveletPair& basis);

/// (1 / 4 pi^2) int int |R_hat_2(z, w)| |phi_hat(z)| |phi_hat(w)| dz dw.
double second_moment_xi_bound_ns(const ProcessModel& model, const WaveletPair& basis);

}  // namespace lpwave
