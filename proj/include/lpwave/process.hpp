#pragma once

#include "lpwave/orlicz.hpp"
#include "lpwave/wavelet.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace lpwave {

enum class ModelKind { ou, separable, custom };

/// A zero-mean second-order process: covariance, optional spectral data,
/// the sub-Gaussian generator and the determinative constant C_X.
class ProcessModel {
 public:
  using Covariance = std::function<double(double, double)>;
  using Spectrum = std::function<double(double)>;
  using Spectrum2 = std::function<std::complex<double>(double, double)>;
  using Scalar = std::function<double(double)>;

  struct Parts {
    ModelKind kind = ModelKind::custom;
    std::string spec = "custom";
    Covariance covariance;
    bool stationary = false;
    Spectrum spectral_density;  // R_hat(z) for stationary models
    Spectrum2 double_transform; // R_hat_2(z, w)
    NFunction nfunction = NFunction::gaussian();
    double det_constant = 1.0;
    Scalar tau_phi;             // defaults to sqrt(R(t,t)) for Gaussian models
    bool gaussian = true;
  };

  /// Checks symmetry, nonnegative variance, PSD covariance on a grid and
  /// (for stationary models) lag dependence. Throws ValidationError.
  static ProcessModel custom(Parts parts);

  ModelKind kind() const { return parts_.kind; }
  const std::string& spec() const { return parts_.spec; }
  double covariance(double t, double s) const { return parts_.covariance(t, s); }
  /// R(t - s) for stationary models.
  double lag_covariance(double tau) const { return parts_.covariance(tau, 0.0); }
  bool stationary() const { return parts_.stationary; }
  bool gaussian() const { return parts_.gaussian; }
  bool has_spectral_density() const { return static_cast<bool>(parts_.spectral_density); }
  bool has_double_transform() const { return static_cast<bool>(parts_.double_transform); }
  double spectral_density(double z) const;
  std::complex<double> double_transform(double z, double w) const;
  const NFunction& nfunction() const { return parts_.nfunction; }
  double det_constant() const { return parts_.det_constant; }
  double tau_phi(double t) const { return parts_.tau_phi(t); }

  /// Covariance matrix on the given points.
  Eigen::MatrixXd covariance_matrix(const Eigen::VectorXd& points) const;

 private:
  explicit ProcessModel(Parts parts) : parts_(std::move(parts)) {}
  Parts parts_;
};

/// Stationary Gaussian Ornstein-Uhlenbeck model R(t,s) = exp(-lambda |t - s|).
ProcessModel make_ou(double lambda);

/// X(t) = g(t) Z with Z standard normal; g_hat is the Fourier transform of g.
ProcessModel make_separable(std::function<double(double)> g,
                            std::function<std::complex<double>(double)> g_hat,
                            std::string spec = "separable:custom");

/// make_separable with g(t) = exp(-t^2/2).
ProcessModel make_gauss_bump();

/// "ou:<lambda>" or "separable:gauss-bump".
ProcessModel parse_model(std::string_view spec);

/// Uniform grid -L, -L + h, ..., L. Throws ValidationError unless 2L/h is an
/// integer (to 1e-9) and ResourceError above 10^4 points.
Eigen::VectorXd symmetric_grid(double L, double h);

struct SamplePath {
  Eigen::VectorXd grid;
  Eigen::VectorXd values;
  std::uint64_t seed = 0;
  long path_index = 0;

  double step() const { return grid.size() > 1 ? grid[1] - grid[0] : 0.0; }
};

/// A factor F with F F^T = K: Cholesky when no pivot is negligible, else an
/// eigen-decomposition with eigenvalues in [-1e-10, 1e-12] * max set to zero.
/// Indefinite beyond that throws ValidationError.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov);

/// Standard normal draws for paths first_path .. first_path + n_paths - 1,
/// one column per path. Column i depends only on (seed, first_path + i).
Eigen::MatrixXd standard_normals(Eigen::Index rows, long first_path, long n_paths, std::uint64_t seed);

/// Gaussian paths on the grid, one column per path.
Eigen::MatrixXd simulate_matrix(const ProcessModel& model, const Eigen::VectorXd& grid, long n_paths,
                                std::uint64_t seed);

/// Exact joint Gaussian samples of the model on symmetric_grid(L, h).
std::vector<SamplePath> simulate_paths(const ProcessModel& model, double L, double h, long n_paths,
                                       std::uint64_t seed);

struct ModelCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ModelValidation {
  std::vector<ModelCheck> checks;
  double growth_a2 = 0.0;  // estimated A(2)
  double growth_a4 = 0.0;  // estimated A(4)
  bool passed() const;
};

/// Checks tau_phi <= c on [-T_check, T_check], integrability of c * Phi for
/// both envelopes and the growth condition c(a x) <= c(x) A(a), a in {2, 4},
/// on a finite grid. c must be even, nondecreasing on [0, inf) with c(0) > 1;
/// otherwise ValidationError.
ModelValidation validate_model(const ProcessModel& model, const WaveletPair& basis,
                               const std::function<double(double)>& c_bound, double T_check);

struct MinkowskiGap {
  double lhs = 0.0;  // sqrt of int_0^T int_0^T R(t,s) dt ds
  double rhs = 0.0;  // int_0^T sqrt(R(t,t)) dt
};

/// Both sides by composite Simpson with 512 panels.
MinkowskiGap minkowski_gap(const ProcessModel& model, double T);

}  // namespace lpwave
