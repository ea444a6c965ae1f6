#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lpwave {

/// A decreasing dominant Phi on [0, inf) with |w(x)| <= Phi(|x|).
class Envelope {
 public:
  using Evaluator = std::function<double(double)>;

  /// height * 1[x <= radius].
  static Envelope box(double height, double radius);
  /// height * (1 + x/scale)^(-power), power > 1.
  static Envelope rational(double height, double scale, double power);
  /// Piecewise-constant Phi(x) = levels[floor(x / step)], zero past the end.
  /// `levels` must be nonincreasing.
  static Envelope staircase(double step, std::vector<double> levels);
  /// Arbitrary Phi with its tail integral a -> int_a^inf Phi.
  static Envelope custom(Evaluator phi, Evaluator tail);

  double operator()(double x) const { return phi_(std::abs(x)); }
  double total_integral() const { return tail_(0.0); }
  double tail_integral(double a) const { return tail_(std::max(a, 0.0)); }

  /// Smallest radius r with 2 * int_r^inf Phi <= mass.
  double effective_radius(double mass) const;

  Envelope scaled(double factor) const;

 private:
  Evaluator phi_;
  Evaluator tail_;
};

/// C = 3 Phi(0) + 4 int_{1/2}^inf Phi, the bound on sup_x sum_k |w(x - k)|.
double envelope_constant(const Envelope& env);

/// C(T, k1) = int_{k1-T-1}^inf Phi + int_{k1-1}^inf Phi, the bound on
/// sup_{|x|<=T} sum_{|k|>=k1} |w(x - k)|. Requires k1 >= T + 1.
double tail_constant(const Envelope& env, double T, long k1);

enum class WaveletFamily { haar, daubechies, meyer };
enum class Which { f, m };  // f-wavelet (scaling) or m-wavelet

/// An orthonormal f-wavelet / m-wavelet pair with Fourier transforms
/// (hat w(y) = int e^{-iyx} w(x) dx) and decay envelopes.
///
/// Haar is analytic. Daubechies values come from the dyadic cascade on a grid
/// of step 2^-12; Meyer values come from the inverse Fourier transform on a
/// grid of step 2^-10. Off-grid points are linearly interpolated.
class WaveletPair {
 public:
  struct Impl;

  WaveletFamily family() const;
  int order() const;  // vanishing moments for Daubechies, 0 otherwise
  std::string spec() const;

  double f_wavelet(double x) const;
  double m_wavelet(double x) const;
  double evaluate(Which which, double x) const {
    return which == Which::f ? f_wavelet(x) : m_wavelet(x);
  }
  std::complex<double> f_hat(double y) const;
  std::complex<double> m_hat(double y) const;

  const Envelope& envelope_f() const;
  const Envelope& envelope_m() const;
  const Envelope& envelope(Which which) const {
    return which == Which::f ? envelope_f() : envelope_m();
  }

  /// False for Haar: the continuity hypothesis of the mean-square theory fails.
  bool continuous() const;
  /// Human-readable caveat, empty when none.
  std::string caveat() const;

  /// Step at which the mother functions are exactly representable
  /// (dyadic table step, or a breakpoint-aligned step for Haar).
  double table_step() const;
  /// Node spacing for covariance quadratures in the mother variable.
  double quadrature_step() const;

  explicit WaveletPair(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Builds "haar", "daubechies:N" (N in 2..4) or "meyer". Tables are computed
/// once per process and shared.
WaveletPair make_basis(std::string_view spec);
WaveletPair make_basis(WaveletFamily family, int order = 0);

/// 2^{j/2} w(2^j t - k).
double eval_dilated(const WaveletPair& basis, Which which, int j, long k, double t);

/// Envelope-based support [lo, hi] in t of w_{jk}, up to tail mass `mass`.
std::pair<double, double> effective_support(const WaveletPair& basis, Which which, int j, long k,
                                            double mass = 1e-6);

struct LipschitzFit {
  double order = 0.0;
  double constant = 0.0;
};

/// sup_z |m_hat(z) - m_hat(0)| / |z|^order over the dyadic points
/// {+-2^-m : m = 0..20} and a dense band grid on 1 <= |z| <= 2^10 (peak polished). Empty
/// when the running maximum keeps growing as the dyadic points approach 0
/// (refinement ratio above 1.05).
std::optional<double> lipschitz_constant(const WaveletPair& basis, double order);

/// Largest order among `orders` with a finite, stable constant.
/// Throws NumericError when the list is empty or no order stabilises.
LipschitzFit lipschitz_fit(const WaveletPair& basis, const std::vector<double>& orders);

/// Gram matrix of {phi_{0k} : |k| <= k_max} U {psi_{jk} : j <= j_max, |k| <= k_max}
/// by numeric inner products on a common uniform grid.
Eigen::MatrixXd gram_matrix(const WaveletPair& basis, int j_max, long k_max);

}  // namespace lpwave
