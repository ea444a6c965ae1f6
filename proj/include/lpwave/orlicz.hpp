#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lpwave {

enum class NFamily { power, gaussian, custom };

/// An Orlicz N-function phi with its density f and Young-Fenchel conjugate.
///
/// Values are immutable once built. Custom N-functions are checked on the
/// grid {+-10^k : k = -6..1} U {0} for evenness, phi(0) = 0, convexity,
/// superlinear growth and a nondecreasing density; a violation throws
/// ValidationError.
class NFunction {
 public:
  using Evaluator = std::function<double(double)>;

  /// phi(x) = |x|^alpha / alpha for 1 < alpha <= 2.
  static NFunction power(double alpha);
  /// phi(x) = x^2 / 2.
  static NFunction gaussian();
  /// User-supplied phi. Without a density, f is a forward difference of phi.
  static NFunction custom(Evaluator phi, Evaluator density = {}, Evaluator conjugate = {});

  NFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }

  double phi(double x) const { return phi_(x); }
  bool has_analytic_density() const { return static_cast<bool>(density_); }
  bool has_closed_form_conjugate() const { return static_cast<bool>(conjugate_); }
  const Evaluator& closed_form_conjugate() const { return conjugate_; }
  const Evaluator& analytic_density() const { return density_; }

  /// lim_{x->0} phi(x)/x^2; +infinity is a legitimate value.
  double q_constant() const { return q_constant_; }

  /// Spec string: "gaussian", "power:<alpha>" or "custom".
  std::string spec() const;

 private:
  NFunction() = default;
  void validate() const;

  NFamily family_ = NFamily::custom;
  std::vector<double> params_;
  Evaluator phi_;
  Evaluator density_;
  Evaluator conjugate_;
  double q_constant_ = 0.0;
};

/// Young-Fenchel transform sup_y (x y - phi(y)); closed form when available.
double conjugate(const NFunction& nf, double x);

/// Numeric conjugate by golden-section search on the concave objective,
/// ignoring any closed form. Throws NumericError when no bracket is found.
double conjugate_numeric(const NFunction& nf, double x);

/// Density f(x) of phi for x >= 0. Throws ValidationError for x < 0.
double density(const NFunction& nf, double x);

/// Parses "gaussian" or "power:<alpha>" with a strict decimal alpha.
NFunction parse_nfunction(std::string_view spec);

/// Strict decimal parse: optional sign, digits, optional fraction, optional
/// exponent. Rejects trailing characters and non-finite values.
double parse_decimal(std::string_view text);

}  // namespace lpwave
