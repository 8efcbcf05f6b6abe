#pragma once

#include <limits>
#include <string>

namespace l0hawkes {

enum class KernelKind { Exponential, Power };

/// Normalized decay density phi_beta(u) = beta * f(beta * u) with
/// f(u) = exp(-u) (exponential) or eta * (1 + u)^(-eta - 1) (power, eta > 1).
/// eta is a fixed constant of the family; only beta is ever fitted.
class KernelFamily {
 public:
  static KernelFamily exponential() { return KernelFamily(KernelKind::Exponential, 0.0); }
  /// Throws InputError unless eta > 1.
  static KernelFamily power(double eta = 2.0);

  KernelKind kind() const { return kind_; }
  double eta() const { return eta_; }
  std::string name() const;

  /// Density at lag u >= 0.
  double phi(double beta, double u) const;
  double log_phi(double beta, double u) const;

  /// Integral of phi over [a, b], 0 <= a <= b. b may be +infinity.
  double interval_integral(double beta, double a, double b) const;

  /// Survival mass beyond u: integral of phi over [u, inf).
  double tail(double beta, double u) const;

  /// d/dbeta of interval_integral(beta, a, b) for finite b:
  ///   exponential: b e^{-beta b} - a e^{-beta a}
  ///   power:       eta b (1+beta b)^{-eta-1} - eta a (1+beta a)^{-eta-1}
  double d_interval_d_beta(double beta, double a, double b) const;

  /// d/dbeta of log_phi(beta, u): 1/beta - u (exp) or 1/beta - (eta+1)u/(1+beta u) (power).
  double d_log_phi_d_beta(double beta, double u) const;

  bool operator==(const KernelFamily&) const = default;

 private:
  KernelFamily(KernelKind kind, double eta) : kind_(kind), eta_(eta) {}

  KernelKind kind_;
  double eta_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace l0hawkes
