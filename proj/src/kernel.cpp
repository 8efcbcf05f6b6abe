#include "l0hawkes/kernel.hpp"

#include <cmath>

#include "l0hawkes/error.hpp"

namespace l0hawkes {

KernelFamily KernelFamily::power(double eta) {
  if (!(eta > 1.0) || !std::isfinite(eta))
    throw InputError("power kernel requires eta > 1, got " + std::to_string(eta));
  return KernelFamily(KernelKind::Power, eta);
}

std::string KernelFamily::name() const {
  return kind_ == KernelKind::Exponential ? "exponential" : "power";
}

double KernelFamily::phi(double beta, double u) const {
  if (kind_ == KernelKind::Exponential) return beta * std::exp(-beta * u);
  return beta * eta_ * std::pow(1.0 + beta * u, -eta_ - 1.0);
}

double KernelFamily::log_phi(double beta, double u) const {
  if (kind_ == KernelKind::Exponential) return std::log(beta) - beta * u;
  return std::log(beta * eta_) - (eta_ + 1.0) * std::log1p(beta * u);
}

double KernelFamily::tail(double beta, double u) const {
  if (std::isinf(u)) return 0.0;
  if (kind_ == KernelKind::Exponential) return std::exp(-beta * u);
  return std::pow(1.0 + beta * u, -eta_);
}

double KernelFamily::interval_integral(double beta, double a, double b) const {
  if (!(b > a)) return 0.0;
  const double head = tail(beta, a);
  if (std::isinf(b)) return head;
  // head * (1 - tail(b)/tail(a)) avoids cancelling two nearly equal tails.
  if (kind_ == KernelKind::Exponential) return head * -std::expm1(-beta * (b - a));
  return head * -std::expm1(-eta_ * std::log1p(beta * (b - a) / (1.0 + beta * a)));
}

double KernelFamily::d_interval_d_beta(double beta, double a, double b) const {
  if (kind_ == KernelKind::Exponential) return b * std::exp(-beta * b) - a * std::exp(-beta * a);
  const auto term = [&](double x) { return eta_ * x * std::pow(1.0 + beta * x, -eta_ - 1.0); };
  return term(b) - term(a);
}

double KernelFamily::d_log_phi_d_beta(double beta, double u) const {
  if (kind_ == KernelKind::Exponential) return 1.0 / beta - u;
  return 1.0 / beta - (eta_ + 1.0) * u / (1.0 + beta * u);
}

}  // namespace l0hawkes
