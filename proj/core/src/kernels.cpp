#include "htq/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "htq/error.hpp"

namespace htq {

namespace {

constexpr double kPi = std::numbers::pi;

// ln(tan(x)/x) on [0, pi/2), x given directly; y = pi/2 - x passed when known
// more accurately than x.
double log_tan_ratio(double x, double y, double series_limit) {
  if (x < series_limit) {
    const double x2 = x * x;
    return x2 * (1.0 / 3.0 + x2 * (7.0 / 90.0 + x2 * (62.0 / 2835.0)));
  }
  if (x <= 0.25 * kPi) return std::log(std::tan(x) / x);
  return -std::log(std::tan(y)) - std::log(x);
}

}  // namespace

KernelContext::KernelContext(double horizon, double eps_series) : T_(horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw InvalidArgument("kernels: horizon T must be positive and finite");
  }
  eps_ = eps_series > 0.0 ? eps_series : 1e-4 * horizon;
  log_scale_ = std::log(kPi / (4.0 * horizon));
}

double KernelContext::logtan_over_x_closed(double r) const {
  if (!(r >= 0.0 && r < 2.0 * T_)) {
    throw DomainError("kernels: logtan_over_x needs 0 <= r < 2T");
  }
  const double scale = kPi / (4.0 * T_);
  return log_scale_ + log_tan_ratio(scale * r, scale * (2.0 * T_ - r), scale * eps_);
}

double KernelContext::logtan_over_x(double r) const {
  if (!(r > 0.0)) throw DomainError("kernels: logtan_over_x needs r > 0");
  return logtan_over_x_closed(r);
}

double KernelContext::log_tan(double r) const {
  if (!(r > 0.0 && r < 2.0 * T_)) throw DomainError("kernels: log_tan needs 0 < r < 2T");
  if (r <= T_) return logtan_over_x_closed(r) + std::log(r);
  const double q = 2.0 * T_ - r;
  return -logtan_over_x_closed(q) - std::log(q);
}

double KernelContext::calK(double s, double t) const {
  if (s == t) throw DomainError("kernels: calK is singular on the diagonal s = t");
  return -(log_tan(s + t) + log_tan(std::abs(t - s))) / kPi;
}

double KernelContext::K_cauchy(double s, double t) const {
  const double r = s + t;
  if (s == t || !(r > 0.0 && r < 2.0 * T_)) {
    throw DomainError("kernels: Cauchy kernel needs s != t and 0 < s + t < 2T");
  }
  const double c = kPi / (2.0 * T_);
  return (1.0 / std::sin(c * r) + 1.0 / std::sin(c * (s - t))) / (2.0 * T_);
}

double KernelContext::reg_factor(RegCase which, double s, double t) const {
  constexpr double slack = 1e-12;
  if (!(s >= -slack * T_ && s <= T_ * (1.0 + slack) && t >= -slack * T_ && t <= T_ * (1.0 + slack))) {
    throw DomainError("kernels: reg_factor arguments must lie in [0,T]");
  }
  s = std::clamp(s, 0.0, T_);
  t = std::clamp(t, 0.0, T_);
  const double r = s + t;
  const double d = logtan_over_x_closed(std::abs(s - t));
  const double q = 2.0 * T_ - r;
  switch (which) {
    case RegCase::origin:
      if (!(q > 0.0)) throw DomainError("kernels: origin factor needs s + t < 2T");
      return logtan_over_x_closed(r) + d;
    case RegCase::terminal:
      if (!(r > 0.0)) throw DomainError("kernels: terminal factor needs s + t > 0");
      if (r <= T_) return logtan_over_x_closed(r) + std::log(r) + std::log(q) + d;
      return -logtan_over_x_closed(q) + d;
    case RegCase::interior:
      return log_tan(r) + d;
    case RegCase::whole:
      if (r <= T_) return logtan_over_x_closed(r) + std::log(q) + d;
      return -logtan_over_x_closed(q) - std::log(r) + d;
  }
  throw InvalidArgument("kernels: unknown factor case");
}

}  // namespace htq
