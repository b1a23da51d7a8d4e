#pragma once

namespace htq {

/// Regularized kernel factors. With r = s + t and d = |s - t|:
///   origin   ln[tan(pi r/4T)/r * tan(pi d/4T)/d]             (first element, both corners at 0)
///   terminal ln[tan(pi r/4T) (2T - r) * tan(pi d/4T)/d]       (last element, corner at (T,T))
///   interior ln[tan(pi r/4T) * tan(pi d/4T)/d]
///   whole    ln[tan(pi r/4T) (2T - r)/r * tan(pi d/4T)/d]     (single-element mesh)
enum class RegCase { origin, terminal, interior, whole };

/// Stable evaluators for the logarithmic kernel
///   calK(s,t) = -(1/pi) ln[tan(pi (s+t)/4T) tan(pi |t-s|/4T)]
/// and its regularized pieces on [0,T]^2.
class KernelContext {
 public:
  /// eps_series <= 0 selects the default 1e-4 T.
  explicit KernelContext(double horizon, double eps_series = 0.0);

  [[nodiscard]] double horizon() const { return T_; }
  [[nodiscard]] double eps_series() const { return eps_; }

  /// ln(tan(pi r/4T)/r) for 0 < r < 2T.
  [[nodiscard]] double logtan_over_x(double r) const;
  /// Same, extended continuously to r = 0 by ln(pi/4T).
  [[nodiscard]] double logtan_over_x_closed(double r) const;
  /// ln tan(pi r/4T) for 0 < r < 2T; near 2T through the cotangent form.
  [[nodiscard]] double log_tan(double r) const;

  /// calK(s,t); DomainError on the diagonal or at (0,0).
  [[nodiscard]] double calK(double s, double t) const;
  /// Cauchy kernel (1/2T)[1/sin(pi(s+t)/2T) + 1/sin(pi(s-t)/2T)].
  [[nodiscard]] double K_cauchy(double s, double t) const;

  [[nodiscard]] double reg_factor(RegCase which, double s, double t) const;

 private:
  double T_;
  double eps_;
  double log_scale_;  // ln(pi/4T)
};

}  // namespace htq
