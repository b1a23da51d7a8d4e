#include "htq/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace htq {

namespace {

constexpr double kNewtonTolerance = 1e-15;
constexpr int kNewtonMaxIterations = 100;

void check_order(int order) {
  if (order < 1 || order > kMaxGaussOrder) {
    throw InvalidArgument("quadrature: order " + std::to_string(order) + " outside [1, " +
                          std::to_string(kMaxGaussOrder) + "]");
  }
}

// Legendre P_n and P_n' at x via the three-term recurrence.
std::pair<double, double> legendre_with_slope(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
    p0 = p1;
    p1 = p2;
  }
  const double slope = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, slope};
}

GaussRule build_legendre(int order) {
  GaussRule rule;
  rule.kind = WeightKind::legendre;
  rule.order = order;
  rule.nodes.assign(static_cast<std::size_t>(order), 0.0);
  rule.weights.assign(static_cast<std::size_t>(order), 0.0);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // root i of P_K counted from x = 1, Chebyshev-angle start
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double slope = 1.0;
    int it = 0;
    for (; it < kNewtonMaxIterations; ++it) {
      auto [p, dp] = legendre_with_slope(order, x);
      const double dx = p / dp;
      x -= dx;
      slope = dp;
      if (std::abs(dx) <= kNewtonTolerance) break;
    }
    if (it == kNewtonMaxIterations) {
      throw InternalError("gauss_legendre: Newton iteration did not converge for K=" + std::to_string(order));
    }
    slope = legendre_with_slope(order, x).second;
    const double w = 1.0 / ((1.0 - x * x) * slope * slope);  // half of 2/((1-x^2)P'^2)
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(order - 1 - i);
    if (lo == hi) {
      rule.nodes[lo] = 0.5;
      rule.weights[lo] = w;
    } else {
      rule.nodes[lo] = 0.5 * (1.0 - x);
      rule.nodes[hi] = 0.5 * (1.0 + x);
      rule.weights[lo] = w;
      rule.weights[hi] = w;
    }
  }
  return rule;
}

GaussRule build_log(int order) {
  const int n = order;
  const auto moments = detail::log_weight_legendre_moments(2 * n);
  // rescale to moments against the monic shifted Legendre polynomials
  std::vector<double> monic(moments.size());
  double scale = 1.0;
  for (std::size_t k = 0; k < moments.size(); ++k) {
    if (k > 0) scale *= static_cast<double>(k) / (2.0 * (2.0 * static_cast<double>(k) - 1.0));
    monic[k] = moments[k] * scale;
  }
  const auto reference = detail::shifted_legendre_recurrence(2 * n);
  const auto rec = detail::modified_chebyshev(monic, reference, n);
  return detail::golub_welsch(rec, n, WeightKind::logjacobi);
}

void validate(const GaussRule& rule) {
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const bool inside = rule.nodes[i] > 0.0 && rule.nodes[i] < 1.0;
    const bool ascending = i == 0 || rule.nodes[i] > rule.nodes[i - 1];
    if (!inside || !ascending || !(rule.weights[i] > 0.0)) {
      throw InternalError("quadrature: rule of order " + std::to_string(rule.order) +
                          " failed node/weight validation at index " + std::to_string(i));
    }
  }
}

template <GaussRule (*Build)(int)>
const GaussRule& cached(int order) {
  check_order(order);
  static std::array<std::once_flag, kMaxGaussOrder + 1> flags;
  static std::array<std::unique_ptr<const GaussRule>, kMaxGaussOrder + 1> rules;
  const auto slot = static_cast<std::size_t>(order);
  std::call_once(flags[slot], [&] {
    auto rule = Build(order);
    validate(rule);
    rules[slot] = std::make_unique<const GaussRule>(std::move(rule));
  });
  return *rules[slot];
}

}  // namespace

const GaussRule& gauss_legendre(int order) { return cached<build_legendre>(order); }

const GaussRule& gauss_log(int order) { return cached<build_log>(order); }

namespace detail {

Recurrence shifted_legendre_recurrence(int n) {
  Recurrence rec;
  rec.alpha.assign(static_cast<std::size_t>(n), 0.5);
  rec.beta.assign(static_cast<std::size_t>(n), 0.0);
  if (n > 0) rec.beta[0] = 1.0;
  for (int k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k) * k;
    rec.beta[static_cast<std::size_t>(k)] = kk / (4.0 * (4.0 * kk - 1.0));
  }
  return rec;
}

std::vector<double> log_weight_legendre_moments(int count) {
  std::vector<double> m(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    m[static_cast<std::size_t>(k)] =
        k == 0 ? 1.0 : (k % 2 == 0 ? 1.0 : -1.0) / (static_cast<double>(k) * (k + 1.0));
  }
  return m;
}

Recurrence modified_chebyshev(std::span<const double> moments, const Recurrence& reference, int n) {
  const auto nn = static_cast<std::size_t>(n);
  if (moments.size() < 2 * nn || reference.alpha.size() < 2 * nn - 1 || reference.beta.size() < 2 * nn - 1) {
    throw InvalidArgument("modified_chebyshev: need 2n moments and 2n-1 reference coefficients");
  }
  if (moments[0] == 0.0) throw InternalError("modified_chebyshev: vanishing zeroth moment");
  const auto& a = reference.alpha;
  const auto& b = reference.beta;
  Recurrence out;
  out.alpha.assign(nn, 0.0);
  out.beta.assign(nn, 0.0);
  // rolling rows sigma_{k-2,*}, sigma_{k-1,*}
  std::vector<double> prev2(2 * nn, 0.0);
  std::vector<double> prev(moments.begin(), moments.begin() + static_cast<std::ptrdiff_t>(2 * nn));
  std::vector<double> cur(2 * nn, 0.0);
  out.alpha[0] = a[0] + moments[1] / moments[0];
  out.beta[0] = moments[0];
  for (std::size_t k = 1; k < nn; ++k) {
    for (std::size_t l = k; l + k < 2 * nn; ++l) {
      cur[l] = prev[l + 1] - (out.alpha[k - 1] - a[l]) * prev[l] - out.beta[k - 1] * prev2[l] +
               b[l] * prev[l - 1];
    }
    if (cur[k] == 0.0 || prev[k - 1] == 0.0) {
      throw InternalError("modified_chebyshev: breakdown at step " + std::to_string(k));
    }
    out.alpha[k] = a[k] + cur[k + 1] / cur[k] - prev[k] / prev[k - 1];
    out.beta[k] = cur[k] / prev[k - 1];
    std::swap(prev2, prev);
    std::swap(prev, cur);
  }
  return out;
}

GaussRule golub_welsch(const Recurrence& rec, int n, WeightKind kind) {
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::VectorXd diag(nn);
  Eigen::VectorXd sub(std::max<Eigen::Index>(nn - 1, 1));
  for (Eigen::Index i = 0; i < nn; ++i) diag(i) = rec.alpha[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 1; i < nn; ++i) {
    const double beta = rec.beta[static_cast<std::size_t>(i)];
    if (!(beta > 0.0)) {
      throw InternalError("golub_welsch: non-positive recurrence coefficient beta_" + std::to_string(i));
    }
    sub(i - 1) = std::sqrt(beta);
  }
  GaussRule rule;
  rule.kind = kind;
  rule.order = n;
  if (n == 1) {
    rule.nodes = {diag(0)};
    rule.weights = {rec.beta[0]};
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(nn - 1), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw InternalError("golub_welsch: tridiagonal eigensolver did not converge for n=" + std::to_string(n));
  }
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < nn; ++j) {
    const double v0 = solver.eigenvectors()(0, j);
    rule.nodes[static_cast<std::size_t>(j)] = solver.eigenvalues()(j);
    rule.weights[static_cast<std::size_t>(j)] = rec.beta[0] * v0 * v0;
  }
  return rule;
}

}  // namespace detail

}  // namespace htq
