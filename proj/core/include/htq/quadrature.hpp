#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "htq/error.hpp"

namespace htq {

enum class WeightKind { legendre, logjacobi };

/// Gauss rule on [0,1]. Nodes ascending, weights positive.
///
/// legendre:  int_0^1 g(t) dt           = sum w_i g(x_i)  for deg g <= 2K-1
/// logjacobi: -int_0^1 g(t) ln(t) dt    = sum w_i g(x_i)  for deg g <= 2K-1
struct GaussRule {
  WeightKind kind = WeightKind::legendre;
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }

  template <class F>
  double apply(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

inline constexpr int kMaxGaussOrder = 64;

/// Gauss-Legendre rule of order K on [0,1]; built once per K and cached.
const GaussRule& gauss_legendre(int order);

/// Gauss rule for the weight -ln t on [0,1]; built once per K and cached.
/// Throws InternalError if the eigen step does not converge.
const GaussRule& gauss_log(int order);

/// Tensor Gauss-Legendre: sum_i sum_j wa_i wb_j G(xa_i, xb_j).
template <class G>
double tensor_apply(const GaussRule& first, const GaussRule& second, G&& integrand) {
  if (first.kind != WeightKind::legendre || second.kind != WeightKind::legendre) {
    throw InvalidArgument("tensor_apply: both rules must be Gauss-Legendre");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < first.size(); ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < second.size(); ++j) {
      inner += second.weights[j] * integrand(first.nodes[i], second.nodes[j]);
    }
    sum += first.weights[i] * inner;
  }
  return sum;
}

/// Visits the nodes of the rule for  int_0^1 int_0^1 g(s,t) ln|s - t| ds dt,
/// calling visit(weight, s, t) once per node. Exact for g in P^{2K-2}.
///
/// The unit square is split along the diagonal; on each triangle the Duffy
/// map leaves a ln of the radial and a ln of the angular variable, handled by
/// the -ln t rule while Gauss-Legendre covers the other direction.
template <class Visit>
void logtensor_nodes(int order, Visit&& visit) {
  const GaussRule& gl = gauss_legendre(order);
  const GaussRule& lg = gauss_log(order);
  const std::size_t k = gl.size();
  for (std::size_t mu = 0; mu < k; ++mu) {
    const double r = lg.nodes[mu];
    for (std::size_t nu = 0; nu < k; ++nu) {
      const double w = -lg.weights[mu] * r * gl.weights[nu];
      const double s = (1.0 - gl.nodes[nu]) * r;
      visit(w, s, r);
      visit(w, 1.0 - s, 1.0 - r);
    }
  }
  for (std::size_t mu = 0; mu < k; ++mu) {
    const double r = gl.nodes[mu];
    for (std::size_t nu = 0; nu < k; ++nu) {
      const double w = -gl.weights[mu] * r * lg.weights[nu];
      const double s = (1.0 - lg.nodes[nu]) * r;
      visit(w, s, r);
      visit(w, 1.0 - s, 1.0 - r);
    }
  }
}

/// Approximates int_0^1 int_0^1 g(s,t) ln|s - t| ds dt; exact on P^{2K-2}.
template <class G>
double logtensor_apply(int order, G&& integrand) {
  double sum = 0.0;
  logtensor_nodes(order, [&](double w, double s, double t) { sum += w * integrand(s, t); });
  return sum;
}

namespace detail {

/// Three-term recurrence p_{k+1} = (t - alpha_k) p_k - beta_k p_{k-1} of monic polynomials.
struct Recurrence {
  std::vector<double> alpha;
  std::vector<double> beta;
};

/// Monic shifted Legendre recurrence on [0,1], n terms.
Recurrence shifted_legendre_recurrence(int n);

/// int_0^1 -ln(t) L_k(t) dt for k = 0..count-1, L_k the shifted Legendre
/// polynomial normalized by L_k(1) = 1: 1 for k = 0, (-1)^k / (k (k+1)) else.
std::vector<double> log_weight_legendre_moments(int count);

/// Modified Chebyshev algorithm: recurrence of the measure from its 2n
/// modified moments with respect to the monic polynomials of `reference`.
Recurrence modified_chebyshev(std::span<const double> moments, const Recurrence& reference, int n);

/// Golub-Welsch: nodes/weights from the Jacobi matrix of a recurrence.
GaussRule golub_welsch(const Recurrence& rec, int n, WeightKind kind);

}  // namespace detail

}  // namespace htq
