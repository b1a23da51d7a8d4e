#include "htq/polynomial.hpp"

#include <algorithm>

#include "htq/error.hpp"
#include "htq/shapefn.hpp"

namespace htq {

double Polynomial::operator()(double x) const {
  double v = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
  return v;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t k = 1; k < coeffs.size(); ++k) d.coeffs.push_back(static_cast<double>(k) * coeffs[k]);
  if (d.coeffs.empty()) d.coeffs.push_back(0.0);
  return d;
}

Polynomial Polynomial::scaled(double factor) const {
  Polynomial s = *this;
  for (auto& c : s.coeffs) c *= factor;
  return s;
}

PolyPiece PolyPiece::derivative() const { return {a, b, local.derivative().scaled(1.0 / (b - a))}; }

double PiecewisePolynomial::operator()(double t) const {
  for (const auto& piece : pieces) {
    if (t >= piece.a && t <= piece.b) return piece.value(t);
  }
  return 0.0;
}

PiecewisePolynomial PiecewisePolynomial::derivative() const {
  PiecewisePolynomial d;
  for (const auto& piece : pieces) d.pieces.push_back(piece.derivative());
  return d;
}

int PiecewisePolynomial::max_degree() const {
  int d = 0;
  for (const auto& piece : pieces) d = std::max(d, piece.local.degree());
  return d;
}

Polynomial lobatto_polynomial(int p, int m) {
  if (m < 0 || m > p || p > lobatto::kMaxDegree) throw InvalidArgument("lobatto_polynomial: bad mode");
  if (m == 0) return {{1.0, -1.0}};
  if (m == 1) return {{0.0, 1.0}};
  // shifted Legendre L_n(xi) = P_n(2 xi - 1) by recurrence on coefficients
  std::vector<std::vector<double>> leg(static_cast<std::size_t>(m) + 1);
  leg[0] = {1.0};
  leg[1] = {-1.0, 2.0};
  for (int n = 1; n + 1 <= m; ++n) {
    std::vector<double> next(static_cast<std::size_t>(n) + 2, 0.0);
    const auto& cur = leg[static_cast<std::size_t>(n)];
    const auto& prev = leg[static_cast<std::size_t>(n) - 1];
    for (std::size_t k = 0; k < cur.size(); ++k) {
      next[k] += -(2.0 * n + 1.0) * cur[k];
      next[k + 1] += 2.0 * (2.0 * n + 1.0) * cur[k];
    }
    for (std::size_t k = 0; k < prev.size(); ++k) next[k] -= n * prev[k];
    for (auto& c : next) c /= (n + 1.0);
    leg[static_cast<std::size_t>(n) + 1] = std::move(next);
  }
  // psi_m = int_0^xi L_{m-1}
  const auto& l = leg[static_cast<std::size_t>(m) - 1];
  Polynomial out;
  out.coeffs.assign(l.size() + 1, 0.0);
  for (std::size_t k = 0; k < l.size(); ++k) out.coeffs[k + 1] = l[k] / static_cast<double>(k + 1);
  return out;
}

PiecewisePolynomial basis_function(const TemporalMesh& mesh, const DofMap& dofs, int i) {
  if (i < 0 || i >= dofs.num_dofs()) throw InvalidArgument("basis_function: index out of range");
  PiecewisePolynomial f;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    for (int m = 0; m <= dofs.degree(e); ++m) {
      if (dofs.global(m, e) == i) {
        f.pieces.push_back({mesh.left(e), mesh.right(e), lobatto_polynomial(dofs.degree(e), m)});
      }
    }
  }
  return f;
}

}  // namespace htq
