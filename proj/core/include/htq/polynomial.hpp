#pragma once

#include <vector>

#include "htq/mesh.hpp"

namespace htq {

/// Polynomial in monomial form, sum c[k] x^k.
struct Polynomial {
  std::vector<double> coeffs;

  [[nodiscard]] int degree() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs.size()) - 1; }
  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] Polynomial derivative() const;
  [[nodiscard]] Polynomial scaled(double factor) const;
};

/// Polynomial piece living on [a,b] in the local variable xi = (t - a)/(b - a).
struct PolyPiece {
  double a = 0.0;
  double b = 1.0;
  Polynomial local;

  [[nodiscard]] double width() const { return b - a; }
  [[nodiscard]] double value(double t) const { return local((t - a) / (b - a)); }
  /// d/dt of the piece (chain rule applied).
  [[nodiscard]] PolyPiece derivative() const;
};

/// Function on (0,T) that is polynomial on finitely many disjoint intervals
/// and zero elsewhere. Jumps at piece ends are allowed.
struct PiecewisePolynomial {
  std::vector<PolyPiece> pieces;

  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] PiecewisePolynomial derivative() const;
  [[nodiscard]] int max_degree() const;
};

/// Lobatto mode m of degree p as a monomial polynomial in xi.
Polynomial lobatto_polynomial(int p, int m);

/// Global basis function phi_i (or its derivative) as piecewise polynomial.
PiecewisePolynomial basis_function(const TemporalMesh& mesh, const DofMap& dofs, int i);

}  // namespace htq
