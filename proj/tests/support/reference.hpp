#pragma once

#include <functional>
#include <random>
#include <vector>

#include "htq/mesh.hpp"
#include "htq/polynomial.hpp"

namespace htq::testing {

using Fn = std::function<double(double)>;

/// Tanh-sinh quadrature of int_a^b f(x) dx, refined by halving the step until
/// two levels agree to `tol` (relative). Endpoint singularities are fine as
/// long as f does not need the exact distance to the endpoint.
double tanh_sinh(const Fn& f, double a, double b, double tol = 1e-15);

/// int_0^L g(r) dr where g is evaluated at r computed without cancellation
/// near 0 (so g may carry a ln r or r^(-1/2) singularity at the origin).
double tanh_sinh_origin(const Fn& g, double L, double tol = 1e-15);

/// Reference for int_0^1 int_0^1 s^a t^b ln|s - t| ds dt: the inner integral
/// is split at s = t and both halves are written in the distance r = |s - t|.
double log_monomial_reference(int a, int b);

/// Random mesh with N elements on (0,T): breakpoints from sorted uniforms with
/// a minimum relative gap so no element degenerates.
TemporalMesh random_mesh(std::mt19937& rng, int N, double T);

/// Random degree vector with entries in [1, pmax].
DegreeVector random_degrees(std::mt19937& rng, int N, int pmax);

/// Random piecewise polynomial on (0,T): `pieces` disjoint intervals,
/// local monomial coefficients in [-1,1], degree up to `degree`.
PiecewisePolynomial random_piecewise(std::mt19937& rng, double T, int pieces, int degree);

}  // namespace htq::testing
