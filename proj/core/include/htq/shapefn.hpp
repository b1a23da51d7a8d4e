#pragma once

#include <span>

namespace htq::lobatto {

/// Largest supported local polynomial degree.
inline constexpr int kMaxDegree = 32;

/// Shifted Legendre polynomial L_n(xi) = P_n(2 xi - 1) on [0,1].
double legendre(int n, double xi);

// Hierarchical Lobatto shape functions on [0,1] for local degree p.
// Mode indices are 0-based: mode 0 is 1 - xi, mode 1 is xi, and mode m >= 2
// is the bubble  int_0^xi L_{m-1}, vanishing at both endpoints.

double psi(int p, int m, double xi);
double dpsi(int p, int m, double xi);
double d2psi(int p, int m, double xi);

/// Evaluates all p + 1 modes at once. Any of the output spans may be empty;
/// non-empty spans must hold at least p + 1 entries.
void eval_all(int p, double xi, std::span<double> values, std::span<double> first,
              std::span<double> second);

}  // namespace htq::lobatto
