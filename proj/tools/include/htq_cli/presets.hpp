#pragma once

#include <string>
#include <string_view>

#include "htq/solver.hpp"

namespace htq::cli {

/// Right-hand side presets of the solve command:
///   one            f = 1
///   poly:c0,c1,..  f = sum c_k t^k
///   tpow:alpha     u = t^alpha, f built from the ODE
/// The exact solution is attached when it is known in closed form
/// (one: every mu, poly: mu = 0, tpow: always).
struct RhsPreset {
  OdeProblem problem;
  bool has_exact = false;
  std::string description;
};

/// InvalidArgument on malformed text or a tpow exponent whose f is not in L^2.
RhsPreset make_preset(std::string_view text, OdeKind kind, double mu);

}  // namespace htq::cli
