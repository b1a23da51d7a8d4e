#pragma once

#include <Eigen/Core>

#include "htq/matrix_kind.hpp"
#include "htq/mesh.hpp"

namespace htq {

/// Quadrature orders of the local schemes.
///
/// k_reg: Gauss-Legendre order of the regular (Duffy) parts and of every
///        non-polynomial smooth integrand; this is the study knob "K".
/// k_log: order of the -ln rule and of the log-tensor rule.
/// k1..k5: orders of the pieces of the ln(s+t) integral on the first element:
///        k1 for shape integrals, k2/k5 Gauss-Legendre partners of the
///        log parts, k3/k4 the log rules themselves.
struct QuadConfig {
  int k_reg = 12;
  int k_log = 4;
  int k1 = 12;
  int k2 = 12;
  int k3 = 12;
  int k4 = 12;
  int k5 = 12;

  /// K = max(ceil((pmax+1)/2), 12) everywhere, k_log = pmax + 3.
  static QuadConfig defaults(int pmax);
  /// k_reg = K; every other order is raised to its exactness bound when K is below it.
  static QuadConfig with_K(int K, int pmax);
  /// InvalidArgument when an order is outside [1,64] or below its bound for pmax.
  void validate(int pmax) const;
};

/// (p_k + 1) x (p_l + 1) block; row n is the local mode on element k, column m on element l.
using LocalBlock = Eigen::MatrixXd;

// Element indices are 0-based: element e spans [t_e, t_{e+1}].

LocalBlock local_M(int k, int l, const TemporalMesh& mesh, const DegreeVector& degrees, const QuadConfig& q);
LocalBlock local_A(int k, int l, const TemporalMesh& mesh, const DegreeVector& degrees, const QuadConfig& q);
LocalBlock local_B(int k, int l, const TemporalMesh& mesh, const DegreeVector& degrees, const QuadConfig& q);

/// J^0 (which = 0, kernel source at the left end of element k) or J^1
/// (which = 1, right end), one entry per local mode m of element l:
///   J[m] = int_0^1 psi_m'(eta) [ln tan(pi (s+t)/4T) + ln tan(pi |s-t|/4T)] d eta,
/// t = t_l + eta h_l.
Eigen::VectorXd compute_J(int k, int l, int which, const TemporalMesh& mesh, const DegreeVector& degrees,
                          const QuadConfig& q);

struct GlobalMatrix {
  MatrixKind kind = MatrixKind::M;
  Eigen::MatrixXd values;
  /// max h <= T/2; false still assembles.
  bool theorem41_ok = true;
};

struct GlobalSet {
  GlobalMatrix M;
  GlobalMatrix A;
  GlobalMatrix B;
};

/// Computes all local blocks (in parallel when threads != 1) and adds them in
/// lexicographic (k,l) order, so the result does not depend on the thread count.
GlobalMatrix assemble(MatrixKind kind, const TemporalMesh& mesh, const DegreeVector& degrees, const DofMap& dofs,
                      const QuadConfig& q, int threads = 0);
/// The three matrices sharing one pass over the element pairs.
GlobalSet assemble_all(const TemporalMesh& mesh, const DegreeVector& degrees, const DofMap& dofs,
                       const QuadConfig& q, int threads = 0);

/// Trailing (M-1) x (M-1) submatrix: drops the basis function nonzero at t = 0.
Eigen::MatrixXd tilde(const Eigen::MatrixXd& full);

}  // namespace htq
