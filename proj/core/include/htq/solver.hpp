#pragma once

#include <Eigen/Core>
#include <functional>
#include <string_view>
#include <vector>

#include "htq/assembly.hpp"
#include "htq/mesh.hpp"

namespace htq {

using ScalarFunction = std::function<double(double)>;

/// parabolic:  u' + mu u = f,        u(0) = 0
/// hyperbolic: u'' + mu u = f,       u(0) = u'(0) = 0
enum class OdeKind { parabolic, hyperbolic };

std::string_view to_string(OdeKind kind);
OdeKind ode_kind_from_string(std::string_view text);

struct OdeProblem {
  OdeKind kind = OdeKind::parabolic;
  double mu = 0.0;
  ScalarFunction f;
  ScalarFunction u_exact;
  ScalarFunction du_exact;

  /// InvalidArgument for mu < 0 or a missing right-hand side.
  void validate() const;
};

/// parabolic: tilde(A) + mu tilde(M); hyperbolic: tilde(B)^T + mu tilde(M).
Eigen::MatrixXd build_system(const OdeProblem& problem, const Eigen::MatrixXd& M, const Eigen::MatrixXd& A,
                             const Eigen::MatrixXd& B);

/// Coefficients of the L^2(0,T) projection of f onto the full discrete space.
/// Load integrals on the first element use geometric sub-panels, so f may
/// have an integrable singularity at t = 0.
Eigen::VectorXd project_l2(const ScalarFunction& f, const TemporalMesh& mesh, const DegreeVector& degrees,
                           const DofMap& dofs);

/// F[i] = sum_j f_j M[i+1, j] with f_j the projection coefficients; length M - 1.
Eigen::VectorXd build_rhs(const OdeProblem& problem, const TemporalMesh& mesh, const DegreeVector& degrees,
                          const DofMap& dofs, const Eigen::MatrixXd& M);

/// Dense LU with partial pivoting. SingularSystem when a pivot falls below 1e-300.
class LuFactorization {
 public:
  explicit LuFactorization(Eigen::MatrixXd matrix);

  [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  /// ||A||_inf ||A^-1||_inf, with the inverse formed column by column.
  [[nodiscard]] double condition_inf() const;
  [[nodiscard]] Eigen::Index size() const { return lu_.rows(); }

 private:
  Eigen::MatrixXd lu_;
  std::vector<Eigen::Index> perm_;
  double norm_inf_ = 0.0;
};

struct LinearSolve {
  Eigen::VectorXd x;
  /// ||Ax - b||_inf / (||A||_inf ||x||_inf)
  double residual = 0.0;
};

LinearSolve lu_solve(const Eigen::MatrixXd& system, const Eigen::VectorXd& rhs);

/// u_h = sum_j c_j phi_{j+1}: no component along the basis function nonzero at 0.
class DiscreteSolution {
 public:
  DiscreteSolution(TemporalMesh mesh, DegreeVector degrees, Eigen::VectorXd coefficients);

  [[nodiscard]] double value(double t) const;
  [[nodiscard]] double derivative(double t) const;
  /// Value and derivative on element e at local coordinate xi.
  [[nodiscard]] std::pair<double, double> local(int e, double xi) const;

  [[nodiscard]] const TemporalMesh& mesh() const { return mesh_; }
  [[nodiscard]] const DegreeVector& degrees() const { return degrees_; }
  [[nodiscard]] const Eigen::VectorXd& coefficients() const { return coefficients_; }

 private:
  TemporalMesh mesh_;
  DegreeVector degrees_;
  DofMap dofs_;
  Eigen::VectorXd coefficients_;
};

struct ErrorNorms {
  double l2 = 0.0;
  double h1semi = 0.0;
  /// sqrt(l2 * h1semi)
  double bracket = 0.0;
};

/// Element-wise Gauss-Legendre of the error and its derivative; the first
/// element is split geometrically toward t = 0.
ErrorNorms error_norms(const DiscreteSolution& solution, const ScalarFunction& u_exact,
                       const ScalarFunction& du_exact);

/// int_a^b g over geometric panels accumulating at a (ratio 1/4, `levels`
/// panels, innermost panel through t = a + eps x^4), Gauss-Legendre order `order`.
double graded_integral(const ScalarFunction& g, double a, double b, int order, int levels = 12);

struct SolveResult {
  DiscreteSolution solution;
  int num_dofs = 0;
  double residual = 0.0;
  double condition = 0.0;
};

/// Assembles, builds the system and right-hand side, solves.
SolveResult solve_problem(const OdeProblem& problem, const TemporalMesh& mesh, const DegreeVector& degrees,
                          const QuadConfig& q, int threads = 0);

enum class StudyKind { h, hp, single };

std::string_view to_string(StudyKind kind);
StudyKind study_kind_from_string(std::string_view text);

struct StudyParams {
  StudyKind kind = StudyKind::hp;
  double horizon = 1.0;
  /// h: uniform degree; ignored otherwise.
  int p = 2;
  /// hp: grading of the geometric mesh.
  double sigma = 0.17;
  /// Element counts of the levels (h: typically doubling, hp: Nmin..Nmax).
  std::vector<int> levels;
  /// single: the one mesh and degree vector.
  MeshSpec mesh;
  std::string degrees = "uniform:1";
  /// Gauss-Legendre knob K; other orders follow QuadConfig::with_K.
  int K = 20;
  int threads = 0;
};

struct StudyRow {
  int N = 0;
  int M = 0;
  ErrorNorms errors;
  double residual = 0.0;
  double condition = 0.0;
};

/// One row per level; needs u_exact and du_exact in the problem.
std::vector<StudyRow> run_study(const StudyParams& params, const OdeProblem& problem);

}  // namespace htq
