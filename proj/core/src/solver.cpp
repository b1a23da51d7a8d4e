#include "htq/solver.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <span>
#include <string>

#include "htq/error.hpp"
#include "htq/quadrature.hpp"
#include "htq/shapefn.hpp"

namespace htq {

namespace {

constexpr double kPivotFloor = 1e-300;
constexpr double kPanelRatio = 0.25;

std::string lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double norm_inf(const Eigen::MatrixXd& a) { return a.rows() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff(); }

// int_0^1 of g(xi) over element-local coordinates on every element, with
// the graded rule on element 0.
template <class Body>
void for_each_element_node(const TemporalMesh& mesh, const DegreeVector& degrees, int extra, int graded_order,
                           Body&& body) {
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double h = mesh.size(e);
    if (e == 0) {
      // panels [0,eps], then [eps 4^j, eps 4^(j+1)] up to h
      const int levels = 12;
      const GaussRule& gl = gauss_legendre(std::max(degrees[e] + extra, graded_order));
      double lo = h * std::pow(kPanelRatio, levels);
      for (std::size_t i = 0; i < gl.size(); ++i) {
        const double x = gl.nodes[i];
        const double xi = lo / h * x * x * x * x;
        body(e, xi, gl.weights[i] * 4.0 * lo * x * x * x);
      }
      for (int j = 0; j < levels; ++j) {
        const double hi = lo / kPanelRatio;
        for (std::size_t i = 0; i < gl.size(); ++i) {
          const double t = lo + (hi - lo) * gl.nodes[i];
          body(e, t / h, gl.weights[i] * (hi - lo));
        }
        lo = hi;
      }
      continue;
    }
    const GaussRule& gl = gauss_legendre(degrees[e] + extra);
    for (std::size_t i = 0; i < gl.size(); ++i) body(e, gl.nodes[i], gl.weights[i] * h);
  }
}

}  // namespace

std::string_view to_string(OdeKind kind) { return kind == OdeKind::parabolic ? "parabolic" : "hyperbolic"; }

OdeKind ode_kind_from_string(std::string_view text) {
  const auto s = lower(text);
  if (s == "parabolic") return OdeKind::parabolic;
  if (s == "hyperbolic") return OdeKind::hyperbolic;
  throw InvalidArgument("solver: unknown problem kind '" + std::string(text) + "'");
}

std::string_view to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::h:
      return "h";
    case StudyKind::hp:
      return "hp";
    case StudyKind::single:
      return "single";
  }
  return "?";
}

StudyKind study_kind_from_string(std::string_view text) {
  const auto s = lower(text);
  if (s == "h") return StudyKind::h;
  if (s == "hp") return StudyKind::hp;
  if (s == "single") return StudyKind::single;
  throw InvalidArgument("solver: unknown study '" + std::string(text) + "' (h, hp or single)");
}

void OdeProblem::validate() const {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidArgument("solver: mu must be finite and >= 0");
  if (!f) throw InvalidArgument("solver: right-hand side f is missing");
}

Eigen::MatrixXd build_system(const OdeProblem& problem, const Eigen::MatrixXd& M, const Eigen::MatrixXd& A,
                             const Eigen::MatrixXd& B) {
  if (M.rows() != M.cols() || A.rows() != M.rows() || A.cols() != M.cols() || B.rows() != M.rows() ||
      B.cols() != M.cols()) {
    throw InvalidArgument("build_system: M, A, B must be square of equal size");
  }
  const Eigen::MatrixXd base = problem.kind == OdeKind::parabolic ? tilde(A) : Eigen::MatrixXd(tilde(B).transpose());
  if (problem.mu == 0.0) return base;
  return base + problem.mu * tilde(M);
}

double graded_integral(const ScalarFunction& g, double a, double b, int order, int levels) {
  if (!(b > a)) throw InvalidArgument("graded_integral: need a < b");
  if (levels < 1) throw InvalidArgument("graded_integral: need at least one level");
  const GaussRule& gl = gauss_legendre(order);
  const double h = b - a;
  double lo = h * std::pow(kPanelRatio, levels);
  double sum = 0.0;
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double x = gl.nodes[i];
    sum += gl.weights[i] * 4.0 * lo * x * x * x * g(a + lo * x * x * x * x);
  }
  for (int j = 0; j < levels; ++j) {
    const double hi = lo / kPanelRatio;
    double panel = 0.0;
    for (std::size_t i = 0; i < gl.size(); ++i) panel += gl.weights[i] * g(a + lo + (hi - lo) * gl.nodes[i]);
    sum += (hi - lo) * panel;
    lo = hi;
  }
  return sum;
}

Eigen::VectorXd project_l2(const ScalarFunction& f, const TemporalMesh& mesh, const DegreeVector& degrees,
                           const DofMap& dofs) {
  const int n = dofs.num_dofs();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(n);
  std::vector<double> psi(static_cast<std::size_t>(lobatto::kMaxDegree) + 1);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const int p = degrees[e];
    const double h = mesh.size(e);
    const GaussRule& gl = gauss_legendre(p + 1);
    for (std::size_t q = 0; q < gl.size(); ++q) {
      lobatto::eval_all(p, gl.nodes[q], std::span(psi).first(static_cast<std::size_t>(p) + 1), {}, {});
      for (int a = 0; a <= p; ++a) {
        for (int b = 0; b <= p; ++b) {
          gram(dofs.global(a, e), dofs.global(b, e)) +=
              gl.weights[q] * h * psi[static_cast<std::size_t>(a)] * psi[static_cast<std::size_t>(b)];
        }
      }
    }
  }
  for_each_element_node(mesh, degrees, 4, 20, [&](int e, double xi, double w) {
    const int p = degrees[e];
    const double value = f(mesh.left(e) + xi * mesh.size(e));
    lobatto::eval_all(p, xi, std::span(psi).first(static_cast<std::size_t>(p) + 1), {}, {});
    for (int a = 0; a <= p; ++a) load(dofs.global(a, e)) += w * value * psi[static_cast<std::size_t>(a)];
  });
  try {
    return LuFactorization(gram).solve(load);
  } catch (const SingularSystem& err) {
    throw InternalError(std::string("project_l2: singular mass matrix: ") + err.what());
  }
}

Eigen::VectorXd build_rhs(const OdeProblem& problem, const TemporalMesh& mesh, const DegreeVector& degrees,
                          const DofMap& dofs, const Eigen::MatrixXd& M) {
  problem.validate();
  const int n = dofs.num_dofs();
  if (M.rows() != n || M.cols() != n) throw InvalidArgument("build_rhs: M does not match the DOF map");
  const Eigen::VectorXd coeffs = project_l2(problem.f, mesh, degrees, dofs);
  return M.bottomRows(n - 1) * coeffs;
}

LuFactorization::LuFactorization(Eigen::MatrixXd matrix) : lu_(std::move(matrix)) {
  if (lu_.rows() != lu_.cols()) throw InvalidArgument("lu: matrix must be square");
  if (!lu_.allFinite()) throw InvalidArgument("lu: matrix has non-finite entries");
  norm_inf_ = norm_inf(lu_);
  const Eigen::Index n = lu_.rows();
  perm_.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    lu_.col(k).tail(n - k).cwiseAbs().maxCoeff(&pivot);
    pivot += k;
    if (std::abs(lu_(pivot, k)) < kPivotFloor) {
      throw SingularSystem("lu: pivot " + std::to_string(k) + " below 1e-300, matrix is numerically singular");
    }
    if (pivot != k) {
      lu_.row(k).swap(lu_.row(pivot));
      std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(pivot)]);
    }
    const double inv = 1.0 / lu_(k, k);
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double factor = lu_(i, k) * inv;
      lu_(i, k) = factor;
      if (factor != 0.0) lu_.row(i).tail(n - k - 1) -= factor * lu_.row(k).tail(n - k - 1);
    }
  }
}

Eigen::VectorXd LuFactorization::solve(const Eigen::VectorXd& rhs) const {
  const Eigen::Index n = lu_.rows();
  if (rhs.size() != n) throw InvalidArgument("lu: right-hand side has the wrong length");
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = rhs(perm_[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < i; ++j) s -= lu_(i, j) * y(j);
    y(i) = s;
  }
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double s = y(i);
    for (Eigen::Index j = i + 1; j < n; ++j) s -= lu_(i, j) * y(j);
    y(i) = s / lu_(i, i);
  }
  return y;
}

double LuFactorization::condition_inf() const {
  const Eigen::Index n = lu_.rows();
  Eigen::MatrixXd inverse(n, n);
  for (Eigen::Index j = 0; j < n; ++j) inverse.col(j) = solve(Eigen::VectorXd::Unit(n, j));
  return norm_inf_ * norm_inf(inverse);
}

LinearSolve lu_solve(const Eigen::MatrixXd& system, const Eigen::VectorXd& rhs) {
  const LuFactorization lu(system);
  LinearSolve out;
  out.x = lu.solve(rhs);
  const double scale = norm_inf(system) * out.x.cwiseAbs().maxCoeff();
  const double r = (system * out.x - rhs).cwiseAbs().maxCoeff();
  out.residual = scale > 0.0 ? r / scale : r;
  return out;
}

DiscreteSolution::DiscreteSolution(TemporalMesh mesh, DegreeVector degrees, Eigen::VectorXd coefficients)
    : mesh_(std::move(mesh)), degrees_(std::move(degrees)), dofs_(mesh_, degrees_),
      coefficients_(std::move(coefficients)) {
  if (coefficients_.size() != dofs_.num_dofs() - 1) {
    throw InvalidArgument("DiscreteSolution: expected " + std::to_string(dofs_.num_dofs() - 1) + " coefficients");
  }
}

std::pair<double, double> DiscreteSolution::local(int e, double xi) const {
  const int p = degrees_[e];
  std::array<double, lobatto::kMaxDegree + 1> psi{};
  std::array<double, lobatto::kMaxDegree + 1> dpsi{};
  const auto count = static_cast<std::size_t>(p) + 1;
  lobatto::eval_all(p, xi, std::span(psi).first(count), std::span(dpsi).first(count), {});
  double v = 0.0;
  double dv = 0.0;
  for (int m = 0; m <= p; ++m) {
    const int g = dofs_.global(m, e);
    if (g == 0) continue;
    v += coefficients_(g - 1) * psi[static_cast<std::size_t>(m)];
    dv += coefficients_(g - 1) * dpsi[static_cast<std::size_t>(m)];
  }
  return {v, dv / mesh_.size(e)};
}

double DiscreteSolution::value(double t) const {
  const auto pts = mesh_.breakpoints();
  if (!(t >= 0.0 && t <= mesh_.horizon())) throw InvalidArgument("DiscreteSolution: t outside [0,T]");
  const auto it = std::upper_bound(pts.begin() + 1, pts.end() - 1, t);
  const int e = static_cast<int>(it - pts.begin()) - 1;
  return local(e, (t - mesh_.left(e)) / mesh_.size(e)).first;
}

double DiscreteSolution::derivative(double t) const {
  const auto pts = mesh_.breakpoints();
  if (!(t >= 0.0 && t <= mesh_.horizon())) throw InvalidArgument("DiscreteSolution: t outside [0,T]");
  const auto it = std::upper_bound(pts.begin() + 1, pts.end() - 1, t);
  const int e = static_cast<int>(it - pts.begin()) - 1;
  return local(e, (t - mesh_.left(e)) / mesh_.size(e)).second;
}

ErrorNorms error_norms(const DiscreteSolution& solution, const ScalarFunction& u_exact,
                       const ScalarFunction& du_exact) {
  if (!u_exact || !du_exact) throw InvalidArgument("error_norms: exact solution and derivative required");
  const TemporalMesh& mesh = solution.mesh();
  double l2 = 0.0;
  double h1 = 0.0;
  for_each_element_node(mesh, solution.degrees(), 6, 20, [&](int e, double xi, double w) {
    const double t = mesh.left(e) + xi * mesh.size(e);
    const auto [v, dv] = solution.local(e, xi);
    const double err = u_exact(t) - v;
    const double derr = du_exact(t) - dv;
    l2 += w * err * err;
    h1 += w * derr * derr;
  });
  ErrorNorms out;
  out.l2 = std::sqrt(l2);
  out.h1semi = std::sqrt(h1);
  out.bracket = std::sqrt(out.l2 * out.h1semi);
  return out;
}

SolveResult solve_problem(const OdeProblem& problem, const TemporalMesh& mesh, const DegreeVector& degrees,
                          const QuadConfig& q, int threads) {
  problem.validate();
  const DofMap dofs(mesh, degrees);
  if (dofs.num_dofs() < 2) throw InvalidArgument("solve: need at least two degrees of freedom");
  const GlobalSet set = assemble_all(mesh, degrees, dofs, q, threads);
  const Eigen::MatrixXd system = build_system(problem, set.M.values, set.A.values, set.B.values);
  const Eigen::VectorXd rhs = build_rhs(problem, mesh, degrees, dofs, set.M.values);
  const LuFactorization lu(system);
  Eigen::VectorXd x = lu.solve(rhs);
  const double scale = norm_inf(system) * x.cwiseAbs().maxCoeff();
  const double r = (system * x - rhs).cwiseAbs().maxCoeff();
  return SolveResult{DiscreteSolution(mesh, degrees, std::move(x)), dofs.num_dofs(), scale > 0.0 ? r / scale : r,
                     lu.condition_inf()};
}

std::vector<StudyRow> run_study(const StudyParams& params, const OdeProblem& problem) {
  problem.validate();
  if (!problem.u_exact || !problem.du_exact) throw InvalidArgument("run_study: exact solution required");
  std::vector<StudyRow> rows;
  auto run_level = [&](const TemporalMesh& mesh, const DegreeVector& degrees) {
    const QuadConfig q = QuadConfig::with_K(params.K, degrees.max());
    const SolveResult res = solve_problem(problem, mesh, degrees, q, params.threads);
    StudyRow row;
    row.N = mesh.num_elements();
    row.M = res.num_dofs;
    row.errors = error_norms(res.solution, problem.u_exact, problem.du_exact);
    row.residual = res.residual;
    row.condition = res.condition;
    rows.push_back(row);
  };
  switch (params.kind) {
    case StudyKind::h:
      if (params.levels.empty()) throw InvalidArgument("run_study: h study needs element counts");
      for (int N : params.levels) {
        run_level(TemporalMesh::uniform(N, params.horizon), DegreeVector::uniform(N, params.p));
      }
      break;
    case StudyKind::hp:
      if (params.levels.empty()) throw InvalidArgument("run_study: hp study needs element counts");
      for (int N : params.levels) {
        run_level(TemporalMesh::geometric(N, params.horizon, params.sigma), DegreeVector::linear_ramp(N));
      }
      break;
    case StudyKind::single: {
      const TemporalMesh mesh = params.mesh.build();
      run_level(mesh, parse_degree_spec(params.degrees, mesh.num_elements()));
      break;
    }
  }
  return rows;
}

}  // namespace htq
