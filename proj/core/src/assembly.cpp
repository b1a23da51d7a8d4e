#include "htq/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "htq/error.hpp"
#include "htq/kernels.hpp"
#include "htq/parallel.hpp"
#include "htq/quadrature.hpp"
#include "htq/shapefn.hpp"

namespace htq {

namespace {

constexpr double kPi = std::numbers::pi;

int half_up(int n) { return (n + 1) / 2; }

enum class PairCase { first, last, whole, general };

enum class Shape { value, slope, curvature };

struct Pair {
  int k;
  int l;
  int N;
  double tk;  // left end of element k
  double tl;
  double hk;
  double hl;
  int pk;
  int pl;
  PairCase kind;

  Pair(int k_, int l_, const TemporalMesh& mesh, const DegreeVector& degrees) : k(k_), l(l_) {
    N = mesh.num_elements();
    if (degrees.size() != N) throw InvalidArgument("assembly: degree vector length differs from element count");
    if (k < 0 || k >= N || l < 0 || l >= N) {
      throw InvalidArgument("assembly: element pair (" + std::to_string(k) + "," + std::to_string(l) +
                            ") outside 0.." + std::to_string(N - 1));
    }
    tk = mesh.left(k);
    tl = mesh.left(l);
    hk = mesh.size(k);
    hl = mesh.size(l);
    pk = degrees[k];
    pl = degrees[l];
    if (N == 1) {
      kind = PairCase::whole;
    } else if (k == 0 && l == 0) {
      kind = PairCase::first;
    } else if (k == N - 1 && l == N - 1) {
      kind = PairCase::last;
    } else {
      kind = PairCase::general;
    }
  }
};

// Nodes of  int_0^1 int_0^1 f(eta) g(xi) ln-kernel(xi, eta) dxi deta,
// with f on element l (outer) and g on element k (inner):
//   sum_q w_q f(eta_q) g(xi_q) + log_outer (int f)(int g).
struct SquareRule {
  std::vector<double> w;
  std::vector<double> xi;
  std::vector<double> eta;
  double log_outer = 0.0;

  void add(double weight, double inner, double outer) {
    w.push_back(weight);
    xi.push_back(inner);
    eta.push_back(outer);
  }
};

// Kernel factor on both Duffy triangles of the square.
void add_regular(SquareRule& rule, const Pair& p, RegCase factor, const KernelContext& ker, int K) {
  const GaussRule& gl = gauss_legendre(K);
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double x = gl.nodes[i];
    for (std::size_t j = 0; j < gl.size(); ++j) {
      const double y = gl.nodes[j];
      const double wij = gl.weights[i] * gl.weights[j];
      double inner = (1.0 - x) * y;
      double outer = y;
      rule.add(wij * y * ker.reg_factor(factor, p.tk + inner * p.hk, p.tl + outer * p.hl), inner, outer);
      inner = x;
      outer = (1.0 - y) * x;
      rule.add(wij * x * ker.reg_factor(factor, p.tk + inner * p.hk, p.tl + outer * p.hl), inner, outer);
    }
  }
}

void add_log_tensor(SquareRule& rule, int order) {
  logtensor_nodes(order, [&](double w, double s, double t) { rule.add(w, s, t); });
}

// int int f(eta) g(xi) ln(xi + eta), optionally at the reflected points
// (1 - xi, 1 - eta), i.e. for ln(2 - xi - eta); scaled by `sign`.
void add_sum_log(SquareRule& rule, const QuadConfig& q, double sign, bool reflect) {
  auto put = [&](double w, double inner, double outer) {
    if (reflect) {
      rule.add(sign * w, 1.0 - inner, 1.0 - outer);
    } else {
      rule.add(sign * w, inner, outer);
    }
  };
  // triangle xi < eta: xi = x y, eta = y, weight y (ln y + ln(1 + x))
  {
    const GaussRule& lg = gauss_log(q.k3);
    const GaussRule& gl = gauss_legendre(q.k2);
    for (std::size_t a = 0; a < lg.size(); ++a) {
      const double y = lg.nodes[a];
      for (std::size_t b = 0; b < gl.size(); ++b) put(-lg.weights[a] * gl.weights[b] * y, gl.nodes[b] * y, y);
    }
  }
  // triangle eta < xi: xi = x, eta = x y, weight x (ln x + ln(1 + y))
  {
    const GaussRule& lg = gauss_log(q.k4);
    const GaussRule& gl = gauss_legendre(q.k5);
    for (std::size_t a = 0; a < lg.size(); ++a) {
      const double x = lg.nodes[a];
      for (std::size_t b = 0; b < gl.size(); ++b) put(-lg.weights[a] * gl.weights[b] * x, x, gl.nodes[b] * x);
    }
  }
  const GaussRule& gl = gauss_legendre(q.k_reg);
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double x = gl.nodes[i];
    for (std::size_t j = 0; j < gl.size(); ++j) {
      const double y = gl.nodes[j];
      const double wij = gl.weights[i] * gl.weights[j];
      put(wij * y * std::log1p(x), x * y, y);
      put(wij * x * std::log1p(y), x, x * y);
    }
  }
}

// Element k directly right of element l: s - t = xi h_k + (1 - eta) h_l.
void add_right_neighbour(SquareRule& rule, const Pair& p, const QuadConfig& q) {
  const GaussRule& lg = gauss_log(q.k_log);
  const GaussRule& gp = gauss_legendre(q.k5);
  const GaussRule& gl = gauss_legendre(q.k_reg);
  for (std::size_t a = 0; a < lg.size(); ++a) {
    const double r = lg.nodes[a];
    for (std::size_t b = 0; b < gp.size(); ++b) {
      const double x = gp.nodes[b];
      const double w = -lg.weights[a] * gp.weights[b] * r;
      rule.add(w, x * r, 1.0 - r);
      rule.add(w, r, 1.0 - r * (1.0 - x));
    }
  }
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double x = gl.nodes[i];
    for (std::size_t j = 0; j < gl.size(); ++j) {
      const double y = gl.nodes[j];
      const double wij = gl.weights[i] * gl.weights[j];
      rule.add(wij * y * std::log(x * p.hk + p.hl), x * y, 1.0 - y);
      rule.add(wij * x * std::log((1.0 - y) * p.hl + p.hk), x, 1.0 - x * (1.0 - y));
    }
  }
}

// Element k directly left of element l: t - s = (1 - xi) h_k + eta h_l.
void add_left_neighbour(SquareRule& rule, const Pair& p, const QuadConfig& q) {
  const GaussRule& lg = gauss_log(q.k_log);
  const GaussRule& gp = gauss_legendre(q.k5);
  const GaussRule& gl = gauss_legendre(q.k_reg);
  for (std::size_t a = 0; a < lg.size(); ++a) {
    const double y = lg.nodes[a];
    for (std::size_t b = 0; b < gp.size(); ++b) {
      const double x = gp.nodes[b];
      const double w = -lg.weights[a] * gp.weights[b] * y;
      rule.add(w, 1.0 - y, (1.0 - x) * y);
      rule.add(w, 1.0 - y * (1.0 - x), y);
    }
  }
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double x = gl.nodes[i];
    for (std::size_t j = 0; j < gl.size(); ++j) {
      const double y = gl.nodes[j];
      const double wij = gl.weights[i] * gl.weights[j];
      rule.add(wij * y * std::log(p.hk + (1.0 - x) * p.hl), 1.0 - y, (1.0 - x) * y);
      rule.add(wij * y * std::log((1.0 - x) * p.hk + p.hl), 1.0 - y * (1.0 - x), y);
    }
  }
}

void add_far(SquareRule& rule, const Pair& p, int K) {
  const GaussRule& gl = gauss_legendre(K);
  for (std::size_t i = 0; i < gl.size(); ++i) {
    const double x = gl.nodes[i];
    for (std::size_t j = 0; j < gl.size(); ++j) {
      const double y = gl.nodes[j];
      const double d = std::abs((p.tk + x * p.hk) - (p.tl + y * p.hl));
      rule.add(gl.weights[i] * gl.weights[j] * std::log(d), x, y);
    }
  }
}

SquareRule square_rule(const Pair& p, const KernelContext& ker, const QuadConfig& q) {
  SquareRule rule;
  switch (p.kind) {
    case PairCase::first:
      add_regular(rule, p, RegCase::origin, ker, q.k_reg);
      add_log_tensor(rule, q.k_log);
      add_sum_log(rule, q, 1.0, false);
      rule.log_outer = 2.0 * std::log(p.hl);
      break;
    case PairCase::last:
      // ln(2T - s - t) = ln h + ln(2 - xi - eta) cancels the ln h of ln|s - t|
      add_regular(rule, p, RegCase::terminal, ker, q.k_reg);
      add_log_tensor(rule, q.k_log);
      add_sum_log(rule, q, -1.0, true);
      break;
    case PairCase::whole:
      add_regular(rule, p, RegCase::whole, ker, q.k_reg);
      add_log_tensor(rule, q.k_log);
      add_sum_log(rule, q, 1.0, false);
      add_sum_log(rule, q, -1.0, true);
      rule.log_outer = std::log(p.hl);
      break;
    case PairCase::general:
      add_regular(rule, p, RegCase::interior, ker, q.k_reg);
      if (p.k == p.l) {
        add_log_tensor(rule, q.k_log);
        rule.log_outer = std::log(p.hl);
      } else if (p.k == p.l + 1) {
        add_right_neighbour(rule, p, q);
      } else if (p.k + 1 == p.l) {
        add_left_neighbour(rule, p, q);
      } else {
        add_far(rule, p, q.k_reg);
      }
      break;
  }
  return rule;
}

// rows: points, cols: modes 0..p
Eigen::MatrixXd mode_table(int p, Shape shape, const std::vector<double>& points) {
  Eigen::MatrixXd table(static_cast<Eigen::Index>(points.size()), p + 1);
  std::vector<double> buffer(static_cast<std::size_t>(p) + 1);
  std::span<double> out(buffer);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = std::clamp(points[i], 0.0, 1.0);
    switch (shape) {
      case Shape::value:
        lobatto::eval_all(p, x, out, {}, {});
        break;
      case Shape::slope:
        lobatto::eval_all(p, x, {}, out, {});
        break;
      case Shape::curvature:
        lobatto::eval_all(p, x, {}, {}, out);
        break;
    }
    for (int m = 0; m <= p; ++m) table(static_cast<Eigen::Index>(i), m) = buffer[static_cast<std::size_t>(m)];
  }
  return table;
}

Eigen::VectorXd mode_row(int p, Shape shape, double x) { return mode_table(p, shape, {x}).row(0).transpose(); }

// int_0^1 of each mode, Gauss-Legendre of order `order`
Eigen::VectorXd mode_integrals(int p, Shape shape, int order) {
  const GaussRule& gl = gauss_legendre(order);
  const Eigen::MatrixXd table = mode_table(p, shape, gl.nodes);
  const Eigen::Map<const Eigen::VectorXd> w(gl.weights.data(), static_cast<Eigen::Index>(gl.size()));
  return table.transpose() * w;
}

// int_0^1 f_m(eta) g(eta) d eta for Gauss-Legendre nodes with per-node factor g
Eigen::VectorXd weighted_integrals(int p, Shape shape, const GaussRule& rule, const std::vector<double>& factor) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(p + 1);
  const Eigen::MatrixXd table = mode_table(p, shape, rule.nodes);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    out += rule.weights[i] * factor[i] * table.row(static_cast<Eigen::Index>(i)).transpose();
  }
  return out;
}

// int int f_m(eta) g_n(xi) calK(...) dxi deta, rows n (inner), cols m (outer)
Eigen::MatrixXd apply_rule(const SquareRule& rule, const Pair& p, Shape inner, Shape outer, const QuadConfig& q) {
  const Eigen::MatrixXd g = mode_table(p.pk, inner, rule.xi);
  Eigen::MatrixXd f = mode_table(p.pl, outer, rule.eta);
  const Eigen::Map<const Eigen::VectorXd> w(rule.w.data(), static_cast<Eigen::Index>(rule.w.size()));
  f.array().colwise() *= w.array();
  Eigen::MatrixXd d = g.transpose() * f;
  if (rule.log_outer != 0.0) {
    d += rule.log_outer * mode_integrals(p.pk, inner, q.k1) * mode_integrals(p.pl, outer, q.k1).transpose();
  }
  return d * (-1.0 / kPi);
}

// int_0^1 f_m(eta) ln tan(pi (t_l + eta h_l)/4T) d eta
Eigen::VectorXd origin_log_integral(const Pair& p, Shape shape, const KernelContext& ker, const QuadConfig& q) {
  const GaussRule& gl = gauss_legendre(q.k_reg);
  std::vector<double> factor(gl.size());
  if (p.l == 0) {
    for (std::size_t i = 0; i < gl.size(); ++i) factor[i] = ker.logtan_over_x_closed(gl.nodes[i] * p.hl);
    Eigen::VectorXd out = weighted_integrals(p.pl, shape, gl, factor);
    out += std::log(p.hl) * mode_integrals(p.pl, shape, q.k1);
    const GaussRule& lg = gauss_log(q.k_log);
    out -= weighted_integrals(p.pl, shape, lg, std::vector<double>(lg.size(), 1.0));
    return out;
  }
  for (std::size_t i = 0; i < gl.size(); ++i) factor[i] = ker.log_tan(p.tl + gl.nodes[i] * p.hl);
  return weighted_integrals(p.pl, shape, gl, factor);
}

Eigen::VectorXd log_weighted(const Pair& p, const QuadConfig& q, bool reflect) {
  // int_0^1 psi_m'(eta) ln eta  (or psi_m'(1 - eta) ln eta)
  const GaussRule& lg = gauss_log(q.k_log);
  std::vector<double> nodes(lg.nodes);
  if (reflect) {
    for (auto& x : nodes) x = 1.0 - x;
  }
  const Eigen::MatrixXd table = mode_table(p.pl, Shape::slope, nodes);
  const Eigen::Map<const Eigen::VectorXd> w(lg.weights.data(), static_cast<Eigen::Index>(lg.size()));
  return -(table.transpose() * w);
}

Eigen::VectorXd smooth_weighted(const Pair& p, const QuadConfig& q, const std::function<double(double)>& g) {
  const GaussRule& gl = gauss_legendre(q.k_reg);
  std::vector<double> factor(gl.size());
  for (std::size_t i = 0; i < gl.size(); ++i) factor[i] = g(gl.nodes[i]);
  return weighted_integrals(p.pl, Shape::slope, gl, factor);
}

Eigen::VectorXd compute_J_pair(const Pair& p, int which, const KernelContext& ker, const QuadConfig& q) {
  if (which != 0 && which != 1) throw InvalidArgument("compute_J: which must be 0 or 1");
  const Eigen::VectorXd total = mode_integrals(p.pl, Shape::slope, q.k1);
  const double s = which == 0 ? p.tk : p.tk + p.hk;
  const bool at_horizon = which == 1 && p.k == p.N - 1;
  if (at_horizon && (p.kind == PairCase::last || p.kind == PairCase::whole)) {
    return Eigen::VectorXd::Zero(p.pl + 1);
  }
  if (p.kind == PairCase::first || (p.kind == PairCase::whole && which == 0)) {
    const double h = p.hl;
    Eigen::VectorXd out = smooth_weighted(p, q, [&](double y) { return ker.reg_factor(RegCase::origin, s, y * h); });
    out += 2.0 * std::log(h) * total;
    if (which == 0) {
      out += 2.0 * log_weighted(p, q, false);
    } else {
      out += smooth_weighted(p, q, [](double y) { return std::log1p(y); });
      out += log_weighted(p, q, true);
    }
    return out;
  }
  if (p.kind == PairCase::last) {
    Eigen::VectorXd out = smooth_weighted(
        p, q, [&](double y) { return ker.reg_factor(RegCase::terminal, p.tk, p.tl + y * p.hl); });
    out += log_weighted(p, q, false);
    out -= smooth_weighted(p, q, [](double y) { return std::log(2.0 - y); });
    return out;
  }
  // regular part with the interior factor, then the singular table
  Eigen::VectorXd out =
      smooth_weighted(p, q, [&](double y) { return ker.reg_factor(RegCase::interior, s, p.tl + y * p.hl); });
  const double log_h = std::log(p.hl);
  if (p.k == p.l) {
    out += log_h * total + log_weighted(p, q, which == 1);
  } else if (p.k == p.l + 1) {
    if (which == 0) {
      out += log_h * total + log_weighted(p, q, true);
    } else {
      out += smooth_weighted(p, q, [&](double y) { return std::log(p.hk + (1.0 - y) * p.hl); });
    }
  } else if (p.k + 1 == p.l) {
    if (which == 0) {
      out += smooth_weighted(p, q, [&](double y) { return std::log(p.hk + y * p.hl); });
    } else {
      out += log_h * total + log_weighted(p, q, false);
    }
  } else {
    out += smooth_weighted(p, q, [&](double y) { return std::log(std::abs(s - (p.tl + y * p.hl))); });
  }
  return out;
}

struct Blocks {
  LocalBlock M;
  LocalBlock A;
  LocalBlock B;
};

struct Wanted {
  bool M = true;
  bool A = true;
  bool B = true;
};

Blocks local_blocks(const Pair& p, const TemporalMesh& mesh, const QuadConfig& q, Wanted wanted) {
  q.validate(std::max(p.pk, p.pl));
  const KernelContext ker(mesh.horizon());
  const SquareRule rule = square_rule(p, ker, q);
  Blocks out;
  const Eigen::VectorXd at_zero = mode_row(p.pk, Shape::value, 0.0);
  if (wanted.M) {
    out.M = p.hl * apply_rule(rule, p, Shape::slope, Shape::value, q);
    if (p.k == 0) {
      out.M -= (2.0 * p.hl / kPi) * at_zero * origin_log_integral(p, Shape::value, ker, q).transpose();
    }
  }
  if (wanted.A) {
    out.A = apply_rule(rule, p, Shape::slope, Shape::slope, q);
    if (p.k == 0) {
      out.A -= (2.0 / kPi) * at_zero * origin_log_integral(p, Shape::slope, ker, q).transpose();
    }
  }
  if (wanted.B) {
    out.B = (1.0 / p.hk) * apply_rule(rule, p, Shape::curvature, Shape::slope, q);
    const Eigen::VectorXd slope0 = mode_row(p.pk, Shape::slope, 0.0);
    const Eigen::VectorXd slope1 = mode_row(p.pk, Shape::slope, 1.0);
    const double c = 1.0 / (kPi * p.hk);
    out.B -= c * slope0 * compute_J_pair(p, 0, ker, q).transpose();
    out.B += c * slope1 * compute_J_pair(p, 1, ker, q).transpose();
  }
  return out;
}

void scatter(Eigen::MatrixXd& global, const LocalBlock& block, const DofMap& dofs, int k, int l) {
  for (Eigen::Index n = 0; n < block.rows(); ++n) {
    const int row = dofs.global(static_cast<int>(n), k);
    for (Eigen::Index m = 0; m < block.cols(); ++m) {
      global(row, dofs.global(static_cast<int>(m), l)) += block(n, m);
    }
  }
}

GlobalSet assemble_wanted(const TemporalMesh& mesh, const DegreeVector& degrees, const DofMap& dofs,
                          const QuadConfig& q, int threads, Wanted wanted) {
  const int N = mesh.num_elements();
  if (dofs.num_elements() != N || degrees.size() != N) {
    throw InvalidArgument("assemble: mesh, degree vector and DOF map disagree on the element count");
  }
  for (int e = 0; e < N; ++e) {
    if (dofs.degree(e) != degrees[e]) throw InvalidArgument("assemble: DOF map built for other degrees");
  }
  q.validate(degrees.max());
  std::vector<Blocks> blocks(static_cast<std::size_t>(N) * static_cast<std::size_t>(N));
  parallel_for(
      N * N,
      [&](int index) {
        const Pair p(index / N, index % N, mesh, degrees);
        blocks[static_cast<std::size_t>(index)] = local_blocks(p, mesh, q, wanted);
      },
      threads);
  const int size = dofs.num_dofs();
  GlobalSet out;
  out.M.kind = MatrixKind::M;
  out.A.kind = MatrixKind::A;
  out.B.kind = MatrixKind::B;
  const bool ok = mesh.theorem41_ok();
  for (GlobalMatrix* g : {&out.M, &out.A, &out.B}) {
    g->theorem41_ok = ok;
    g->values = Eigen::MatrixXd::Zero(size, size);
  }
  for (int k = 0; k < N; ++k) {
    for (int l = 0; l < N; ++l) {
      const Blocks& b = blocks[static_cast<std::size_t>(k * N + l)];
      if (wanted.M) scatter(out.M.values, b.M, dofs, k, l);
      if (wanted.A) scatter(out.A.values, b.A, dofs, k, l);
      if (wanted.B) scatter(out.B.values, b.B, dofs, k, l);
    }
  }
  return out;
}

void check_order(const char* name, int value, int bound) {
  if (value < 1 || value > kMaxGaussOrder) {
    throw InvalidArgument(std::string("QuadConfig: ") + name + " = " + std::to_string(value) + " outside [1, " +
                          std::to_string(kMaxGaussOrder) + "]");
  }
  if (value < bound) {
    throw InvalidArgument(std::string("QuadConfig: ") + name + " = " + std::to_string(value) +
                          " below the exactness bound " + std::to_string(bound));
  }
}

}  // namespace

QuadConfig QuadConfig::defaults(int pmax) {
  const int K = std::max(half_up(pmax + 1), 12);
  QuadConfig q = with_K(K, pmax);
  return q;
}

QuadConfig QuadConfig::with_K(int K, int pmax) {
  if (pmax < 1) throw InvalidArgument("QuadConfig: pmax must be at least 1");
  QuadConfig q;
  q.k_reg = K;
  q.k_log = pmax + 3;
  q.k1 = std::max(K, half_up(pmax + 1));
  q.k2 = std::max(K, half_up(pmax));
  q.k5 = std::max(K, half_up(pmax + 1));
  q.k3 = std::max(K, q.k_log);
  q.k4 = std::max(K, q.k_log);
  q.validate(pmax);
  return q;
}

void QuadConfig::validate(int pmax) const {
  check_order("k_reg", k_reg, half_up(pmax + 1));
  check_order("k_log", k_log, pmax + 1);
  check_order("k1", k1, half_up(pmax + 1));
  check_order("k2", k2, half_up(pmax));
  check_order("k3", k3, pmax + 1);
  check_order("k4", k4, pmax + 1);
  check_order("k5", k5, half_up(pmax + 1));
}

LocalBlock local_M(int k, int l, const TemporalMesh& mesh, const DegreeVector& degrees, const QuadConfig& q) {
  return local_blocks(Pair(k, l, mesh, degrees), mesh, q, {true, false, false}).M;
}

LocalBlock local_A(int k, int l, const TemporalMesh& mesh, const DegreeVector& degrees, const QuadConfig& q) {
  return local_blocks(Pair(k, l, mesh, degrees), mesh, q, {false, true, false}).A;
}

LocalBlock local_B(int k, int l, const TemporalMesh& mesh, const DegreeVector& degrees, const QuadConfig& q) {
  return local_blocks(Pair(k, l, mesh, degrees), mesh, q, {false, false, true}).B;
}

Eigen::VectorXd compute_J(int k, int l, int which, const TemporalMesh& mesh, const DegreeVector& degrees,
                          const QuadConfig& q) {
  const Pair p(k, l, mesh, degrees);
  q.validate(std::max(p.pk, p.pl));
  return compute_J_pair(p, which, KernelContext(mesh.horizon()), q);
}

GlobalMatrix assemble(MatrixKind kind, const TemporalMesh& mesh, const DegreeVector& degrees, const DofMap& dofs,
                      const QuadConfig& q, int threads) {
  Wanted wanted{kind == MatrixKind::M, kind == MatrixKind::A, kind == MatrixKind::B};
  GlobalSet set = assemble_wanted(mesh, degrees, dofs, q, threads, wanted);
  switch (kind) {
    case MatrixKind::M:
      return std::move(set.M);
    case MatrixKind::A:
      return std::move(set.A);
    case MatrixKind::B:
      return std::move(set.B);
  }
  throw InvalidArgument("assemble: unknown matrix kind");
}

GlobalSet assemble_all(const TemporalMesh& mesh, const DegreeVector& degrees, const DofMap& dofs,
                       const QuadConfig& q, int threads) {
  return assemble_wanted(mesh, degrees, dofs, q, threads, {});
}

Eigen::MatrixXd tilde(const Eigen::MatrixXd& full) {
  if (full.rows() != full.cols() || full.rows() < 2) {
    throw InvalidArgument("tilde: need a square matrix of size at least 2");
  }
  const Eigen::Index n = full.rows() - 1;
  return full.bottomRightCorner(n, n);
}

}  // namespace htq
