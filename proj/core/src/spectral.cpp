#include "htq/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "htq/error.hpp"
#include "htq/kernels.hpp"
#include "htq/parallel.hpp"
#include "htq/quadrature.hpp"

namespace htq {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr int kPanelOrder = 24;
constexpr double kPanelPhase = 8.0;

// Neumaier compensated sum.
class Accumulator {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  [[nodiscard]] double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// int_0^1 P(xi) exp(i omega xi) dxi
cplx local_exp_integral(const Polynomial& p, double omega) {
  const int d = p.degree();
  if (omega >= std::max(kPanelPhase, 2.0 * d * d)) {
    const cplx e1 = std::polar(1.0, omega);
    const cplx inv = cplx(0.0, -1.0 / omega);
    cplx power = inv;
    cplx sum = 0.0;
    Polynomial deriv = p;
    for (int r = 0; r <= d; ++r) {
      const double sign = (r % 2 == 0) ? 1.0 : -1.0;
      sum += sign * (deriv(1.0) * e1 - deriv(0.0)) * power;
      power *= inv;
      deriv = deriv.derivative();
    }
    return sum;
  }
  const int panels = std::max(1, static_cast<int>(std::ceil(omega / kPanelPhase)));
  const GaussRule& gl = gauss_legendre(kPanelOrder);
  const double width = 1.0 / panels;
  cplx sum = 0.0;
  for (int q = 0; q < panels; ++q) {
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const double xi = (q + gl.nodes[i]) * width;
      sum += gl.weights[i] * p(xi) * std::polar(1.0, omega * xi);
    }
  }
  return sum * width;
}

double factorial_ratio_table(int m, int j) {
  // f(m,j) = S(m,j) j!/m!, S the Stirling numbers of the second kind
  static const auto table = [] {
    constexpr int n = 101;
    std::vector<std::vector<double>> f(n, std::vector<double>(n, 0.0));
    f[0][0] = 1.0;
    for (int mm = 1; mm < n; ++mm) {
      for (int jj = 1; jj <= mm; ++jj) {
        f[static_cast<std::size_t>(mm)][static_cast<std::size_t>(jj)] =
            (static_cast<double>(jj) / mm) *
            (f[static_cast<std::size_t>(mm) - 1][static_cast<std::size_t>(jj)] +
             f[static_cast<std::size_t>(mm) - 1][static_cast<std::size_t>(jj) - 1]);
      }
    }
    return f;
  }();
  return table[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)];
}

// Hurwitz zeta(s, a) for integer s >= 2 by Euler-Maclaurin.
double hurwitz_zeta(int s, double a) {
  static constexpr std::array<double, 12> kB2j = {
      1.0 / 6,        -1.0 / 30,        1.0 / 42,       -1.0 / 30,      5.0 / 66,           -691.0 / 2730,
      7.0 / 6,        -3617.0 / 510,    43867.0 / 798,  -174611.0 / 330, 854513.0 / 138,    -236364091.0 / 2730};
  const double start = std::max(20.0, 2.0 * s);
  double sum = 0.0;
  double x = a;
  while (x < start) {
    sum += std::pow(x, -s);
    x += 1.0;
  }
  sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  // B_{2j}/(2j)! * s (s+1) ... (s+2j-2) x^{-s-2j+1}
  double rising = s;  // s ... (s+2j-2)
  double fact = 2.0;  // (2j)!
  double xpow = std::pow(x, -s - 1.0);
  for (std::size_t j = 1; j <= kB2j.size(); ++j) {
    sum += kB2j[j - 1] / fact * rising * xpow;
    const double jj = static_cast<double>(j);
    rising *= (s + 2.0 * jj - 1.0) * (s + 2.0 * jj);
    fact *= (2.0 * jj + 1.0) * (2.0 * jj + 2.0);
    xpow /= x * x;
  }
  return sum;
}

// Bernoulli numbers B_0..B_kMaxBernoulli, from zeta at the even integers.
constexpr int kMaxBernoulli = 80;
const std::array<double, kMaxBernoulli + 1>& bernoulli_numbers() {
  static const auto table = [] {
    std::array<double, kMaxBernoulli + 1> b{};
    b[0] = 1.0;
    b[1] = -0.5;
    double factor = 2.0 / (4.0 * kPi * kPi) * 2.0;  // 2 (2k)! / (2 pi)^{2k} at k = 1
    for (int k = 1; 2 * k <= kMaxBernoulli; ++k) {
      if (k > 1) factor *= (2.0 * k - 1.0) * (2.0 * k) / (4.0 * kPi * kPi);
      const double sign = k % 2 == 1 ? 1.0 : -1.0;
      b[static_cast<std::size_t>(2 * k)] = sign * factor * std::riemann_zeta(2.0 * k);
    }
    return b;
  }();
  return table;
}

// zeta(-m, a) = -B_{m+1}(a) / (m+1)
double hurwitz_zeta_nonpositive(int m, double a) {
  const auto& b = bernoulli_numbers();
  const int n = m + 1;
  double sum = 0.0;
  double binom = 1.0;  // C(n, j)
  for (int j = 0; j <= n; ++j) {
    if (j > 0) binom *= static_cast<double>(n - j + 1) / j;
    sum += binom * b[static_cast<std::size_t>(j)] * std::pow(a, n - j);
  }
  return -sum / n;
}

double digamma(double x) {
  double shift = 0.0;
  while (x < 12.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const auto& b = bernoulli_numbers();
  const double inv2 = 1.0 / (x * x);
  double series = 0.0;
  double pw = inv2;
  for (int k = 1; k <= 8; ++k) {
    series += b[static_cast<std::size_t>(2 * k)] / (2.0 * k) * pw;
    pw *= inv2;
  }
  return shift + std::log(x) - 0.5 / x - series;
}

// Phi(exp(L), Q, a) for small |L| a, L = 2 i y:
//   exp(-a L) [ sum_{n != Q-1} zeta(Q-n, a) L^n/n! + (psi(Q) - psi(a) - log(-L)) L^{Q-1}/(Q-1)! ]
cplx lerch_phi_near_one(double y, int Q, double a);

// Lerch Phi(z, Q, a) = sum_{n>=0} z^n/(n+a)^Q with z = exp(2 i y) != 1 and a large.
cplx lerch_phi(double y, int Q, double a) {
  const double reduced = y - kPi * std::round(y / kPi);
  if (2.0 * std::abs(reduced) * a <= 2.0) return lerch_phi_near_one(reduced, Q, a);
  const double gap = 2.0 * std::abs(std::sin(y));  // |1 - z|
  cplx head = 0.0;
  double shift = 0.0;
  if (a * gap < 40.0) {
    const double needed = std::ceil(40.0 / gap - a);
    if (needed > 5e7) throw NonConvergence("oscillatory tail: phase too close to a resonance");
    const auto count = static_cast<long>(needed);
    for (long n = 0; n < count; ++n) {
      head += std::polar(std::pow(n + a, -Q), 2.0 * y * static_cast<double>(n));
    }
    shift = static_cast<double>(count);
  }
  const double b = a + shift;
  const cplx z = std::polar(1.0, 2.0 * y);
  const cplx one_minus_z = 1.0 - z;
  const cplx zu = z / (b * one_minus_z);
  const double inv_b = 1.0 / b;
  cplx series = 0.0;
  double rising = 1.0;  // (Q)_m
  // some phases (z = -1) make every other term vanish, so both tests look two terms back
  double previous = INFINITY;
  double before = INFINITY;
  for (int m = 0; m <= 100; ++m) {
    if (m > 0) rising *= (Q + m - 1.0);
    cplx inner = 0.0;
    cplx zu_pow = 1.0;
    for (int j = 0; j <= m; ++j) {
      if (j > 0) zu_pow *= zu;
      const double f = factorial_ratio_table(m, j);
      if (f != 0.0) inner += f * zu_pow * std::pow(inv_b, m - j);
    }
    const cplx term = ((m % 2 == 0) ? rising : -rising) * inner;
    const double size = std::abs(term);
    if (m > 1 && size > std::max(previous, before)) break;
    series += term;
    if (m > 0 && std::max(size, previous) <= 1e-18 * std::abs(series)) break;
    before = previous;
    previous = size;
  }
  const cplx tail = std::pow(b, -Q) / one_minus_z * series;
  return head + std::polar(1.0, 2.0 * y * shift) * tail;
}

cplx lerch_phi_near_one(double y, int Q, double a) {
  const cplx L(0.0, 2.0 * y);
  cplx sum = 0.0;
  cplx Ln = 1.0;  // L^n / n!
  for (int n = 0; n <= kMaxBernoulli - 2; ++n) {
    if (n > 0) Ln *= L / static_cast<double>(n);
    if (n == Q - 1) {
      const double psi_q = digamma(static_cast<double>(Q));
      sum += (psi_q - digamma(a) - std::log(-L)) * Ln;
      continue;
    }
    const double z = Q - n >= 2 ? hurwitz_zeta(Q - n, a) : hurwitz_zeta_nonpositive(n - Q, a);
    const cplx term = z * Ln;
    sum += term;
    if (n > Q && std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return std::exp(-a * L) * sum;
}

// d^r/dt^r of a piece at local xi
double piece_derivative(const PolyPiece& piece, int r, double xi) {
  Polynomial p = piece.local;
  for (int q = 0; q < r; ++q) p = p.derivative();
  return p(xi) / std::pow(piece.width(), r);
}

cplx piecewise_exp_integral(const PiecewisePolynomial& v, double lambda) {
  cplx sum = 0.0;
  for (const auto& piece : v.pieces) sum += poly_exp_integral(piece, lambda);
  return sum;
}

// sum over k >= K of Im(E_u) Re(E_w) from the two jump expansions
double product_tail(const JumpExpansion& u, const JumpExpansion& w, int K, double horizon,
                    std::map<std::pair<double, int>, cplx>& cache) {
  auto tail = [&](double c, int Q) {
    auto key = std::make_pair(c, Q);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const cplx value = oscillatory_tail(c, Q, K, horizon);
    cache.emplace(key, value);
    return value;
  };
  static const std::array<cplx, 4> ipow = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  auto i_power = [](int n) { return ipow[static_cast<std::size_t>(((n % 4) + 4) % 4)]; };
  double sum = 0.0;
  for (const auto& a : u.terms) {
    for (const auto& b : w.terms) {
      const int Q = a.order + b.order + 2;
      const cplx direct = i_power(-Q) * tail(a.point + b.point, Q);
      const cplx mixed = i_power(b.order - a.order) * tail(a.point - b.point, Q);
      sum += 0.5 * a.alpha * b.alpha * (direct + mixed).imag();
    }
  }
  return sum;
}

struct KindFunctions {
  PiecewisePolynomial u;
  PiecewisePolynomial w;
};

PiecewisePolynomial kind_u(MatrixKind kind, const PiecewisePolynomial& phi) {
  return kind == MatrixKind::B ? phi.derivative() : phi;
}

PiecewisePolynomial kind_w(MatrixKind kind, const PiecewisePolynomial& phi) {
  return kind == MatrixKind::M ? phi : phi.derivative();
}

double gl_integral(const std::function<double(double)>& g, double lo, double hi, int order) {
  const GaussRule& gl = gauss_legendre(order);
  double sum = 0.0;
  for (std::size_t i = 0; i < gl.size(); ++i) sum += gl.weights[i] * g(lo + (hi - lo) * gl.nodes[i]);
  return (hi - lo) * sum;
}

// Panels growing geometrically away from a singular point outside [lo,hi].
double graded_integral(const std::function<double(double)>& g, double lo, double hi, double singular) {
  if (!(hi > lo)) return 0.0;
  const bool from_left = singular < lo;
  const double delta = from_left ? lo - singular : singular - hi;
  double sum = 0.0;
  double offset = 0.0;
  double step = delta;
  const double length = hi - lo;
  while (offset < length) {
    const double next = std::min(length, offset + step);
    if (from_left) {
      sum += gl_integral(g, lo + offset, lo + next, 20);
    } else {
      sum += gl_integral(g, hi - next, hi - offset, 20);
    }
    offset = next;
    step *= 2.0;
  }
  return sum;
}

}  // namespace

double frequency(int k, double horizon) { return (0.5 * kPi + k * kPi) / horizon; }

void SpectralConfig::validate() const {
  if (K_F < 8) throw InvalidArgument("spectral: K_F must be at least 8");
  if (!(tol > 0.0)) throw InvalidArgument("spectral: tol must be positive");
}

cplx poly_exp_integral(const PolyPiece& piece, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("spectral: frequency must be positive");
  if (!(piece.b > piece.a)) throw InvalidArgument("spectral: empty polynomial piece");
  const double h = piece.width();
  return h * std::polar(1.0, lambda * piece.a) * local_exp_integral(piece.local, lambda * h);
}

double poly_trig_integral(const PolyPiece& piece, double lambda, TrigKind kind) {
  const cplx e = poly_exp_integral(piece, lambda);
  return kind == TrigKind::sin ? e.imag() : e.real();
}

std::vector<double> sine_coefficients(const PiecewisePolynomial& v, double horizon, int count) {
  std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    out[static_cast<std::size_t>(k)] = 2.0 / horizon * piecewise_exp_integral(v, frequency(k, horizon)).imag();
  }
  return out;
}

double ht_apply_spectral(std::span<const double> sine_coeffs, double horizon, double t) {
  Accumulator sum;
  for (std::size_t k = 0; k < sine_coeffs.size(); ++k) {
    sum.add(sine_coeffs[k] * std::cos(frequency(static_cast<int>(k), horizon) * t));
  }
  return sum.value();
}

JumpExpansion JumpExpansion::from(const PiecewisePolynomial& u) {
  std::map<std::pair<double, int>, double> merged;
  for (const auto& piece : u.pieces) {
    for (int r = 0; r <= piece.local.degree(); ++r) {
      const double sign = (r % 2 == 0) ? 1.0 : -1.0;
      merged[{piece.b, r}] += sign * piece_derivative(piece, r, 1.0);
      merged[{piece.a, r}] -= sign * piece_derivative(piece, r, 0.0);
    }
  }
  JumpExpansion out;
  for (const auto& [key, alpha] : merged) {
    if (alpha != 0.0) out.terms.push_back({key.first, key.second, alpha});
  }
  return out;
}

cplx JumpExpansion::evaluate(double lambda) const {
  cplx sum = 0.0;
  const cplx inv = cplx(0.0, -1.0 / lambda);
  for (const auto& term : terms) {
    sum += term.alpha * std::polar(1.0, lambda * term.point) * std::pow(inv, term.order + 1);
  }
  return sum;
}

cplx oscillatory_tail(double c, int Q, int K, double horizon) {
  if (Q < 1 || K < 1) throw InvalidArgument("oscillatory_tail: need Q >= 1 and K >= 1");
  const double scale = std::pow(horizon / kPi, Q);
  const double a = K + 0.5;
  if (c == 0.0 || std::abs(c) == 2.0 * horizon) {
    if (Q < 2) throw DomainError("oscillatory_tail: divergent series (Q = 1 at a resonant phase)");
    const double sign = c == 0.0 ? 1.0 : -1.0;
    return sign * scale * hurwitz_zeta(Q, a);
  }
  // c = 2T m + d exactly, |d| <= T; the phase y = pi c / 2T only matters modulo pi
  const double m = std::round(c / (2.0 * horizon));
  const double d = c - 2.0 * horizon * m;
  const double y = kPi * d / (2.0 * horizon);
  // exp(i (2K+1) y) with the phase reduced modulo 2 pi first
  const double turns = std::fmod((2.0 * K + 1.0) * d / (4.0 * horizon), 1.0);
  const double sign = std::fmod(std::abs(m), 2.0) == 1.0 ? -1.0 : 1.0;
  const cplx lead = sign * std::polar(1.0, 2.0 * kPi * turns);
  return scale * lead * lerch_phi(y, Q, a);
}

double ht_apply(const PiecewisePolynomial& v, double horizon, double t, const SpectralConfig& cfg) {
  cfg.validate();
  if (!(t > 0.0 && t < horizon)) throw DomainError("ht_apply: t must lie in (0,T)");
  Accumulator sum;
  for (int k = 0; k < cfg.K_F; ++k) {
    const double lambda = frequency(k, horizon);
    sum.add(piecewise_exp_integral(v, lambda).imag() * std::cos(lambda * t));
  }
  double tail = 0.0;
  if (cfg.accelerate) {
    static const std::array<cplx, 4> ipow = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    for (const auto& term : JumpExpansion::from(v).terms) {
      const int Q = term.order + 1;
      const cplx phase = ipow[static_cast<std::size_t>(((-Q % 4) + 4) % 4)];
      const cplx both = oscillatory_tail(term.point + t, Q, cfg.K_F, horizon) +
                        oscillatory_tail(term.point - t, Q, cfg.K_F, horizon);
      tail += 0.5 * term.alpha * (phase * both).imag();
    }
  }
  return 2.0 / horizon * (sum.value() + tail);
}

double ht_pointwise_lemma22(const PolyPiece& f, double horizon, double t) {
  const double a = f.a;
  const double b = f.b;
  if (!(a >= 0.0 && b > a && b <= horizon)) throw InvalidArgument("lemma22: need 0 <= a < b <= T");
  if (!(t > 0.0 && t < horizon)) throw DomainError("lemma22: t must lie in (0,T)");
  double scale = 0.0;
  for (double c : f.local.coeffs) scale = std::max(scale, std::abs(c));
  const double zero_tol = 1e-12 * std::max(scale, 1.0);
  const double fa = f.local(0.0);
  const double fb = f.local(1.0);
  if (t == a && std::abs(fa) > zero_tol) {
    throw DomainError("lemma22: t = a requires f(a) = 0 (H_T v has a singularity there)");
  }
  if (t == b && std::abs(fb) > zero_tol) {
    throw DomainError("lemma22: t = b requires f(b) = 0 (H_T v has a singularity there)");
  }
  const KernelContext ker(horizon);
  double value = 0.0;
  if (t != b) value -= fb * ker.calK(b, t);
  if (t != a) value += fa * ker.calK(a, t);

  const PolyPiece df = f.derivative();
  auto g = [&](double s) { return df.value(s); };
  const double T = horizon;

  // int g(s) ln tan(pi (s+t)/4T) ds, split where s + t = T
  double part_sum = 0.0;
  const double split = T - t;
  if (a < split) {
    const double hi = std::min(b, split);
    part_sum += gl_integral([&](double s) { return g(s) * ker.logtan_over_x_closed(s + t); }, a, hi, 40);
    part_sum += graded_integral([&](double s) { return g(s) * std::log(s + t); }, a, hi, -t);
  }
  if (b > split) {
    const double lo = std::max(a, split);
    part_sum -= gl_integral([&](double s) { return g(s) * ker.logtan_over_x_closed(2.0 * T - s - t); }, lo, b, 40);
    part_sum -= graded_integral([&](double s) { return g(s) * std::log(2.0 * T - s - t); }, lo, b, 2.0 * T - t);
  }

  // int g(s) ln tan(pi |s-t|/4T) ds
  double part_diff = 0.0;
  auto smooth_diff = [&](double s) { return g(s) * ker.logtan_over_x_closed(std::abs(s - t)); };
  if (t > a && t < b) {
    part_diff += gl_integral(smooth_diff, a, t, 40) + gl_integral(smooth_diff, t, b, 40);
  } else {
    part_diff += gl_integral(smooth_diff, a, b, 40);
  }
  const GaussRule& lg = gauss_log(16);
  const GaussRule& gl = gauss_legendre(16);
  auto log_left = [&](double length) {  // int_{t-length}^t g(s) ln(t-s) ds
    double plain = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < gl.size(); ++i) plain += gl.weights[i] * g(t - length * gl.nodes[i]);
    for (std::size_t i = 0; i < lg.size(); ++i) weighted += lg.weights[i] * g(t - length * lg.nodes[i]);
    return length * (std::log(length) * plain - weighted);
  };
  auto log_right = [&](double length) {  // int_t^{t+length} g(s) ln(s-t) ds
    double plain = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < gl.size(); ++i) plain += gl.weights[i] * g(t + length * gl.nodes[i]);
    for (std::size_t i = 0; i < lg.size(); ++i) weighted += lg.weights[i] * g(t + length * lg.nodes[i]);
    return length * (std::log(length) * plain - weighted);
  };
  if (t > a && t < b) {
    part_diff += log_left(t - a) + log_right(b - t);
  } else if (t == a) {
    part_diff += log_right(b - a);
  } else if (t == b) {
    part_diff += log_left(b - a);
  } else {
    part_diff += graded_integral([&](double s) { return g(s) * std::log(std::abs(s - t)); }, a, b, t);
  }
  return value - (part_sum + part_diff) / kPi;
}

double ht_pointwise_lemma22(const PiecewisePolynomial& f, double horizon, double t) {
  double sum = 0.0;
  for (const auto& piece : f.pieces) sum += ht_pointwise_lemma22(piece, horizon, t);
  return sum;
}

double oracle_entry(MatrixKind kind, const TemporalMesh& mesh, const DofMap& dofs, int i, int j, int modes,
                    bool accelerate) {
  if (modes < 1) throw InvalidArgument("oracle_entry: need at least one mode");
  const double T = mesh.horizon();
  const auto u = kind_u(kind, basis_function(mesh, dofs, i));
  const auto w = kind_w(kind, basis_function(mesh, dofs, j));
  Accumulator sum;
  for (int k = 0; k < modes; ++k) {
    const double lambda = frequency(k, T);
    sum.add(piecewise_exp_integral(u, lambda).imag() * piecewise_exp_integral(w, lambda).real());
  }
  double tail = 0.0;
  if (accelerate) {
    std::map<std::pair<double, int>, cplx> cache;
    tail = product_tail(JumpExpansion::from(u), JumpExpansion::from(w), modes, T, cache);
  }
  return 2.0 / T * (sum.value() + tail);
}

OracleResult oracle_matrix(MatrixKind kind, const TemporalMesh& mesh, const DofMap& dofs,
                           const SpectralConfig& cfg) {
  cfg.validate();
  const int n = dofs.num_dofs();
  const double T = mesh.horizon();
  const int K1 = cfg.K_F;
  const int K2 = 2 * cfg.K_F;
  std::vector<PiecewisePolynomial> us(static_cast<std::size_t>(n));
  std::vector<PiecewisePolynomial> ws(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto phi = basis_function(mesh, dofs, i);
    us[static_cast<std::size_t>(i)] = kind_u(kind, phi);
    ws[static_cast<std::size_t>(i)] = kind_w(kind, phi);
  }
  // mode integrals: Im of the u transforms, Re of the w transforms
  std::vector<std::vector<double>> su(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(K2)));
  std::vector<std::vector<double>> cw(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(K2)));
  parallel_for(n, [&](int i) {
    const auto ii = static_cast<std::size_t>(i);
    for (int k = 0; k < K2; ++k) {
      const double lambda = frequency(k, T);
      su[ii][static_cast<std::size_t>(k)] = piecewise_exp_integral(us[ii], lambda).imag();
      cw[ii][static_cast<std::size_t>(k)] = piecewise_exp_integral(ws[ii], lambda).real();
    }
  });
  std::vector<JumpExpansion> ju;
  std::vector<JumpExpansion> jw;
  if (cfg.accelerate) {
    for (int i = 0; i < n; ++i) {
      ju.push_back(JumpExpansion::from(us[static_cast<std::size_t>(i)]));
      jw.push_back(JumpExpansion::from(ws[static_cast<std::size_t>(i)]));
    }
  }
  std::map<std::pair<double, int>, cplx> cache1;
  std::map<std::pair<double, int>, cplx> cache2;
  OracleResult result;
  result.K_F = cfg.K_F;
  result.accelerated = cfg.accelerate;
  result.matrix.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto& a = su[static_cast<std::size_t>(i)];
      const auto& b = cw[static_cast<std::size_t>(j)];
      Accumulator sum;
      for (int k = 0; k < K1; ++k) sum.add(a[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k)]);
      double first = sum.value();
      for (int k = K1; k < K2; ++k) sum.add(a[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k)]);
      double second = sum.value();
      if (cfg.accelerate) {
        const auto& eu = ju[static_cast<std::size_t>(i)];
        const auto& ew = jw[static_cast<std::size_t>(j)];
        first += product_tail(eu, ew, K1, T, cache1);
        second += product_tail(eu, ew, K2, T, cache2);
      }
      first *= 2.0 / T;
      second *= 2.0 / T;
      result.matrix(i, j) = first;
      result.certificate = std::max(result.certificate, std::abs(first - second));
    }
  }
  if (!(result.certificate <= cfg.tol)) {
    throw NonConvergence("oracle: truncation levels K_F=" + std::to_string(K1) + " and 2K_F disagree by " +
                         std::to_string(result.certificate) + " > tol");
  }
  return result;
}

}  // namespace htq
