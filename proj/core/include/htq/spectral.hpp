#pragma once

#include <Eigen/Core>
#include <complex>
#include <span>
#include <vector>

#include "htq/matrix_kind.hpp"
#include "htq/mesh.hpp"
#include "htq/polynomial.hpp"

namespace htq {

/// Frequency lambda_k = (pi/2 + k pi)/T of mode k >= 0.
double frequency(int k, double horizon);

struct SpectralConfig {
  int K_F = 4000;
  double tol = 1e-10;
  bool accelerate = true;

  void validate() const;
};

enum class TrigKind { sin, cos };

/// int_a^b piece(t) trig(lambda t) dt. Integration by parts once lambda h
/// resolves the degree, composite Gauss-Legendre on short panels before that.
double poly_trig_integral(const PolyPiece& piece, double lambda, TrigKind kind);

/// int_a^b piece(t) exp(i lambda t) dt; real part is the cosine integral.
std::complex<double> poly_exp_integral(const PolyPiece& piece, double lambda);

/// v_k = (2/T) int_0^T v sin(lambda_k t) dt for k < count.
std::vector<double> sine_coefficients(const PiecewisePolynomial& v, double horizon, int count);

/// Truncated series sum_k v_k cos(lambda_k t).
double ht_apply_spectral(std::span<const double> sine_coeffs, double horizon, double t);

/// H_T v at t from cfg.K_F modes, plus the exact remainder of the series
/// when cfg.accelerate (t must then avoid jump points of v).
double ht_apply(const PiecewisePolynomial& v, double horizon, double t, const SpectralConfig& cfg);

/// Evaluates the representation
///   -f(b) calK(b,t) + f(a) calK(a,t) + int_a^b f'(s) calK(s,t) ds
/// of H_T applied to f extended by zero. t = a needs f(a) = 0, t = b needs f(b) = 0.
double ht_pointwise_lemma22(const PolyPiece& f, double horizon, double t);
/// Sum of the above over all pieces.
double ht_pointwise_lemma22(const PiecewisePolynomial& f, double horizon, double t);

/// Singular-point expansion of the Fourier transform of a piecewise polynomial:
///   int_0^T u exp(i lambda t) dt = sum_j alpha_j exp(i lambda t_j) / (i lambda)^(r_j + 1)
/// for every lambda > 0, with alpha built from the jumps of u^(r) at t_j.
struct JumpExpansion {
  struct Term {
    double point;
    int order;
    double alpha;
  };
  std::vector<Term> terms;

  static JumpExpansion from(const PiecewisePolynomial& u);
  [[nodiscard]] std::complex<double> evaluate(double lambda) const;
};

/// sum_{k >= K} exp(i lambda_k c) / lambda_k^Q, evaluated in closed form
/// through the Lerch transcendent (Hurwitz zeta when the phase is trivial).
std::complex<double> oscillatory_tail(double c, int Q, int K, double horizon);

struct OracleResult {
  Eigen::MatrixXd matrix;
  /// max |entry(K_F) - entry(2 K_F)|
  double certificate = 0.0;
  int K_F = 0;
  bool accelerated = true;
};

/// Matrix of the given kind from the Fourier definition of H_T:
///   entry[i,j] = (2/T) sum_k S^u_{ik} C^w_{jk}.
/// Throws NonConvergence when the certificate exceeds cfg.tol.
OracleResult oracle_matrix(MatrixKind kind, const TemporalMesh& mesh, const DofMap& dofs,
                           const SpectralConfig& cfg);

/// One oracle entry with `modes` terms, optionally completed by the exact remainder.
double oracle_entry(MatrixKind kind, const TemporalMesh& mesh, const DofMap& dofs, int i, int j, int modes,
                    bool accelerate);

}  // namespace htq
