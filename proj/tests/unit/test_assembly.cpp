#include <doctest.h>

#include <cmath>
#include <numbers>

#include "htq/assembly.hpp"
#include "htq/error.hpp"
#include "htq/kernels.hpp"
#include "htq/polynomial.hpp"
#include "htq/shapefn.hpp"
#include "htq/spectral.hpp"
#include "reference.hpp"

using htq::DegreeVector;
using htq::DofMap;
using htq::MatrixKind;
using htq::QuadConfig;
using htq::TemporalMesh;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::MatrixXd oracle(MatrixKind kind, const TemporalMesh& mesh, const DofMap& dofs) {
  return htq::oracle_matrix(kind, mesh, dofs, {}).matrix;
}

}  // namespace

TEST_SUITE("assembly") {
  TEST_CASE("quadrature configuration") {
    const auto d = QuadConfig::defaults(2);
    CHECK(d.k_reg == 12);
    CHECK(d.k_log == 5);
    CHECK_NOTHROW(d.validate(2));
    CHECK(QuadConfig::defaults(30).k_reg == 16);
    const auto q = QuadConfig::with_K(3, 4);
    CHECK(q.k_reg == 3);
    CHECK(q.k_log == 7);
    CHECK_THROWS_AS(QuadConfig::with_K(2, 4), htq::InvalidArgument);
    CHECK_THROWS_AS(QuadConfig::with_K(65, 1), htq::InvalidArgument);
    QuadConfig bad = d;
    bad.k_log = 2;
    CHECK_THROWS_AS(bad.validate(2), htq::InvalidArgument);
  }

  TEST_CASE("index checks") {
    const auto mesh = TemporalMesh::uniform(3, 1.0);
    const auto deg = DegreeVector::uniform(3, 1);
    const auto q = QuadConfig::defaults(1);
    CHECK_THROWS_AS(htq::local_M(3, 0, mesh, deg, q), htq::InvalidArgument);
    CHECK_THROWS_AS(htq::local_A(0, -1, mesh, deg, q), htq::InvalidArgument);
    CHECK_THROWS_AS(htq::compute_J(0, 0, 2, mesh, deg, q), htq::InvalidArgument);
    const auto block = htq::local_B(0, 2, mesh, DegreeVector({2, 1, 3}), QuadConfig::defaults(3));
    CHECK(block.rows() == 3);
    CHECK(block.cols() == 4);
  }

  TEST_CASE("single linear element against the oracle") {
    const auto mesh = TemporalMesh::uniform(1, 1.0);
    const DegreeVector deg({1});
    const DofMap dofs(mesh, deg);
    const auto q = QuadConfig::with_K(16, 1);
    const auto block = htq::local_M(0, 0, mesh, deg, q);
    CHECK(max_abs(block - oracle(MatrixKind::M, mesh, dofs)) <= 1e-12);
    const auto global = htq::assemble(MatrixKind::M, mesh, deg, dofs, q);
    CHECK(global.values == block);
    CHECK_FALSE(global.theorem41_ok);
  }

  TEST_CASE("A of a single linear element is a column combination of M") {
    for (double T : {1.0, 2.0}) {
      const auto mesh = TemporalMesh::uniform(1, T);
      const DegreeVector deg({1});
      const DofMap dofs(mesh, deg);
      const auto q = QuadConfig::defaults(1);
      const auto M = htq::assemble(MatrixKind::M, mesh, deg, dofs, q).values;
      const auto A = htq::assemble(MatrixKind::A, mesh, deg, dofs, q).values;
      const Eigen::VectorXd ones_image = (M.col(0) + M.col(1)) / T;
      CHECK(max_abs(A.col(1) - ones_image) <= 1e-13);
      CHECK(max_abs(A.col(0) + ones_image) <= 1e-13);
    }
  }

  TEST_CASE("B with linear test elements is pure J terms") {
    const auto mesh = TemporalMesh::dyadic(4, 2.0);
    const DegreeVector deg({1, 2, 1, 3});
    const auto q = QuadConfig::defaults(3);
    for (int k : {0, 2}) {
      for (int l = 0; l < 4; ++l) {
        const auto block = htq::local_B(k, l, mesh, deg, q);
        const auto J0 = htq::compute_J(k, l, 0, mesh, deg, q);
        const auto J1 = htq::compute_J(k, l, 1, mesh, deg, q);
        const double scale = 1.0 / (std::numbers::pi * mesh.size(k));
        for (int n = 0; n <= 1; ++n) {
          for (int m = 0; m <= deg[l]; ++m) {
            const double expected = scale * (-htq::lobatto::dpsi(1, n, 0.0) * J0[m] + htq::lobatto::dpsi(1, n, 1.0) * J1[m]);
            CHECK(std::abs(block(n, m) - expected) <= 1e-14 * std::max(1.0, std::abs(expected)));
          }
        }
      }
    }
  }

  TEST_CASE("B of linear elements against the oracle") {
    const auto mesh = TemporalMesh::uniform(4, 1.0);
    const auto deg = DegreeVector::uniform(4, 1);
    const DofMap dofs(mesh, deg);
    const auto B = htq::assemble(MatrixKind::B, mesh, deg, dofs, QuadConfig::defaults(1)).values;
    CHECK(max_abs(B - oracle(MatrixKind::B, mesh, dofs)) <= 1e-10);
  }

  TEST_CASE("J terms") {
    const auto mesh = TemporalMesh::geometric(5, 3.0, 0.3);
    const auto deg = DegreeVector::linear_ramp(5);
    const auto q = QuadConfig::defaults(5);
    for (int l = 0; l < 5; ++l) {
      CHECK(htq::compute_J(2, l, 0, mesh, deg, q).size() == deg[l] + 1);
      for (int k = 1; k < 5; ++k) {
        const auto j0 = htq::compute_J(k, l, 0, mesh, deg, q);
        const auto j1 = htq::compute_J(k - 1, l, 1, mesh, deg, q);
        CHECK(max_abs(j0 - j1) <= 1e-12);
      }
    }
    const auto last = htq::compute_J(4, 4, 1, mesh, deg, q);
    CHECK((last.array() == 0.0).all());
    const auto single = htq::compute_J(0, 0, 1, TemporalMesh::uniform(1, 1.0), DegreeVector({3}), QuadConfig::defaults(3));
    CHECK((single.array() == 0.0).all());
  }

  TEST_CASE("reference configuration at K = 20") {
    const auto mesh = TemporalMesh::dyadic(6, 10.0);
    const auto deg = DegreeVector::uniform(6, 2);
    const DofMap dofs(mesh, deg);
    const auto set = htq::assemble_all(mesh, deg, dofs, QuadConfig::with_K(20, 2));
    CHECK(set.M.values.rows() == 13);
    CHECK(max_abs(set.M.values - oracle(MatrixKind::M, mesh, dofs)) <= 1e-10);
    CHECK(max_abs(set.A.values - oracle(MatrixKind::A, mesh, dofs)) <= 1e-10);
    CHECK(max_abs(set.B.values - oracle(MatrixKind::B, mesh, dofs)) <= 1e-9);
    const auto single = htq::assemble(MatrixKind::B, mesh, deg, dofs, QuadConfig::with_K(20, 2));
    CHECK(single.values == set.B.values);
  }

  TEST_CASE("single quadratic element, bubble entry of B against plain summation") {
    const auto mesh = TemporalMesh::uniform(1, 1.0);
    const DegreeVector deg({2});
    const DofMap dofs(mesh, deg);
    const auto B = htq::assemble(MatrixKind::B, mesh, deg, dofs, QuadConfig::with_K(20, 2)).values;
    const double brute = htq::oracle_entry(MatrixKind::B, mesh, dofs, 2, 2, 1000000, false);
    CHECK(std::abs(B(2, 2) - brute) <= 1e-9);
  }

  TEST_CASE("assembly does not depend on the thread count") {
    const auto mesh = TemporalMesh::geometric(6, 1.0, 0.17);
    const auto deg = DegreeVector::linear_ramp(6);
    const DofMap dofs(mesh, deg);
    const auto q = QuadConfig::defaults(6);
    const auto one = htq::assemble_all(mesh, deg, dofs, q, 1);
    const auto many = htq::assemble_all(mesh, deg, dofs, q, 4);
    CHECK(one.M.values == many.M.values);
    CHECK(one.A.values == many.A.values);
    CHECK(one.B.values == many.B.values);
  }

  TEST_CASE("tilde is the trailing submatrix") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Random(5, 5);
    const auto t = htq::tilde(m);
    CHECK(t.rows() == 4);
    CHECK(t == m.bottomRightCorner(4, 4));
    CHECK_THROWS_AS(htq::tilde(Eigen::MatrixXd(2, 3)), htq::InvalidArgument);
  }

  TEST_CASE("the first-element boundary term only touches the first row") {
    // R[i,j] = int phi_j(t) int phi_i'(s) calK(s,t) ds dt, i.e. the pointwise
    // representation without the f(0) calK(0,t) term
    const double T = 1.0;
    const auto mesh = TemporalMesh({0.0, 0.3, 0.55, 1.0});
    const auto deg = DegreeVector::uniform(3, 1);
    const DofMap dofs(mesh, deg);
    const auto M = htq::assemble(MatrixKind::M, mesh, deg, dofs, QuadConfig::defaults(1)).values;
    const htq::KernelContext kernel(T);
    const int n = dofs.num_dofs();
    for (int i = 0; i < n; ++i) {
      const auto phi_i = htq::basis_function(mesh, dofs, i);
      const double at_zero = phi_i(0.0);
      for (int j = 0; j < n; ++j) {
        const auto phi_j = htq::basis_function(mesh, dofs, j);
        double without = 0.0;
        double boundary = 0.0;
        for (int e = 0; e < mesh.num_elements(); ++e) {
          without += htq::testing::tanh_sinh(
              [&](double t) {
                return phi_j(t) * (htq::ht_pointwise_lemma22(phi_i, T, t) - at_zero * kernel.calK(0.0, t));
              },
              mesh.left(e), mesh.right(e), 1e-13);
          boundary += htq::testing::tanh_sinh([&](double t) { return phi_j(t) * kernel.calK(0.0, t); },
                                              mesh.left(e), mesh.right(e), 1e-13);
        }
        if (i == 0) {
          CHECK(std::abs(M(i, j) - without - boundary) <= 1e-9);
          CHECK(std::abs(boundary) > 1e-3);
        } else {
          CHECK(std::abs(M(i, j) - without) <= 1e-9);
        }
      }
    }
  }
}
