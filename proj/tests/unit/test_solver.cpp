#include <doctest.h>

#include <cmath>
#include <random>

#include "htq/assembly.hpp"
#include "htq/error.hpp"
#include "htq/solver.hpp"
#include "htq/spectral.hpp"
#include "reference.hpp"

using htq::DegreeVector;
using htq::DofMap;
using htq::OdeKind;
using htq::OdeProblem;
using htq::TemporalMesh;

namespace {

OdeProblem constant_one(OdeKind kind) {
  OdeProblem p;
  p.kind = kind;
  p.f = [](double) { return 1.0; };
  if (kind == OdeKind::parabolic) {
    p.u_exact = [](double t) { return t; };
    p.du_exact = [](double) { return 1.0; };
  } else {
    p.u_exact = [](double t) { return 0.5 * t * t; };
    p.du_exact = [](double t) { return t; };
  }
  return p;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("names") {
    CHECK(htq::to_string(OdeKind::hyperbolic) == "hyperbolic");
    CHECK(htq::ode_kind_from_string("parabolic") == OdeKind::parabolic);
    CHECK_THROWS_AS(htq::ode_kind_from_string("elliptic"), htq::InvalidArgument);
    CHECK(htq::study_kind_from_string("hp") == htq::StudyKind::hp);
    CHECK(htq::to_string(htq::StudyKind::single) == "single");
  }

  TEST_CASE("problem validation") {
    OdeProblem p = constant_one(OdeKind::parabolic);
    CHECK_NOTHROW(p.validate());
    p.mu = -1.0;
    CHECK_THROWS_AS(p.validate(), htq::InvalidArgument);
    p.mu = 0.0;
    p.f = nullptr;
    CHECK_THROWS_AS(p.validate(), htq::InvalidArgument);
  }

  TEST_CASE("system matrices") {
    const Eigen::MatrixXd M = Eigen::MatrixXd::Random(4, 4);
    const Eigen::MatrixXd A = Eigen::MatrixXd::Random(4, 4);
    const Eigen::MatrixXd B = Eigen::MatrixXd::Random(4, 4);
    OdeProblem p = constant_one(OdeKind::parabolic);
    CHECK(htq::build_system(p, M, A, B) == htq::tilde(A));
    p.kind = OdeKind::hyperbolic;
    CHECK(htq::build_system(p, M, A, B) == Eigen::MatrixXd(htq::tilde(B).transpose()));
    p.mu = 5.0;
    const Eigen::MatrixXd expected = htq::tilde(B).transpose() + 5.0 * htq::tilde(M);
    CHECK((htq::build_system(p, M, A, B) - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(htq::build_system(p, M, A, Eigen::MatrixXd::Zero(3, 3)), htq::InvalidArgument);
  }

  TEST_CASE("projection reproduces polynomials") {
    const auto mesh = TemporalMesh({0.0, 0.2, 0.7, 1.0});
    const DegreeVector deg({2, 1, 3});
    const DofMap dofs(mesh, deg);
    const auto c = htq::project_l2([](double) { return 1.0; }, mesh, deg, dofs);
    for (int i = 0; i < dofs.num_dofs(); ++i) CHECK(std::abs(c[i] - (i <= 3 ? 1.0 : 0.0)) <= 1e-13);
    const auto quad = htq::project_l2([](double t) { return t * t; }, mesh, DegreeVector::uniform(3, 2),
                                      DofMap(mesh, DegreeVector::uniform(3, 2)));
    const htq::DiscreteSolution as_function(mesh, DegreeVector::uniform(3, 2), quad.tail(quad.size() - 1));
    for (double t : {0.1, 0.5, 0.9}) CHECK(as_function.value(t) == doctest::Approx(t * t).epsilon(1e-13));
  }

  TEST_CASE("right-hand side") {
    const auto mesh = TemporalMesh::dyadic(3, 2.0);
    const auto deg = DegreeVector::uniform(3, 2);
    const DofMap dofs(mesh, deg);
    const auto M = htq::assemble(htq::MatrixKind::M, mesh, deg, dofs, htq::QuadConfig::defaults(2)).values;
    OdeProblem zero = constant_one(OdeKind::parabolic);
    zero.f = [](double) { return 0.0; };
    CHECK(htq::build_rhs(zero, mesh, deg, dofs, M).cwiseAbs().maxCoeff() == 0.0);
    const auto F = htq::build_rhs(constant_one(OdeKind::parabolic), mesh, deg, dofs, M);
    REQUIRE(F.size() == dofs.num_dofs() - 1);
    for (int i = 0; i + 1 < dofs.num_dofs(); ++i) {
      const double row_sum = M.row(i + 1).head(mesh.num_elements() + 1).sum();
      CHECK(std::abs(F[i] - row_sum) <= 1e-13);
    }
  }

  TEST_CASE("right-hand side of f = t against the series definition") {
    const double T = 1.0;
    const auto mesh = TemporalMesh::uniform(1, T);
    const DegreeVector deg({2});
    const DofMap dofs(mesh, deg);
    const auto c = htq::project_l2([](double t) { return t; }, mesh, deg, dofs);
    CHECK(std::abs(c[0]) <= 1e-14);
    CHECK(std::abs(c[1] - 1.0) <= 1e-14);
    CHECK(std::abs(c[2]) <= 1e-14);
    const auto M = htq::assemble(htq::MatrixKind::M, mesh, deg, dofs, htq::QuadConfig::defaults(2)).values;
    OdeProblem p = constant_one(OdeKind::parabolic);
    p.f = [](double t) { return t; };
    const auto F = htq::build_rhs(p, mesh, deg, dofs, M);
    for (int i = 0; i < 2; ++i) {
      const auto phi = htq::basis_function(mesh, dofs, i + 1);
      const double ref = htq::testing::tanh_sinh([&](double t) { return t * htq::ht_apply(phi, T, t, {}); }, 0.0, T,
                                                 1e-13);
      CHECK(std::abs(F[i] - ref) <= 1e-9);
    }
  }

  TEST_CASE("dense LU") {
    const auto id = htq::lu_solve(Eigen::MatrixXd::Identity(3, 3), Eigen::Vector3d(1, 2, 3));
    CHECK(id.x == Eigen::Vector3d(1, 2, 3));
    Eigen::Matrix2d d;
    d << 2, 0, 0, 4;
    const auto two = htq::lu_solve(d, Eigen::Vector2d(2, 8));
    CHECK(two.x[0] == doctest::Approx(1.0));
    CHECK(two.x[1] == doctest::Approx(2.0));

    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXd a(50, 50);
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j < 50; ++j) a(i, j) = u(rng) + (i == j ? 10.0 : 0.0);
    Eigen::VectorXd b(50);
    for (int i = 0; i < 50; ++i) b[i] = u(rng);
    const auto r = htq::lu_solve(a, b);
    CHECK(r.residual <= 1e-12);
    CHECK(((a * r.x - b).cwiseAbs().maxCoeff()) <= 1e-12);

    const htq::LuFactorization lu(Eigen::MatrixXd::Identity(4, 4));
    CHECK(lu.condition_inf() == doctest::Approx(1.0));
    Eigen::MatrixXd singular = Eigen::MatrixXd::Ones(3, 3);
    CHECK_THROWS_AS(htq::lu_solve(singular, Eigen::Vector3d(1, 1, 1)), htq::SingularSystem);
    CHECK_THROWS_AS(htq::LuFactorization(Eigen::MatrixXd(2, 3)), htq::InvalidArgument);
  }

  TEST_CASE("discrete solution vanishes at the origin") {
    const auto mesh = TemporalMesh::uniform(3, 1.0);
    const auto deg = DegreeVector({1, 2, 3});
    Eigen::VectorXd c = Eigen::VectorXd::LinSpaced(6, 1.0, 2.0);
    const htq::DiscreteSolution u(mesh, deg, c);
    CHECK(u.value(0.0) == 0.0);
    CHECK(std::isfinite(u.derivative(0.5)));
    CHECK_THROWS_AS(htq::DiscreteSolution(mesh, deg, Eigen::VectorXd::Zero(7)), htq::InvalidArgument);
  }

  TEST_CASE("error norms") {
    const auto mesh = TemporalMesh::uniform(2, 1.0);
    const auto deg = DegreeVector::uniform(2, 1);
    const htq::DiscreteSolution zero(mesh, deg, Eigen::VectorXd::Zero(2));
    const auto lin = htq::error_norms(zero, [](double t) { return t; }, [](double) { return 1.0; });
    CHECK(lin.l2 == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(lin.h1semi == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lin.bracket == doctest::Approx(std::pow(3.0, -0.25)).epsilon(1e-14));

    const auto rough = htq::error_norms(zero, [](double t) { return std::pow(t, 0.75); },
                                        [](double t) { return 0.75 * std::pow(t, -0.25); });
    CHECK(std::abs(rough.l2 / std::sqrt(0.4) - 1.0) <= 1e-11);
    CHECK(std::abs(rough.h1semi / std::sqrt(1.125) - 1.0) <= 1e-11);

    Eigen::VectorXd c(2);
    c << 0.5, 1.0;
    const htq::DiscreteSolution exact(mesh, deg, c);
    const auto none = htq::error_norms(exact, [](double t) { return t; }, [](double) { return 1.0; });
    CHECK(none.bracket <= 1e-12);
  }

  TEST_CASE("graded integration") {
    CHECK(std::abs(htq::graded_integral([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0, 20) - 2.0) <= 1e-11);
    CHECK(std::abs(htq::graded_integral([](double t) { return std::log(t); }, 0.0, 2.0, 20) -
                   (2 * std::log(2.0) - 2)) <= 1e-12);
  }

  TEST_CASE("Galerkin reproduction") {
    htq::StudyParams h;
    h.kind = htq::StudyKind::h;
    h.levels = {1, 2, 4, 8};
    for (int p : {1, 2, 3}) {
      h.p = p;
      for (const auto& row : htq::run_study(h, constant_one(OdeKind::parabolic))) CHECK(row.errors.bracket <= 1e-10);
    }
    for (int p : {2, 4}) {
      h.p = p;
      for (const auto& row : htq::run_study(h, constant_one(OdeKind::hyperbolic))) CHECK(row.errors.bracket <= 1e-9);
    }
  }

  TEST_CASE("damped parabolic problem converges under h refinement") {
    OdeProblem p;
    p.mu = 10.0;
    p.f = [](double) { return 1.0; };
    p.u_exact = [](double t) { return -std::expm1(-10 * t) / 10; };
    p.du_exact = [](double t) { return std::exp(-10 * t); };
    htq::StudyParams h;
    h.kind = htq::StudyKind::h;
    h.p = 2;
    h.levels = {2, 4, 8, 16};
    const auto rows = htq::run_study(h, p);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].errors.bracket < rows[i - 1].errors.bracket);
  }

  TEST_CASE("study parameters") {
    htq::StudyParams hp;
    hp.kind = htq::StudyKind::hp;
    CHECK_THROWS_AS(htq::run_study(hp, constant_one(OdeKind::parabolic)), htq::InvalidArgument);
    OdeProblem no_exact = constant_one(OdeKind::parabolic);
    no_exact.u_exact = nullptr;
    hp.levels = {2};
    CHECK_THROWS_AS(htq::run_study(hp, no_exact), htq::InvalidArgument);
    htq::StudyParams single;
    single.kind = htq::StudyKind::single;
    single.mesh = htq::parse_mesh_spec("geometric:4:0.3", 1.0);
    single.degrees = "ramp";
    const auto rows = htq::run_study(single, constant_one(OdeKind::parabolic));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].M == 11);
    CHECK(rows[0].errors.bracket <= 1e-10);
  }
}
