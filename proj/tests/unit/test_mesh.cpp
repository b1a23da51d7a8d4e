#include <doctest.h>

#include <random>

#include "htq/error.hpp"
#include "htq/mesh.hpp"
#include "htq/shapefn.hpp"

using htq::DegreeVector;
using htq::DofMap;
using htq::TemporalMesh;

namespace {

void check_points(const TemporalMesh& m, std::initializer_list<double> expected) {
  REQUIRE(m.breakpoints().size() == expected.size());
  std::size_t i = 0;
  for (double t : expected) CHECK(m.breakpoints()[i++] == doctest::Approx(t).epsilon(1e-14));
}

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("uniform mesh") {
    check_points(TemporalMesh::uniform(2, 1.0), {0, 0.5, 1});
    check_points(TemporalMesh::uniform(4, 10.0), {0, 2.5, 5, 7.5, 10});
    const auto single = TemporalMesh::uniform(1, 1.0);
    check_points(single, {0, 1});
    CHECK_FALSE(single.theorem41_ok());
    CHECK(TemporalMesh::uniform(2, 1.0).theorem41_ok());
    CHECK_THROWS_AS(TemporalMesh::uniform(0, 1.0), htq::InvalidArgument);
    CHECK_THROWS_AS(TemporalMesh::uniform(3, 0.0), htq::InvalidArgument);
  }

  TEST_CASE("geometric mesh") {
    check_points(TemporalMesh::geometric(3, 1.0, 0.17), {0, 0.0289, 0.17, 1});
    check_points(TemporalMesh::geometric(2, 1.0, 0.5), {0, 0.5, 1});
    check_points(TemporalMesh::geometric(4, 1.0, 0.17), {0, 0.004913, 0.0289, 0.17, 1});
    CHECK_THROWS_AS(TemporalMesh::geometric(3, 1.0, 1.0), htq::InvalidArgument);
    CHECK_THROWS_AS(TemporalMesh::geometric(3, 1.0, 0.0), htq::InvalidArgument);
  }

  TEST_CASE("dyadic mesh") {
    check_points(TemporalMesh::dyadic(6, 10.0), {0, 0.3125, 0.625, 1.25, 2.5, 5, 10});
    check_points(TemporalMesh::dyadic(1, 1.0), {0, 1});
    check_points(TemporalMesh::dyadic(2, 4.0), {0, 2, 4});
  }

  TEST_CASE("generators are strictly increasing with exact endpoints") {
    for (int N = 1; N <= 40; ++N) {
      for (const auto& m : {TemporalMesh::uniform(N, 3.0), TemporalMesh::dyadic(N, 3.0),
                            N >= 2 ? TemporalMesh::geometric(N, 3.0, 0.17) : TemporalMesh::uniform(1, 3.0)}) {
        CHECK(m.node(0) == 0.0);
        CHECK(m.horizon() == 3.0);
        for (int e = 0; e < m.num_elements(); ++e) CHECK(m.size(e) > 0.0);
      }
    }
  }

  TEST_CASE("explicit breakpoints are validated") {
    CHECK_NOTHROW(TemporalMesh({0.0, 0.3, 1.0}));
    CHECK_THROWS_AS(TemporalMesh({0.1, 0.3, 1.0}), htq::InvalidArgument);
    CHECK_THROWS_AS(TemporalMesh({0.0, 0.3, 0.3, 1.0}), htq::InvalidArgument);
    CHECK_THROWS_AS(TemporalMesh({0.0}), htq::InvalidArgument);
  }

  TEST_CASE("scaled mesh") {
    const auto m = TemporalMesh::dyadic(3, 1.0).scaled(4.0);
    check_points(m, {0, 1, 2, 4});
  }

  TEST_CASE("degree vectors") {
    CHECK(DegreeVector::uniform(3, 2).sum() == 6);
    const auto ramp = DegreeVector::linear_ramp(4);
    CHECK(ramp[0] == 1);
    CHECK(ramp[3] == 4);
    CHECK(ramp.max() == 4);
    CHECK_THROWS_AS(DegreeVector({1, 0}), htq::InvalidArgument);
    CHECK_THROWS_AS(DofMap(TemporalMesh::uniform(3, 1.0), DegreeVector::uniform(2, 1)), htq::InvalidArgument);
  }

  TEST_CASE("dof map numbering") {
    const DofMap fig1(TemporalMesh::dyadic(6, 10.0), DegreeVector::uniform(6, 2));
    CHECK(fig1.num_dofs() == 13);

    const DofMap d(TemporalMesh::uniform(2, 1.0), DegreeVector({2, 3}));
    CHECK(d.num_dofs() == 6);
    CHECK(d.global(2, 0) == 3);
    CHECK(d.global(2, 1) == 4);
    CHECK(d.global(3, 1) == 5);
    CHECK(d.global(1, 0) == d.global(0, 1));

    const DofMap one(TemporalMesh::uniform(1, 1.0), DegreeVector({1}));
    CHECK(one.num_dofs() == 2);
    CHECK(one.global(0, 0) == 0);
    CHECK(one.global(1, 0) == 1);
    CHECK_THROWS_AS(one.global(2, 0), htq::InvalidArgument);
  }

  TEST_CASE("dof count and surjectivity on random instances") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> n_dist(1, 12);
    std::uniform_int_distribution<int> p_dist(1, 8);
    for (int trial = 0; trial < 1000; ++trial) {
      const int N = n_dist(rng);
      std::vector<int> p(static_cast<std::size_t>(N));
      int sum = 0;
      for (int& x : p) sum += (x = p_dist(rng));
      const DegreeVector deg(p);
      const DofMap dofs(TemporalMesh::uniform(N, 1.0), deg);
      REQUIRE(dofs.num_dofs() == 1 + sum);
      std::vector<int> hits(static_cast<std::size_t>(dofs.num_dofs()), 0);
      int nonzero_at_origin = -1;
      int count_at_origin = 0;
      for (int e = 0; e < N; ++e) {
        for (int m = 0; m <= deg[e]; ++m) {
          const int g = dofs.global(m, e);
          ++hits[static_cast<std::size_t>(g)];
          if (e == 0 && htq::lobatto::psi(deg[e], m, 0.0) != 0.0) {
            nonzero_at_origin = g;
            ++count_at_origin;
          }
        }
      }
      for (int g = 0; g < dofs.num_dofs(); ++g) {
        const bool interior_vertex = g >= 1 && g <= N - 1;
        CHECK(hits[static_cast<std::size_t>(g)] == (interior_vertex ? 2 : 1));
      }
      CHECK(count_at_origin == 1);
      CHECK(nonzero_at_origin == 0);
    }
  }

  TEST_CASE("mesh and degree spec strings") {
    const auto g = htq::parse_mesh_spec("geometric:10:0.17", 1.0);
    CHECK(g.build().num_elements() == 10);
    CHECK(htq::parse_mesh_spec(g.to_string(), 1.0).build().node(1) == g.build().node(1));
    const auto e = htq::parse_mesh_spec("explicit:0,0.25,1", 5.0);
    CHECK(e.build().horizon() == 1.0);
    CHECK(htq::parse_mesh_spec("dyadic:6", 10.0).build().node(1) == 0.3125);
    CHECK_THROWS_AS(htq::parse_mesh_spec("uniform", 1.0), htq::InvalidArgument);
    CHECK_THROWS_AS(htq::parse_mesh_spec("spiral:3", 1.0), htq::InvalidArgument);
    CHECK_THROWS_AS(htq::parse_mesh_spec("uniform:x", 1.0), htq::InvalidArgument);

    CHECK(htq::parse_degree_spec("uniform:3", 4).sum() == 12);
    CHECK(htq::parse_degree_spec("ramp", 3).sum() == 6);
    CHECK(htq::parse_degree_spec("2,3,4", 3)[2] == 4);
    CHECK_THROWS_AS(htq::parse_degree_spec("2,3", 3), htq::InvalidArgument);
  }
}
