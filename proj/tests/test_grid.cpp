#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "renorm/errors.hpp"
#include "renorm/grid.hpp"
#include "renorm/snapshot.hpp"
#include "support.hpp"

using namespace renorm;
using testing_support::Gen;

TEST_SUITE("grid") {
  TEST_CASE("measures add up to the domain") {
    for (int dim : {1, 2}) {
      DomainSpec d;
      d.dim = dim;
      d.x = {-1.0, 2.0};
      d.y = {0.0, 0.5};
      const Grid g = build_grid(d, {6, 4}, {}, 1.0, 3);
      const double expect = dim == 1 ? 3.0 : 1.5;
      CHECK(g.domain_measure() == doctest::Approx(expect));
      const auto nm = g.node_measures();
      CHECK(std::accumulate(nm.begin(), nm.end(), 0.0) == doctest::Approx(expect));
      const auto cm = g.cell_measures();
      CHECK(std::accumulate(cm.begin(), cm.end(), 0.0) == doctest::Approx(expect));
      CHECK(g.n_cells() == (dim == 1 ? 6u : 48u));
      CHECK(g.n_nodes() == (dim == 1 ? 7u : 35u));
      CHECK(g.h() == doctest::Approx(0.5));
      CHECK(g.time(3) == 1.0);
    }
  }

  TEST_CASE("small interval") {
    const auto g = testing_support::unit_grid_1d(4, 1.0, 10);
    CHECK(g->n_nodes() == 5);
    CHECK(g->dt() == doctest::Approx(0.1));
    CHECK(g->node_measure(0) == doctest::Approx(0.125));
    CHECK(g->node_measure(2) == doctest::Approx(0.25));
  }

  TEST_CASE("basis gradients sum to zero and reproduce linear functions") {
    Gen gen(41);
    for (int dim : {1, 2}) {
      const auto g = dim == 1 ? testing_support::unit_grid_1d(9, 1.0, 1) : testing_support::unit_grid_2d(5, 1.0, 1);
      const double a = gen.uniform(-2.0, 2.0), b = gen.uniform(-2.0, 2.0);
      for (const Cell& c : g->cells()) {
        Vec2 sum{0.0, 0.0}, grad{0.0, 0.0};
        for (int v = 0; v < c.n_vertices; ++v) {
          const Point& x = g->nodes()[c.vertices[v]];
          const double val = a * x[0] + (dim == 2 ? b * x[1] : 0.0);
          for (int d = 0; d < 2; ++d) {
            sum[d] += c.basis_gradient[v][d];
            grad[d] += val * c.basis_gradient[v][d];
          }
        }
        CHECK(std::abs(sum[0]) < 1e-12);
        CHECK(std::abs(sum[1]) < 1e-12);
        CHECK(grad[0] == doctest::Approx(a));
        if (dim == 2) CHECK(grad[1] == doctest::Approx(b));
      }
    }
  }

  TEST_CASE("boundary tags") {
    BoundarySpec b;
    b.right = BoundaryTag::neumann;
    const auto g1 = testing_support::unit_grid_1d(4, 1.0, 1, b);
    CHECK(g1->is_dirichlet(0));
    CHECK(g1->boundary_tag(4) == BoundaryTag::neumann);
    CHECK_FALSE(g1->boundary_tag(2).has_value());
    CHECK(g1->n_dirichlet() == 1);

    const auto g2 = testing_support::unit_grid_2d(4, 1.0, 1);
    CHECK(g2->n_dirichlet() == 16);
    CHECK_FALSE(g2->boundary_tag(6).has_value());
  }

  TEST_CASE("invalid grids are rejected") {
    DomainSpec d;
    CHECK_THROWS_AS(build_grid(d, {1, 1}, {}, 1.0, 1), DomainError);
    CHECK_THROWS_AS(build_grid(d, {4, 1}, {}, 1.0, 0), DomainError);
    CHECK_THROWS_AS(build_grid(d, {4, 1}, {}, 0.0, 1), DomainError);
    BoundarySpec all_neumann{BoundaryTag::neumann, BoundaryTag::neumann, BoundaryTag::neumann, BoundaryTag::neumann};
    CHECK_THROWS_AS(build_grid(d, {4, 1}, all_neumann, 1.0, 1), DomainError);
    d.dim = 3;
    CHECK_THROWS_AS(build_grid(d, {4, 4}, {}, 1.0, 1), DomainError);
    CHECK_THROWS_AS(Field(nullptr), DomainError);
  }

  TEST_CASE("refinement") {
    const auto g = testing_support::unit_grid_2d(3, 0.5, 4);
    const Grid r = refine(*g, 2);
    CHECK(r.cells_per_axis()[0] == 6);
    CHECK(r.cells_per_axis()[1] == 6);
    CHECK(r.n_steps() == 8);
    CHECK(r.dt() == doctest::Approx(g->dt() / 2));
    CHECK(r.T() == g->T());
    CHECK(refine(*g, 1).same_layout(*g));
    CHECK_FALSE(r.same_layout(*g));
    CHECK_THROWS_AS(refine(*g, 0), DomainError);
  }
}

TEST_SUITE("snapshot") {
  TEST_CASE("round trip is bit-exact") {
    Gen gen(42);
    for (int trial = 0; trial < 20; ++trial) {
      BoundarySpec b;
      if (gen.coin()) b.left = BoundaryTag::neumann;
      const auto g = gen.coin() ? testing_support::unit_grid_1d(gen.integer(2, 30), gen.positive(-2, 1),
                                                                 gen.integer(1, 6), b)
                                : testing_support::unit_grid_2d(gen.integer(2, 8), 0.3, gen.integer(1, 4), b);
      Field u(g);
      for (auto& v : u.values()) v = gen.wide_real();
      std::stringstream ss;
      write_snapshot(ss, u);
      const Field back = read_snapshot(ss);
      CHECK(back.grid().same_layout(*g));
      CHECK(back.grid().T() == g->T());
      CHECK(back.grid().boundary().left == b.left);
      const std::span<const double> a = u.values(), c = back.values();
      REQUIRE(a.size() == c.size());
      CHECK(std::equal(a.begin(), a.end(), c.begin()));
    }
  }

  TEST_CASE("malformed snapshots") {
    const auto bad = [](const std::string& text) {
      std::istringstream in(text);
      return read_snapshot(in);
    };
    CHECK_THROWS_AS(bad(""), SnapshotError);
    CHECK_THROWS_AS(bad("# dim 1\n# nodes 3\n# dt 0.5\n"), SnapshotError);
    CHECK_THROWS_AS(bad("# dim 1\n# nodes 3\n# dt 0.5\n# n_steps 1\n0 0 0\n"), SnapshotError);
    CHECK_THROWS_AS(bad("# dim 1\n# nodes 3\n# dt 0.5\n# n_steps 1\n0 0 0\n0 0\n"), SnapshotError);
    CHECK_THROWS_AS(bad("# dim 1\n# nodes 3\n# dt 0.5\n# n_steps 1\n0 0 0\n0 x 0\n"), SnapshotError);
    CHECK_THROWS_AS(bad("# dim 4\n# nodes 3\n# dt 0.5\n# n_steps 1\n0 0 0\n0 0 0\n"), SnapshotError);
    CHECK_THROWS_AS(bad("# dim 1\n# nodes 2\n# dt 0.5\n# n_steps 1\n0 0\n0 0\n"), SnapshotError);
    CHECK_THROWS_AS(read_snapshot(std::string("/nonexistent/dir/u.snap")), SnapshotError);
    const Field ok = bad("# dim 1\n# nodes 3\n# dt 0.5\n# n_steps 1\n0 0 0\n0 1.5 0\n");
    CHECK(ok.slice(1)[1] == 1.5);
    CHECK(ok.grid().T() == doctest::Approx(0.5));
  }
}
