#include <catch2/catch_amalgamated.hpp>

#include <limits>

#include "gpe/graph.hpp"

#include "helpers.hpp"

using gpe::config_error;
using gpe::Graph;
using gpe::GraphBuilder;

TEST_CASE("builder produces sorted symmetric rows for undirected graphs") {
  Graph g = example1_graph();
  REQUIRE(g.num_vertices() == 8);
  REQUIRE(g.num_edges() == 9);
  REQUIRE(g.num_arcs() == 18);
  REQUIRE_FALSE(g.directed());
  REQUIRE_FALSE(g.weighted());

  auto nb2 = g.neighbors(2);
  REQUIRE(std::vector<gpe::vertex_t>(nb2.begin(), nb2.end()) ==
          std::vector<gpe::vertex_t>{0, 1, 3, 4});
  // Symmetry: each arc has its reverse.
  for (gpe::vertex_t i = 0; i < g.num_vertices(); ++i)
    for (gpe::vertex_t j : g.neighbors(i)) REQUIRE(g.has_edge(j, i));
  REQUIRE(g.out_degree(2) == 4);
  REQUIRE(g.out_strength(2) == 4.0);
}

TEST_CASE("directed builder keeps arcs one-way") {
  GraphBuilder b(3, true);
  b.add_edge(0, 1).add_edge(1, 2);
  Graph g = b.build();
  REQUIRE(g.directed());
  REQUIRE(g.num_edges() == 2);
  REQUIRE(g.num_arcs() == 2);
  REQUIRE(g.has_edge(0, 1));
  REQUIRE_FALSE(g.has_edge(1, 0));
  REQUIRE(g.out_degree(2) == 0);
}

TEST_CASE("weighted rows carry weights parallel to neighbors") {
  GraphBuilder b(3, false);
  b.add_edge(0, 1, 0.5).add_edge(1, 2, 2.0);
  Graph g = b.build();
  REQUIRE(g.weighted());
  REQUIRE(g.edge_weight(0, 1) == 0.5);
  REQUIRE(g.edge_weight(1, 0) == 0.5);
  REQUIRE(g.edge_weight(1, 2) == 2.0);
  REQUIRE(g.edge_weight(0, 2) == 0.0);
  REQUIRE(g.out_strength(1) == 2.5);
}

TEST_CASE("builder rejects invalid edges") {
  GraphBuilder b(4, false);
  REQUIRE_THROWS_AS(b.add_edge(1, 1), config_error);
  REQUIRE_THROWS_AS(b.add_edge(0, 4), config_error);
  REQUIRE_THROWS_AS(b.add_edge(0, 1, 0.0), config_error);
  REQUIRE_THROWS_AS(b.add_edge(0, 1, -2.0), config_error);
  REQUIRE_THROWS_AS(b.add_edge(0, 1, std::numeric_limits<double>::infinity()),
                    config_error);
  b.add_edge(0, 1, 1.0);
  REQUIRE_THROWS_AS(b.add_edge(1, 2), config_error);  // mixing weighted/unweighted
}

TEST_CASE("duplicate edges are rejected at build, either orientation") {
  GraphBuilder b(3, false);
  b.add_edge(0, 1).add_edge(1, 0);
  REQUIRE_THROWS_AS(b.build(), config_error);

  GraphBuilder d(3, true);
  d.add_edge(0, 1).add_edge(1, 0).add_edge(0, 1);  // directed: reverse arc is fine
  REQUIRE_THROWS_AS(d.build(), config_error);
}

TEST_CASE("isolated vertex detection") {
  GraphBuilder b(4, false);
  b.add_edge(0, 1).add_edge(1, 2);
  REQUIRE(b.build().has_isolated_vertex());  // vertex 3 untouched
  GraphBuilder c(3, false);
  c.add_edge(0, 1).add_edge(1, 2);
  REQUIRE_FALSE(c.build().has_isolated_vertex());
}

TEST_CASE("edge surgery helpers add and remove undirected edges") {
  Graph g = example1_graph();
  Graph plus = gpe::with_edge_added(g, 0, 3);
  REQUIRE(plus.has_edge(0, 3));
  REQUIRE(plus.has_edge(3, 0));
  REQUIRE(plus.num_edges() == g.num_edges() + 1);

  Graph minus = gpe::with_edge_removed(plus, 0, 3);
  REQUIRE(minus == g);  // full round trip, CSR form is canonical

  REQUIRE_THROWS_AS(gpe::with_edge_added(g, 0, 1), config_error);    // already there
  REQUIRE_THROWS_AS(gpe::with_edge_removed(g, 0, 3), config_error);  // not there

  GraphBuilder db(2, true);
  db.add_edge(0, 1);
  Graph dg = db.build();
  REQUIRE_THROWS_AS(gpe::with_edge_added(dg, 1, 0), config_error);  // directed
}

TEST_CASE("graph equality is structural") {
  REQUIRE(example1_graph() == example1_graph());
  Graph g = example1_graph();
  Graph h = gpe::with_edge_added(g, 0, 3);
  REQUIRE_FALSE(g == h);
}
