#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gpe/builders.hpp"
#include "gpe/entropy.hpp"
#include "gpe/io.hpp"
#include "helpers.hpp"

using gpe::config_error;
using gpe::Graph;
using gpe::parse_error;

namespace {

std::string tmp_path(const std::string& name) {
  std::filesystem::create_directories("tmp_io");
  return "tmp_io/" + name;
}

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("edge list fixtures load as expected") {
  Graph g = gpe::read_edge_list(fixture("example1.edges"));
  REQUIRE(g == example1_graph());

  Graph w = gpe::read_edge_list(fixture("weighted5.edges"));
  REQUIRE(w.num_vertices() == 5);
  REQUIRE(w.num_edges() == 6);
  REQUIRE(w.weighted());
  REQUIRE_FALSE(w.directed());
  REQUIRE(w.edge_weight(0, 1) == 0.5);
  REQUIRE(w.edge_weight(1, 4) == 0.75);
  REQUIRE(w.edge_weight(4, 0) == 3.0);

  Graph d = gpe::read_edge_list(fixture("directed6.edges"));
  REQUIRE(d.directed());
  REQUIRE(d.num_vertices() == 6);
  REQUIRE(d.num_arcs() == 6);
  REQUIRE(d.has_edge(0, 1));
  REQUIRE_FALSE(d.has_edge(1, 0));
}

TEST_CASE("signal fixtures: plain and pair forms agree") {
  auto plain = gpe::read_signal(fixture("example1_signal.csv"));
  auto pairs = gpe::read_signal(fixture("example1_signal_pairs.csv"));
  REQUIRE(plain == example1_signal());
  REQUIRE(pairs == plain);
}

TEST_CASE("graph writing is canonical and lossless") {
  for (const char* name : {"example1.edges", "weighted5.edges", "directed6.edges"}) {
    Graph g = gpe::read_edge_list(fixture(name));
    std::string p1 = tmp_path(std::string("rt1_") + name);
    std::string p2 = tmp_path(std::string("rt2_") + name);
    gpe::write_edge_list(p1, g);
    Graph back = gpe::read_edge_list(p1);
    REQUIRE(back == g);
    gpe::write_edge_list(p2, back);
    // A rewrite of a reread changes nothing: the format has one spelling.
    REQUIRE(file_bytes(p1) == file_bytes(p2));
  }
}

TEST_CASE("signal writing round trips exact values") {
  std::vector<double> x = {0.1, 1.0 / 3.0, -2.5e-10, 1e300, 0.0, -7.0};
  std::string p = tmp_path("signal_rt.csv");
  gpe::write_signal(p, x);
  REQUIRE(gpe::read_signal(p) == x);
}

TEST_CASE("shortest-round-trip double formatting") {
  REQUIRE(gpe::format_double(0.1) == "0.1");
  REQUIRE(gpe::format_double(1.0) == "1");
  REQUIRE(gpe::format_double(-2.0) == "-2");
  for (double v : {1.0 / 3.0, 6.02e23, -0.0001, 123456.789}) {
    double back = std::stod(gpe::format_double(v));
    REQUIRE(back == v);
  }
}

TEST_CASE("ascii pgm probe image") {
  auto m = gpe::read_matrix(fixture("tiny.pgm"));
  REQUIRE(m.rows == 2);
  REQUIRE(m.cols == 2);
  REQUIRE(m.at(0, 0) == 0.0);
  REQUIRE(m.at(0, 1) == 255.0);
  REQUIRE(m.at(1, 0) == 128.0);
  REQUIRE(m.at(1, 1) == 64.0);
}

TEST_CASE("binary pgm round trips at 8 and 16 bits") {
  gpe::Matrix m{2, 3, {0, 17, 255, 128, 1, 42}};
  std::string p8 = tmp_path("rt8.pgm");
  gpe::write_matrix_pgm(p8, m, true, 255);
  auto back8 = gpe::read_matrix(p8);
  REQUIRE(back8.data == m.data);

  // Two-byte samples are big-endian: 4660 = 0x1234 must survive.
  gpe::Matrix wide{1, 3, {4660, 0, 65535}};
  std::string p16 = tmp_path("rt16.pgm");
  gpe::write_matrix_pgm(p16, wide, true, 65535);
  auto back16 = gpe::read_matrix(p16);
  REQUIRE(back16.data == wide.data);
  std::string bytes = file_bytes(p16);
  // Header "P5\n3 1\n65535\n" then 0x12 0x34 as the first sample.
  REQUIRE(static_cast<unsigned char>(bytes[bytes.size() - 6]) == 0x12);
  REQUIRE(static_cast<unsigned char>(bytes[bytes.size() - 5]) == 0x34);

  // ASCII output reads back identically too.
  std::string pa = tmp_path("rt_ascii.pgm");
  gpe::write_matrix_pgm(pa, m, false, 255);
  REQUIRE(gpe::read_matrix(pa).data == m.data);

  gpe::Matrix frac{1, 1, {0.5}};
  REQUIRE_THROWS_AS(gpe::write_matrix_pgm(tmp_path("bad.pgm"), frac, true, 255), config_error);
}

TEST_CASE("csv matrix input") {
  auto m = gpe::read_matrix(fixture("matrix2x3.csv"));
  REQUIRE(m.rows == 2);
  REQUIRE(m.cols == 3);
  REQUIRE(m.data == std::vector<double>{1.5, -2.0, 0.25, 4.0, 5.5, -6.0});

  std::string p = tmp_path("matrix_rt.csv");
  gpe::write_matrix_csv(p, m);
  auto back = gpe::read_matrix(p);
  REQUIRE(back.rows == m.rows);
  REQUIRE(back.cols == m.cols);
  REQUIRE(back.data == m.data);

  std::string ragged = tmp_path("ragged.csv");
  std::ofstream(ragged) << "1,2,3\n4,5\n";
  REQUIRE_THROWS_AS(gpe::read_matrix(ragged), parse_error);
}

TEST_CASE("coordinate files") {
  auto pts = gpe::read_coords(fixture("coords4.csv"));
  REQUIRE(pts.size() == 4);
  REQUIRE(pts[1].x == 1.0);
  REQUIRE(pts[1].y == 0.0);
  REQUIRE(pts[3].x == 5.0);

  std::string gap = tmp_path("gap.csv");
  std::ofstream(gap) << "1,0,0\n3,1,1\n";
  REQUIRE_THROWS_AS(gpe::read_coords(gap), parse_error);
  std::string dup = tmp_path("dupcoord.csv");
  std::ofstream(dup) << "1,0,0\n1,1,1\n";
  REQUIRE_THROWS_AS(gpe::read_coords(dup), parse_error);
}

TEST_CASE("malformed input battery") {
  // Structural violations of an otherwise well-formed file are config
  // errors; unreadable content is a parse error. Messages carry file:line.
  REQUIRE_THROWS_AS(gpe::read_edge_list(fixture("bad/selfloop.edges")), config_error);
  REQUIRE_THROWS_AS(gpe::read_edge_list(fixture("bad/duplicate.edges")), config_error);
  REQUIRE_THROWS_AS(gpe::read_edge_list(fixture("bad/negweight.edges")), config_error);
  REQUIRE_THROWS_AS(gpe::read_edge_list(fixture("bad/badtoken.edges")), parse_error);
  REQUIRE_THROWS_AS(gpe::read_edge_list(fixture("bad/mixedweight.edges")), parse_error);
  REQUIRE_THROWS_AS(gpe::read_edge_list(fixture("bad/lateheader.edges")), parse_error);
  REQUIRE_THROWS_AS(gpe::read_signal(fixture("bad/mixedsignal.csv")), parse_error);
  REQUIRE_THROWS_AS(gpe::read_signal(fixture("bad/dupvertex.csv")), parse_error);
  REQUIRE_THROWS_AS(gpe::read_matrix(fixture("bad/badmagic.pgm")), parse_error);
  REQUIRE_THROWS_AS(gpe::read_matrix(fixture("bad/truncated.pgm")), parse_error);

  REQUIRE_THROWS_WITH(gpe::read_edge_list(fixture("bad/badtoken.edges")),
                      Catch::Matchers::ContainsSubstring(":2:"));
  REQUIRE_THROWS_WITH(gpe::read_edge_list(fixture("bad/duplicate.edges")),
                      Catch::Matchers::ContainsSubstring(":3:"));

  REQUIRE_THROWS_AS(gpe::read_edge_list("no_such_file.edges"), parse_error);
  REQUIRE_THROWS_AS(gpe::read_signal("no_such_file.csv"), parse_error);
}

TEST_CASE("result json round trip") {
  auto res = gpe::peg(example1_graph(), example1_signal(), 2, 1);
  std::string p = tmp_path("result.json");
  gpe::write_result(res, p);
  auto back = gpe::read_result(p);
  REQUIRE(back.m == res.m);
  REQUIRE(back.L == res.L);
  REQUIRE(back.mode == res.mode);
  REQUIRE(back.raw == res.raw);
  REQUIRE(back.normalized == res.normalized);
  REQUIRE(back.tie_rows == res.tie_rows);
  REQUIRE(back.histogram == res.histogram);
  REQUIRE(back.signal_hash == res.signal_hash);
  REQUIRE(back.graph.kind == res.graph.kind);
  REQUIRE(back.graph.n == res.graph.n);
  REQUIRE(back.graph.edges == res.graph.edges);

  auto j = gpe::result_to_json(res);
  j["total"] = 999;
  REQUIRE_THROWS_AS(gpe::result_from_json(j), parse_error);
  j.erase("total");
  REQUIRE_THROWS_AS(gpe::result_from_json(j), parse_error);
}

TEST_CASE("hash strings are fixed-width hex") {
  REQUIRE(gpe::hash_hex(0x1234) == "0x0000000000001234");
  REQUIRE(gpe::hash_hex(0xffffffffffffffffULL) == "0xffffffffffffffff");
}
