#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "gpe/experiments.hpp"

using gpe::config_error;
using gpe::ExperimentConfig;
using gpe::Table;

namespace {

std::string to_csv(const Table& t) {
  std::ostringstream ss;
  gpe::write_table_csv(ss, t);
  return ss.str();
}

double cell(const Table& t, std::size_t row, std::size_t col) {
  return std::stod(t.rows[row][col]);
}

std::size_t column_index(const Table& t, const std::string& name) {
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    if (t.columns[c] == name) return c;
  FAIL("no column named " + name);
  return 0;
}

}  // namespace

TEST_CASE("derived seeds depend on base and position, in order") {
  REQUIRE(gpe::detail::derive_seed(1, {0, 1}) == gpe::detail::derive_seed(1, {0, 1}));
  REQUIRE(gpe::detail::derive_seed(1, {0, 1}) != gpe::detail::derive_seed(1, {1, 0}));
  REQUIRE(gpe::detail::derive_seed(1, {0, 1}) != gpe::detail::derive_seed(2, {0, 1}));
  REQUIRE(gpe::detail::derive_seed(1, {0}) != gpe::detail::derive_seed(1, {0, 0}));
}

TEST_CASE("seed statistics") {
  auto st = gpe::detail::seed_stats({1.0, 2.0, 3.0});
  REQUIRE(st.mean == 2.0);
  REQUIRE_THAT(st.std_dev, Catch::Matchers::WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(st.std_err, Catch::Matchers::WithinAbs(1.0 / std::sqrt(3.0), 1e-15));
  auto single = gpe::detail::seed_stats({4.5});
  REQUIRE(single.mean == 4.5);
  REQUIRE(single.std_dev == 0.0);
}

TEST_CASE("logistic sweep: grid shape and printable r values") {
  ExperimentConfig cfg;
  cfg.id = "logistic";
  cfg.step = 0.05;
  cfg.n = 256;
  Table t = gpe::run_experiment(cfg);
  REQUIRE(t.columns == std::vector<std::string>{"r", "n", "m", "L", "mode",
                                                "normalized_directed",
                                                "normalized_undirected"});
  REQUIRE(t.rows.size() == 10);
  REQUIRE(t.rows.front()[0] == "3.55");
  REQUIRE(t.rows[1][0] == "3.6");  // snapped, not 3.6000000000000001
  REQUIRE(t.rows.back()[0] == "4");
  for (const auto& row : t.rows) {
    double nd = std::stod(row[5]);
    REQUIRE(nd >= 0.0);
    REQUIRE(nd <= 1.0);
  }
}

TEST_CASE("experiment output is a pure function of its config") {
  ExperimentConfig cfg;
  cfg.id = "er";
  cfg.n = 30;
  cfg.seeds = 2;
  cfg.p_grid = {0.3, 0.8};
  Table a = gpe::run_experiment(cfg);
  Table b = gpe::run_experiment(cfg);
  REQUIRE(to_csv(a) == to_csv(b));

  // The worker count must never show in the output.
  cfg.threads = 1;
  Table serial = gpe::run_experiment(cfg);
  cfg.threads = 4;
  Table parallel = gpe::run_experiment(cfg);
  REQUIRE(to_csv(serial) == to_csv(parallel));
  REQUIRE(to_csv(serial) == to_csv(a));

  REQUIRE(a.rows.size() == 12);  // m = 2..7 outer, two p values inner
  REQUIRE(a.rows[0][0] == "2");
  REQUIRE(a.rows[0][1] == "0.3");
  REQUIRE(a.rows[1][1] == "0.8");
  REQUIRE(a.rows[11][0] == "7");
}

TEST_CASE("config fingerprint tracks the config") {
  ExperimentConfig cfg;
  cfg.id = "logistic";
  cfg.step = 0.1;
  cfg.n = 128;
  Table a = gpe::run_experiment(cfg);
  cfg.n = 256;
  Table b = gpe::run_experiment(cfg);
  REQUIRE(a.provenance.size() == 3);
  REQUIRE(a.provenance[0].rfind("gpe ", 0) == 0);
  REQUIRE(a.provenance[2].rfind("config_hash=0x", 0) == 0);
  REQUIRE(a.provenance[2] != b.provenance[2]);
}

TEST_CASE("bipartite sweep matches its closed form") {
  ExperimentConfig cfg;
  cfg.id = "bipartite-sweep";
  cfg.n = 40;
  Table t = gpe::run_experiment(cfg);
  REQUIRE(t.rows.size() == 20);
  std::size_t err_col = column_index(t, "abs_err");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    CAPTURE(r);
    REQUIRE(cell(t, r, err_col) < 1e-12);
  }
  // k runs 1..n/2.
  REQUIRE(t.rows.front()[0] == "1");
  REQUIRE(t.rows.back()[0] == "20");
}

TEST_CASE("regular families order by flattening strength") {
  ExperimentConfig cfg;
  cfg.id = "regular";
  cfg.n = 40;
  cfg.seeds = 3;
  Table t = gpe::run_experiment(cfg);
  REQUIRE(t.rows.size() == 21);  // m = 2..8 by three families
  // m outer, family inner in cycle, bipartite, complete order.
  REQUIRE(t.rows[3][0] == "3");
  REQUIRE(t.rows[3][1] == "cycle");
  REQUIRE(t.rows[5][1] == "complete");
  std::size_t mean_col = column_index(t, "mean");
  REQUIRE(cell(t, 3, mean_col) > cell(t, 5, mean_col));
}

TEST_CASE("mix2d noise raises entropy") {
  ExperimentConfig cfg;
  cfg.id = "mix2d";
  cfg.n = 10;  // one 10x10 size point
  cfg.m = 3;
  cfg.seeds = 2;
  cfg.p_grid = {0.0, 1.0};
  Table t = gpe::run_experiment(cfg);
  REQUIRE(t.rows.size() == 2);
  REQUIRE(t.rows[0][0] == "0");
  REQUIRE(t.rows[1][0] == "1");
  std::size_t mean_col = column_index(t, "mean");
  REQUIRE(cell(t, 0, mean_col) < cell(t, 1, mean_col));
}

TEST_CASE("experiment config validation") {
  ExperimentConfig cfg;
  cfg.id = "nope";
  REQUIRE_THROWS_AS(gpe::run_experiment(cfg), config_error);
  cfg.id = "er";
  cfg.p_grid = {0.0};
  REQUIRE_THROWS_AS(gpe::run_experiment(cfg), config_error);
  cfg.id = "mix2d";
  cfg.p_grid = {1.5};
  REQUIRE_THROWS_AS(gpe::run_experiment(cfg), config_error);
  cfg.id = "logistic";
  cfg.p_grid.clear();
  cfg.step = 5.0;
  REQUIRE_THROWS_AS(gpe::run_experiment(cfg), config_error);
}

TEST_CASE("table serialization shapes") {
  Table t;
  t.provenance = {"gpe test", "line two"};
  t.columns = {"a", "b"};
  t.rows = {{"1", "x"}, {"2", "y"}};

  std::string csv = to_csv(t);
  REQUIRE(csv == "# gpe test\n# line two\na,b\n1,x\n2,y\n");

  std::ostringstream js;
  gpe::write_table_json(js, t);
  auto j = nlohmann::json::parse(js.str());
  REQUIRE(j["columns"] == nlohmann::json::array({"a", "b"}));
  REQUIRE(j["rows"].size() == 2);
  REQUIRE(j["provenance"].size() == 2);
}
