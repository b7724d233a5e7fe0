// Command-line front end: classical permutation entropy (pe), permutation
// entropy for graph signals (peg), and the canned experiment sweeps.
// Exit codes: 0 success, 2 configuration error, 3 parse error, 4 domain
// error (isolated vertex, empty embedding, and the like).

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gpe/gpe.hpp"

namespace {

// Inline spec grammar for graphs and generators: comma-separated tokens, the
// first names the kind, the rest are key=value pairs or bare flags, e.g.
// "path,n=500,directed" or "er,n=500,p=0.3".
struct KvSpec {
  std::string kind;
  std::map<std::string, std::string> kv;
  std::set<std::string> flags;
};

KvSpec parse_spec(const std::string& s) {
  KvSpec spec;
  std::size_t start = 0;
  bool first = true;
  while (start <= s.size()) {
    std::size_t pos = s.find(',', start);
    std::string tok = s.substr(start, pos == std::string::npos ? pos : pos - start);
    if (first) {
      spec.kind = tok;
      first = false;
    } else if (auto eq = tok.find('='); eq != std::string::npos) {
      spec.kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    } else if (!tok.empty()) {
      spec.flags.insert(tok);
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (spec.kind.empty()) throw gpe::config_error("empty spec string");
  return spec;
}

std::uint64_t spec_u64(const KvSpec& s, const std::string& key,
                       std::optional<std::uint64_t> fallback = std::nullopt) {
  auto it = s.kv.find(key);
  if (it == s.kv.end()) {
    if (fallback) return *fallback;
    throw gpe::config_error("spec '" + s.kind + "' needs " + key + "=<integer>");
  }
  try {
    return std::stoull(it->second);
  } catch (const std::exception&) {
    throw gpe::config_error("spec '" + s.kind + "': bad integer for " + key + ": '" +
                            it->second + "'");
  }
}

double spec_f64(const KvSpec& s, const std::string& key,
                std::optional<double> fallback = std::nullopt) {
  auto it = s.kv.find(key);
  if (it == s.kv.end()) {
    if (fallback) return *fallback;
    throw gpe::config_error("spec '" + s.kind + "' needs " + key + "=<number>");
  }
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw gpe::config_error("spec '" + s.kind + "': bad number for " + key + ": '" +
                            it->second + "'");
  }
}

// Direction requested on the command line: unset means "whatever the builder
// string or file says".
enum class Direction { unset, directed, undirected };

bool spec_directed(const KvSpec& s, Direction cli, bool fallback) {
  if (s.flags.count("directed") && s.flags.count("undirected"))
    throw gpe::config_error("spec '" + s.kind + "' is both directed and undirected");
  if (cli == Direction::directed) return true;
  if (cli == Direction::undirected) return false;
  if (s.flags.count("directed")) return true;
  if (s.flags.count("undirected")) return false;
  return fallback;
}

gpe::Graph build_graph(const std::string& arg, Direction dir, std::uint64_t seed,
                       std::string& kind_out) {
  if (std::filesystem::exists(arg)) {
    if (dir != Direction::unset)
      throw gpe::config_error("direction of a graph file comes from its header; "
                              "drop --directed/--undirected");
    kind_out = "file";
    return gpe::read_edge_list(arg);
  }
  KvSpec s = parse_spec(arg);
  kind_out = s.kind;
  if (s.kind == "path")
    return gpe::path_graph(spec_u64(s, "n"), spec_directed(s, dir, false));
  if (s.kind == "cycle") return gpe::cycle_graph(spec_u64(s, "n"));
  if (s.kind == "complete") return gpe::complete_graph(spec_u64(s, "n"));
  if (s.kind == "star") return gpe::star_graph(spec_u64(s, "n"));
  if (s.kind == "bipartite")
    return gpe::complete_bipartite_graph(spec_u64(s, "n1"), spec_u64(s, "n2"));
  if (s.kind == "grid")
    return gpe::grid_graph(spec_u64(s, "rows"), spec_u64(s, "cols"),
                           spec_directed(s, dir, true));
  if (s.kind == "er")
    return gpe::erdos_renyi_graph(spec_u64(s, "n"), spec_f64(s, "p"),
                                  spec_u64(s, "seed", seed));
  if (s.kind == "kernel") {
    auto it = s.kv.find("coords");
    if (it == s.kv.end()) throw gpe::config_error("kernel spec needs coords=<csv file>");
    return gpe::gaussian_kernel_graph(gpe::read_coords(it->second), spec_f64(s, "sigma1"),
                                      spec_f64(s, "sigma2"));
  }
  throw gpe::config_error(
      "unknown graph '" + arg +
      "': not an existing file, and not one of path, cycle, complete, star, bipartite, "
      "grid, er, kernel");
}

// n_hint lets generators default their length to the graph's vertex count.
std::vector<double> generate_signal(const std::string& arg, std::uint64_t seed,
                                    std::optional<std::uint64_t> n_hint) {
  KvSpec s = parse_spec(arg);
  if (s.kind == "logistic") {
    std::uint64_t n = spec_u64(s, "n", n_hint);
    return gpe::logistic_map(spec_f64(s, "r"), spec_f64(s, "x0", 0.65), n,
                             spec_u64(s, "burnin", std::uint64_t{0}));
  }
  if (s.kind == "noise") {
    std::uint64_t n = spec_u64(s, "n", n_hint);
    return gpe::gaussian_noise(n, spec_u64(s, "seed", seed));
  }
  if (s.kind == "mix2d") {
    std::uint64_t rows = spec_u64(s, "rows");
    std::uint64_t cols = spec_u64(s, "cols");
    return gpe::mix2d(rows, cols, spec_f64(s, "p"), spec_u64(s, "seed", seed)).data;
  }
  throw gpe::config_error("unknown generator '" + arg +
                          "': expected logistic, noise, or mix2d");
}

void warn_m_range(int m) {
  if (m < 3 || m > 7)
    std::cerr << "warning: m=" << m
              << " is outside the recommended range [3, 7]; results may be degenerate "
                 "or undersampled\n";
}

void print_result_text(std::ostream& out, const gpe::EntropyResult& res) {
  if (!res.graph.kind.empty())
    out << "graph: kind=" << res.graph.kind << " n=" << res.graph.n
        << " directed=" << (res.graph.directed ? 1 : 0)
        << " weighted=" << (res.graph.weighted ? 1 : 0) << " edges=" << res.graph.edges
        << '\n';
  out << "m=" << res.m << " L=" << res.L << " mode=" << gpe::mode_name(res.mode)
      << " total=" << res.histogram.total() << " tie_rows=" << res.tie_rows << '\n';
  out << "raw_nats=" << gpe::format_double(res.raw)
      << " normalized=" << gpe::format_double(res.normalized) << '\n';
  auto bins = res.histogram.nonzero();
  out << "histogram:";
  const std::size_t shown = std::min<std::size_t>(bins.size(), 120);
  for (std::size_t i = 0; i < shown; ++i)
    out << ' ' << bins[i].first << ':' << bins[i].second;
  if (shown < bins.size()) out << " (+" << bins.size() - shown << " more bins)";
  out << '\n';
  out << "signal_hash=" << gpe::hash_hex(res.signal_hash) << '\n';
}

void write_result_csv(std::ostream& out, const gpe::EntropyResult& res) {
  out << "m,L,mode,n,total,raw_nats,normalized,tie_rows,signal_hash\n";
  out << res.m << ',' << res.L << ',' << gpe::mode_name(res.mode) << ',' << res.graph.n
      << ',' << res.histogram.total() << ',' << gpe::format_double(res.raw) << ','
      << gpe::format_double(res.normalized) << ',' << res.tie_rows << ','
      << gpe::hash_hex(res.signal_hash) << '\n';
}

void emit_result(const gpe::EntropyResult& res, const std::string& out_path,
                 const std::string& format) {
  if (out_path.empty()) {
    print_result_text(std::cout, res);
    return;
  }
  if (format == "json") {
    gpe::write_result(res, out_path);
  } else if (format == "csv") {
    auto out = gpe::detail::open_output(out_path);
    write_result_csv(out, res);
  } else {
    throw gpe::config_error("unknown output format '" + format + "' (expected csv or json)");
  }
  std::cerr << "wrote " << out_path << '\n';
}

std::vector<double> parse_p_list(const std::string& s) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t pos = s.find(',', start);
    std::string tok = s.substr(start, pos == std::string::npos ? pos : pos - start);
    if (!tok.empty()) {
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw gpe::config_error("bad probability '" + tok + "' in --p list");
      }
    }
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"permutation entropy for signals on graphs"};
  app.require_subcommand(1);

  // pe: classical permutation entropy of a time series.
  auto* pe = app.add_subcommand("pe", "permutation entropy of a time series");
  std::string pe_signal, pe_gen, pe_out, pe_format = "json";
  int pe_m = 3, pe_L = 1;
  std::uint64_t pe_seed = 1;
  pe->add_option("--signal", pe_signal, "signal file (one value per line or vertex,value)");
  pe->add_option("--gen", pe_gen, "generator spec, e.g. logistic,r=3.8,n=4096");
  pe->add_option("--m", pe_m, "embedding dimension")->capture_default_str();
  pe->add_option("--L", pe_L, "delay")->capture_default_str();
  pe->add_option("--seed", pe_seed, "seed for seeded generators")->capture_default_str();
  pe->add_option("--out", pe_out, "write the result to this file instead of stdout");
  pe->add_option("--format", pe_format, "file output format: json or csv")
      ->capture_default_str();

  // peg: permutation entropy of a signal living on a graph.
  auto* peg = app.add_subcommand("peg", "permutation entropy of a graph signal");
  std::string peg_graph, peg_signal, peg_gen, peg_image, peg_mode = "walk";
  std::string peg_out, peg_format = "json";
  int peg_m = 3, peg_L = 1;
  std::uint64_t peg_seed = 1;
  bool peg_directed = false, peg_undirected = false;
  peg->add_option("--graph", peg_graph,
                  "edge-list file or builder spec (path,n=9 cycle,n=9 complete,n=9 "
                  "star,n=9 bipartite,n1=4,n2=5 grid,rows=3,cols=3 er,n=50,p=0.3 "
                  "kernel,coords=f.csv,sigma1=1,sigma2=2)");
  peg->add_option("--signal", peg_signal, "signal file");
  peg->add_option("--gen", peg_gen, "generator spec (length defaults to the graph size)");
  peg->add_option("--image", peg_image,
                  "matrix file (PGM or CSV); implies a directed king grid of the same "
                  "shape when --graph is omitted");
  peg->add_option("--m", peg_m, "embedding dimension")->capture_default_str();
  peg->add_option("--L", peg_L, "delay")->capture_default_str();
  peg->add_option("--mode", peg_mode, "neighborhood aggregation: walk or set")
      ->capture_default_str();
  peg->add_flag("--directed", peg_directed, "force builder specs to the directed variant");
  peg->add_flag("--undirected", peg_undirected,
                "force builder specs to the undirected variant");
  peg->add_option("--seed", peg_seed, "seed for seeded builders/generators")
      ->capture_default_str();
  peg->add_option("--out", peg_out, "write the result to this file instead of stdout");
  peg->add_option("--format", peg_format, "file output format: json or csv")
      ->capture_default_str();

  // experiment: the canned sweeps.
  auto* exp = app.add_subcommand("experiment", "run a canned parameter sweep");
  std::string exp_id, exp_out, exp_format = "csv", exp_p, exp_mode = "walk";
  std::uint64_t exp_seed = 1;
  bool exp_full = false;
  int exp_m = 0;
  std::size_t exp_n = 0, exp_seeds = 0, exp_threads = 0;
  double exp_step = 0.0;
  exp->add_option("id", exp_id, "logistic | mix2d | regular | er | bipartite-sweep")
      ->required();
  exp->add_option("--out", exp_out, "output file (stdout when omitted)");
  exp->add_option("--format", exp_format, "csv or json")->capture_default_str();
  exp->add_option("--seed", exp_seed, "base seed")->capture_default_str();
  exp->add_flag("--full", exp_full, "full-scale grid instead of the desk-scale default");
  exp->add_option("--m", exp_m, "embedding dimension override (where configurable)");
  exp->add_option("--N", exp_n, "vertex count / maximum image size override");
  exp->add_option("--step", exp_step, "logistic r increment override");
  exp->add_option("--p", exp_p, "comma-separated probability grid override");
  exp->add_option("--seeds", exp_seeds, "realizations per grid point override");
  exp->add_option("--threads", exp_threads, "worker threads (0 = hardware)");
  exp->add_option("--mode", exp_mode, "neighborhood aggregation: walk or set")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (pe->parsed()) {
      if (pe_signal.empty() == pe_gen.empty())
        throw gpe::config_error("pe needs exactly one of --signal or --gen");
      warn_m_range(pe_m);
      std::vector<double> x = pe_signal.empty()
                                  ? generate_signal(pe_gen, pe_seed, std::nullopt)
                                  : gpe::read_signal(pe_signal);
      emit_result(gpe::pe_time_series(x, pe_m, pe_L), pe_out, pe_format);
    } else if (peg->parsed()) {
      if (peg_directed && peg_undirected)
        throw gpe::config_error("--directed and --undirected are mutually exclusive");
      Direction dir = peg_directed ? Direction::directed
                                   : (peg_undirected ? Direction::undirected
                                                     : Direction::unset);
      int sources = (!peg_signal.empty()) + (!peg_gen.empty()) + (!peg_image.empty());
      if (sources != 1)
        throw gpe::config_error("peg needs exactly one of --signal, --gen, or --image");
      warn_m_range(peg_m);

      std::optional<gpe::Graph> g;
      std::string kind;
      std::vector<double> x;
      if (!peg_image.empty()) {
        gpe::Matrix img = gpe::read_matrix(peg_image);
        x = img.data;
        if (peg_graph.empty()) {
          bool d = dir != Direction::undirected;  // image grids default directed
          g = gpe::grid_graph(img.rows, img.cols, d);
          kind = "grid";
        }
      }
      if (!g) {
        if (peg_graph.empty()) throw gpe::config_error("peg needs --graph (or --image)");
        g = build_graph(peg_graph, dir, peg_seed, kind);
      }
      if (!peg_signal.empty()) x = gpe::read_signal(peg_signal);
      if (!peg_gen.empty()) x = generate_signal(peg_gen, peg_seed, g->num_vertices());
      if (x.size() != g->num_vertices())
        throw gpe::config_error("signal length " + std::to_string(x.size()) +
                                " does not match the graph's " +
                                std::to_string(g->num_vertices()) + " vertices");
      emit_result(gpe::peg(*g, x, peg_m, peg_L, gpe::parse_mode(peg_mode), kind), peg_out,
                  peg_format);
    } else if (exp->parsed()) {
      gpe::ExperimentConfig cfg;
      cfg.id = exp_id;
      cfg.full = exp_full;
      cfg.seed = exp_seed;
      cfg.m = exp_m;
      cfg.n = exp_n;
      cfg.step = exp_step;
      cfg.seeds = exp_seeds;
      cfg.threads = exp_threads;
      cfg.mode = exp_mode;
      if (!exp_p.empty()) cfg.p_grid = parse_p_list(exp_p);
      gpe::Table t = gpe::run_experiment(cfg, &std::cerr);
      if (exp_out.empty()) {
        if (exp_format == "csv")
          gpe::write_table_csv(std::cout, t);
        else if (exp_format == "json")
          gpe::write_table_json(std::cout, t);
        else
          throw gpe::config_error("unknown output format '" + exp_format + "'");
      } else {
        gpe::write_table(exp_out, t, exp_format);
        std::cerr << "wrote " << exp_out << '\n';
      }
    }
  } catch (const gpe::config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const gpe::parse_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const gpe::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
