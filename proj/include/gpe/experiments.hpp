#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <initializer_list>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "gpe/builders.hpp"
#include "gpe/entropy.hpp"
#include "gpe/errors.hpp"
#include "gpe/io.hpp"
#include "gpe/rng.hpp"
#include "gpe/signals.hpp"
#include "gpe/version.hpp"

// The experiment harness: canned parameter sweeps emitting one table each.
// Everything here is deterministic for a fixed config: grid points derive
// their seeds from the base seed and their grid position, rows are assembled
// in grid order no matter which worker finished first, and cell values are
// formatted once with shortest round-trip formatting. Wall-clock timings go
// to a side log stream, never into the table, so rerunning a config yields
// byte-identical output files.

namespace gpe {

struct Table {
  std::vector<std::string> provenance;  // comment lines, without the leading '#'
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

inline void write_table_csv(std::ostream& out, const Table& t) {
  for (const auto& line : t.provenance) out << "# " << line << '\n';
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
}

inline void write_table_json(std::ostream& out, const Table& t) {
  nlohmann::json j{{"provenance", t.provenance}, {"columns", t.columns}, {"rows", t.rows}};
  out << j.dump(2) << '\n';
}

inline void write_table(const std::string& path, const Table& t, const std::string& format) {
  auto out = detail::open_output(path);
  if (format == "csv")
    write_table_csv(out, t);
  else if (format == "json")
    write_table_json(out, t);
  else
    throw config_error("unknown output format '" + format + "' (expected csv or json)");
  if (!out) throw parse_error("failed writing '" + path + "'");
}

struct ExperimentConfig {
  std::string id;            // logistic | mix2d | regular | er | bipartite-sweep
  bool full = false;         // full-scale grid instead of the desk-scale default
  std::uint64_t seed = 1;    // base seed; every grid point derives its own from it
  int m = 0;                 // 0 = experiment default
  std::size_t n = 0;         // 0 = experiment default (vertex count / image size cap)
  double step = 0.0;         // logistic r increment; 0 = default
  std::vector<double> p_grid;      // mix2d and er; empty = default
  std::size_t seeds = 0;           // realizations per grid point; 0 = default
  std::size_t threads = 0;         // 0 = hardware concurrency
  std::string mode = "walk";
};

namespace detail {

// Stable per-grid-point seed: base seed folded with the point's position.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> position) {
  std::uint64_t h = fnv1a64_u64(base);
  for (std::uint64_t v : position) h = fnv1a64_u64(v, h);
  return h;
}

struct SeedStats {
  double mean = 0.0;
  double std_dev = 0.0;   // sample standard deviation (n-1 denominator)
  double std_err = 0.0;   // std_dev / sqrt(n)
};

inline SeedStats seed_stats(const std::vector<double>& v) {
  SeedStats s;
  const double n = static_cast<double>(v.size());
  for (double x : v) s.mean += x;
  s.mean /= n;
  if (v.size() > 1) {
    double acc = 0.0;
    for (double x : v) acc += (x - s.mean) * (x - s.mean);
    s.std_dev = std::sqrt(acc / (n - 1.0));
    s.std_err = s.std_dev / std::sqrt(n);
  }
  return s;
}

// Work pool over grid points. Workers pull the next undone index and write
// into its preassigned slot, so output order is the grid order and the
// worker count never shows in the result.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

inline std::string fmt_size(std::size_t v) { return std::to_string(v); }

// Provenance header shared by all experiments: tool version, the canonical
// config line, and an FNV hash of that line for quick comparison.
inline std::vector<std::string> provenance_lines(const std::string& config_line) {
  std::string version_line = std::string("gpe ") + gpe::version;
  std::uint64_t h = fnv1a64(config_line.data(), config_line.size());
  return {version_line, config_line, "config_hash=" + hash_hex(h)};
}

class StopWatch {
 public:
  StopWatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline void log_line(std::ostream* log, const std::string& line) {
  if (log) *log << line << '\n';
}

}  // namespace detail

// Logistic-map sweep: normalized entropy of the same orbit read as a signal
// on the directed and on the undirected path, for r across the whole chaotic
// band. Periodic windows show up as dips. No randomness anywhere, so there
// are no seed statistics.
inline Table run_logistic_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr) {
  const double r0 = 3.55, r1 = 4.0;
  const double step = cfg.step > 0.0 ? cfg.step : (cfg.full ? 1e-4 : 1e-3);
  const std::size_t n = cfg.n ? cfg.n : (cfg.full ? (1u << 14) : (1u << 12));
  const int m = cfg.m ? cfg.m : 3;
  const double x0 = 0.65;
  const Mode mode = parse_mode(cfg.mode);
  if (step <= 0.0 || step > r1 - r0) throw config_error("logistic step out of range");

  const auto count = static_cast<std::size_t>(std::llround((r1 - r0) / step)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    // Snap to the decimal grid the step describes; the accumulated binary
    // error of r0 + i*step would otherwise leak into the printed values.
    double r = r0 + static_cast<double>(i) * step;
    grid[i] = std::min(std::round(r * 1e9) / 1e9, r1);
  }

  const Graph directed = path_graph(n, true);
  const Graph undirected = path_graph(n, false);

  std::string config_line = "experiment=logistic full=" + std::to_string(cfg.full ? 1 : 0) +
                            " r0=" + format_double(r0) + " r1=" + format_double(r1) +
                            " step=" + format_double(step) + " n=" + std::to_string(n) +
                            " x0=" + format_double(x0) + " m=" + std::to_string(m) +
                            " L=1 mode=" + cfg.mode;

  Table t;
  t.provenance = detail::provenance_lines(config_line);
  t.columns = {"r", "n", "m", "L", "mode", "normalized_directed", "normalized_undirected"};
  t.rows.resize(count);

  detail::StopWatch total;
  detail::parallel_for(count, cfg.threads, [&](std::size_t i) {
    detail::StopWatch sw;
    const double r = grid[i];
    std::vector<double> x = logistic_map(r, x0, n);
    EntropyResult dres = peg(directed, x, m, 1, mode, "path");
    EntropyResult ures = peg(undirected, x, m, 1, mode, "path");
    t.rows[i] = {format_double(r),          std::to_string(n), std::to_string(m), "1",
                 cfg.mode,                  format_double(dres.normalized),
                 format_double(ures.normalized)};
    detail::log_line(log, "logistic r=" + format_double(r) + " done in " +
                              format_double(sw.seconds()) + "s");
  });
  detail::log_line(log, "logistic total " + format_double(total.seconds()) + "s");
  return t;
}

// MIX2D sweep: entropy of noisy-sinusoid images on the directed king grid,
// across noise probability and image size, averaged over seeded realizations.
inline Table run_mix2d_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr) {
  std::vector<double> ps = cfg.p_grid.empty()
                               ? std::vector<double>{0.1, 0.25, 0.5, 0.9}
                               : cfg.p_grid;
  const int m = cfg.m ? cfg.m : 6;
  const std::size_t seeds = cfg.seeds ? cfg.seeds : 10;
  const std::size_t max_size = cfg.n ? cfg.n : 100;
  const Mode mode = parse_mode(cfg.mode);
  std::vector<std::size_t> sizes;
  for (std::size_t s = 10; s <= max_size; s += 10) sizes.push_back(s);
  if (sizes.empty()) throw config_error("mix2d needs an image size of at least 10");
  for (double p : ps)
    if (!(p >= 0.0 && p <= 1.0)) throw config_error("mix2d p values must be in [0, 1]");

  std::string config_line = "experiment=mix2d seed=" + std::to_string(cfg.seed) +
                            " m=" + std::to_string(m) + " L=1 mode=" + cfg.mode +
                            " seeds=" + std::to_string(seeds) + " sizes=10.." +
                            std::to_string(sizes.back()) + " p=";
  for (std::size_t i = 0; i < ps.size(); ++i)
    config_line += (i ? "," : "") + format_double(ps[i]);

  Table t;
  t.provenance = detail::provenance_lines(config_line);
  t.columns = {"p", "size", "m", "L", "mode", "seeds", "mean", "std_dev", "std_err"};
  const std::size_t count = ps.size() * sizes.size();
  t.rows.resize(count);

  detail::StopWatch total;
  detail::parallel_for(count, cfg.threads, [&](std::size_t i) {
    detail::StopWatch sw;
    const std::size_t pi = i / sizes.size();
    const std::size_t si = i % sizes.size();
    const double p = ps[pi];
    const std::size_t size = sizes[si];
    const Graph grid = grid_graph(size, size, true);
    std::vector<double> vals(seeds);
    for (std::size_t s = 0; s < seeds; ++s) {
      Matrix img = mix2d(size, size, p, detail::derive_seed(cfg.seed, {pi, si, s}));
      vals[s] = peg(grid, img.data, m, 1, mode, "grid").normalized;
    }
    auto st = detail::seed_stats(vals);
    t.rows[i] = {format_double(p),       std::to_string(size),    std::to_string(m),
                 "1",                    cfg.mode,                std::to_string(seeds),
                 format_double(st.mean), format_double(st.std_dev),
                 format_double(st.std_err)};
    detail::log_line(log, "mix2d p=" + format_double(p) + " size=" + std::to_string(size) +
                              " done in " + format_double(sw.seconds()) + "s");
  });
  detail::log_line(log, "mix2d total " + format_double(total.seconds()) + "s");
  return t;
}

// Regularity ordering: the same Gaussian signals on the cycle, the half-half
// complete bipartite graph, and the complete graph, across m. More regular
// graphs flatten the neighborhood averages and push the entropy down.
inline Table run_regular_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr) {
  const std::size_t n = cfg.n ? cfg.n : 500;
  const std::size_t seeds = cfg.seeds ? cfg.seeds : 20;
  const Mode mode = parse_mode(cfg.mode);
  if (n < 4) throw config_error("regular experiment needs n >= 4");

  const Graph cyc = cycle_graph(n);
  const Graph bip = complete_bipartite_graph(n / 2, n - n / 2);
  const Graph com = complete_graph(n);
  const std::vector<std::pair<const char*, const Graph*>> families = {
      {"cycle", &cyc}, {"bipartite", &bip}, {"complete", &com}};

  std::string config_line = "experiment=regular seed=" + std::to_string(cfg.seed) +
                            " n=" + std::to_string(n) + " seeds=" + std::to_string(seeds) +
                            " m=2..8 L=1 mode=" + cfg.mode;

  Table t;
  t.provenance = detail::provenance_lines(config_line);
  t.columns = {"m", "family", "n", "seeds", "mode", "mean", "std_dev", "std_err"};
  const std::vector<int> ms = {2, 3, 4, 5, 6, 7, 8};
  const std::size_t count = ms.size() * families.size();
  t.rows.resize(count);

  detail::StopWatch total;
  detail::parallel_for(count, cfg.threads, [&](std::size_t i) {
    detail::StopWatch sw;
    const int m = ms[i / families.size()];
    const auto& [family, graph] = families[i % families.size()];
    std::vector<double> vals(seeds);
    for (std::size_t s = 0; s < seeds; ++s) {
      // One signal per seed index, shared by the three families and all m.
      std::vector<double> x = gaussian_noise(n, detail::derive_seed(cfg.seed, {s}));
      vals[s] = peg(*graph, x, m, 1, mode, family).normalized;
    }
    auto st = detail::seed_stats(vals);
    t.rows[i] = {std::to_string(m),       family,
                 std::to_string(n),       std::to_string(seeds),
                 cfg.mode,                format_double(st.mean),
                 format_double(st.std_dev), format_double(st.std_err)};
    detail::log_line(log, std::string("regular m=") + std::to_string(m) + " " + family +
                              " done in " + format_double(sw.seconds()) + "s");
  });
  detail::log_line(log, "regular total " + format_double(total.seconds()) + "s");
  return t;
}

// Connectivity ordering on random graphs: Gaussian signals on G(n, p) across
// edge probability and m. Denser graphs average more aggressively, so
// entropy falls as p rises.
inline Table run_er_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr) {
  const std::size_t n = cfg.n ? cfg.n : (cfg.full ? 2000 : 500);
  const std::size_t seeds = cfg.seeds ? cfg.seeds : (cfg.full ? 20 : 10);
  std::vector<double> ps = cfg.p_grid.empty() ? std::vector<double>{0.1, 0.3, 0.6, 0.9}
                                              : cfg.p_grid;
  const Mode mode = parse_mode(cfg.mode);
  for (double p : ps)
    if (!(p > 0.0 && p <= 1.0))
      throw config_error("er p values must be in (0, 1]; p=0 gives an edgeless graph");

  std::string config_line = "experiment=er seed=" + std::to_string(cfg.seed) +
                            " full=" + std::to_string(cfg.full ? 1 : 0) +
                            " n=" + std::to_string(n) + " seeds=" + std::to_string(seeds) +
                            " m=2..7 L=1 mode=" + cfg.mode + " p=";
  for (std::size_t i = 0; i < ps.size(); ++i)
    config_line += (i ? "," : "") + format_double(ps[i]);

  Table t;
  t.provenance = detail::provenance_lines(config_line);
  t.columns = {"m", "p", "n", "seeds", "mode", "mean", "std_dev", "std_err"};
  const std::vector<int> ms = {2, 3, 4, 5, 6, 7};
  const std::size_t count = ms.size() * ps.size();
  t.rows.resize(count);

  detail::StopWatch total;
  detail::parallel_for(count, cfg.threads, [&](std::size_t i) {
    detail::StopWatch sw;
    const int m = ms[i / ps.size()];
    const std::size_t pi = i % ps.size();
    const double p = ps[pi];
    std::vector<double> vals(seeds);
    for (std::size_t s = 0; s < seeds; ++s) {
      // One stream per (p, seed) point: graph drawn first, signal second.
      // m is deliberately absent from the derivation, so every m sees the
      // same graph and signal, as one realization should.
      Rng rng(detail::derive_seed(cfg.seed, {pi, s}));
      Graph g = erdos_renyi_graph(n, p, rng);
      std::vector<double> x = gaussian_noise(n, rng);
      while (g.has_isolated_vertex()) {
        // Possible only for tiny p; redraw deterministically from the stream.
        g = erdos_renyi_graph(n, p, rng);
        x = gaussian_noise(n, rng);
      }
      vals[s] = peg(g, x, m, 1, mode, "er").normalized;
    }
    auto st = detail::seed_stats(vals);
    t.rows[i] = {std::to_string(m),         format_double(p),
                 std::to_string(n),         std::to_string(seeds),
                 cfg.mode,                  format_double(st.mean),
                 format_double(st.std_dev), format_double(st.std_err)};
    detail::log_line(log, "er m=" + std::to_string(m) + " p=" + format_double(p) +
                              " done in " + format_double(sw.seconds()) + "s");
  });
  detail::log_line(log, "er total " + format_double(total.seconds()) + "s");
  return t;
}

// Raw two-pattern entropy of complete bipartite graphs with the k largest
// signal values on one side, swept over k, next to its closed form
// -((n-k)/n)ln((n-k)/n) - (k/n)ln(k/n).
inline Table run_bipartite_sweep_experiment(const ExperimentConfig& cfg,
                                            std::ostream* log = nullptr) {
  const std::size_t n = cfg.n ? cfg.n : 2000;
  const Mode mode = parse_mode(cfg.mode);
  if (n < 4) throw config_error("bipartite sweep needs n >= 4");

  // One random signal for the whole sweep; only the induced order matters.
  std::vector<double> x = gaussian_noise(n, detail::derive_seed(cfg.seed, {0}));
  std::sort(x.begin(), x.end(), std::greater<>());  // k largest = first k entries

  std::string config_line = "experiment=bipartite-sweep seed=" + std::to_string(cfg.seed) +
                            " n=" + std::to_string(n) + " m=2 L=1 mode=" + cfg.mode;

  Table t;
  t.provenance = detail::provenance_lines(config_line);
  t.columns = {"k", "n", "m", "L", "mode", "peg_raw", "closed_form_raw", "abs_err"};
  const std::size_t count = n / 2;
  t.rows.resize(count);

  detail::StopWatch total;
  detail::parallel_for(count, cfg.threads, [&](std::size_t i) {
    const std::size_t k = i + 1;
    const Graph g = complete_bipartite_graph(k, n - k);
    EntropyResult res = peg(g, x, 2, 1, mode, "bipartite");
    const double a = static_cast<double>(n - k) / static_cast<double>(n);
    const double b = static_cast<double>(k) / static_cast<double>(n);
    const double closed = -a * std::log(a) - b * std::log(b);
    t.rows[i] = {std::to_string(k),      std::to_string(n),
                 "2",                    "1",
                 cfg.mode,               format_double(res.raw),
                 format_double(closed),  format_double(std::abs(res.raw - closed))};
  });
  detail::log_line(log, "bipartite-sweep total " + format_double(total.seconds()) + "s");
  return t;
}

inline Table run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr) {
  if (cfg.id == "logistic") return run_logistic_experiment(cfg, log);
  if (cfg.id == "mix2d") return run_mix2d_experiment(cfg, log);
  if (cfg.id == "regular") return run_regular_experiment(cfg, log);
  if (cfg.id == "er") return run_er_experiment(cfg, log);
  if (cfg.id == "bipartite-sweep") return run_bipartite_sweep_experiment(cfg, log);
  throw config_error("unknown experiment '" + cfg.id +
                     "' (have: logistic, mix2d, regular, er, bipartite-sweep)");
}

}
