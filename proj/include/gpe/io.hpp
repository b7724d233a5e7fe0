#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "gpe/builders.hpp"
#include "gpe/entropy.hpp"
#include "gpe/errors.hpp"
#include "gpe/graph.hpp"
#include "gpe/signals.hpp"
#include "gpe/walk.hpp"

// Disk boundary. Vertex ids are 1-based in every file format and 0-based in
// every in-memory structure; the conversion happens here and nowhere else.
// Readers reject malformed input outright, with the offending line in the
// message: token-level garbage throws parse_error, structurally invalid
// graphs (self loops, bad weights, duplicates) throw config_error.

namespace gpe {

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// Whitespace-separated fields (canonical files use tabs, spaces also pass).
inline std::vector<std::string> fields(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline std::uint64_t parse_u64(const std::string& tok, const std::string& path,
                               std::size_t line) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw parse_error(path, line, "expected an unsigned integer, got '" + tok + "'");
  return v;
}

inline double parse_f64(const std::string& tok, const std::string& path,
                        std::size_t line) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw parse_error(path, line, "expected a number, got '" + tok + "'");
  return v;
}

inline std::ifstream open_input(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw parse_error("cannot open '" + path + "' for reading");
  return in;
}

inline std::ofstream open_output(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw parse_error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace detail

// Edge list: one edge per line as `u<TAB>v[<TAB>w]`, 1-based ids, optional
// leading `%directed` / `%undirected` header (undirected when absent),
// `#` starts a comment. Vertex count is the largest id mentioned.
inline Graph read_edge_list(const std::string& path) {
  auto in = detail::open_input(path);
  std::string raw;
  std::size_t lineno = 0;
  bool directed = false;
  bool saw_header = false, saw_edge = false;
  bool weighted = false;

  struct Edge {
    std::uint64_t u, v;
    double w;
    std::size_t line;
  };
  std::vector<Edge> edges;
  std::uint64_t max_id = 0;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line[0] == '%') {
      if (saw_header || saw_edge)
        throw parse_error(path, lineno, "direction header must be the first content line");
      if (line == "%directed")
        directed = true;
      else if (line == "%undirected")
        directed = false;
      else
        throw parse_error(path, lineno, "unknown header '" + line + "'");
      saw_header = true;
      continue;
    }
    auto toks = detail::fields(line);
    if (toks.size() != 2 && toks.size() != 3)
      throw parse_error(path, lineno, "expected 'u v' or 'u v w', got " +
                                          std::to_string(toks.size()) + " fields");
    std::uint64_t u = detail::parse_u64(toks[0], path, lineno);
    std::uint64_t v = detail::parse_u64(toks[1], path, lineno);
    if (u == 0 || v == 0)
      throw parse_error(path, lineno, "vertex ids are 1-based; 0 is not a vertex");
    double w = 1.0;
    bool has_w = toks.size() == 3;
    if (has_w) w = detail::parse_f64(toks[2], path, lineno);
    if (!saw_edge) {
      weighted = has_w;
    } else if (has_w != weighted) {
      throw parse_error(path, lineno, "cannot mix weighted and unweighted edges");
    }
    saw_edge = true;
    if (u == v)
      throw config_error(path + ":" + std::to_string(lineno) + ": self loop at vertex " +
                         std::to_string(u));
    if (has_w && !(w > 0.0 && std::isfinite(w)))
      throw config_error(path + ":" + std::to_string(lineno) +
                         ": edge weight must be finite and positive, got '" + toks[2] + "'");
    max_id = std::max({max_id, u, v});
    edges.push_back({u, v, w, lineno});
  }
  if (edges.empty()) throw parse_error(path, lineno, "no edges in file");

  // Duplicate detection here, where line numbers are still known.
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> seen;
  for (const auto& e : edges) {
    auto key = directed ? std::make_pair(e.u, e.v)
                        : std::make_pair(std::min(e.u, e.v), std::max(e.u, e.v));
    auto [it, fresh] = seen.emplace(key, e.line);
    if (!fresh)
      throw config_error(path + ":" + std::to_string(e.line) + ": duplicate edge " +
                         std::to_string(e.u) + " -> " + std::to_string(e.v) +
                         " (first seen on line " + std::to_string(it->second) + ")");
  }

  GraphBuilder b(max_id, directed);
  for (const auto& e : edges) {
    auto u = static_cast<vertex_t>(e.u - 1);
    auto v = static_cast<vertex_t>(e.v - 1);
    if (weighted)
      b.add_edge(u, v, e.w);
    else
      b.add_edge(u, v);
  }
  return b.build();
}

// Canonical form: direction header, then edges sorted ascending, tabs
// between fields, each undirected edge written once with the smaller id
// first. read(write(g)) reproduces g exactly.
inline void write_edge_list(const std::string& path, const Graph& g) {
  auto out = detail::open_output(path);
  out << (g.directed() ? "%directed\n" : "%undirected\n");
  for (vertex_t i = 0; i < g.num_vertices(); ++i) {
    auto nb = g.neighbors(i);
    auto w = g.weights(i);
    for (std::size_t t = 0; t < nb.size(); ++t) {
      if (!g.directed() && nb[t] < i) continue;
      out << (i + 1) << '\t' << (nb[t] + 1);
      if (g.weighted()) out << '\t' << format_double(w[t]);
      out << '\n';
    }
  }
  if (!out) throw parse_error("failed writing '" + path + "'");
}

// Signal file: either one value per line or `vertex,value` pairs (1-based
// ids, each vertex exactly once, any order). The two forms cannot be mixed.
inline std::vector<double> read_signal(const std::string& path) {
  auto in = detail::open_input(path);
  std::string raw;
  std::size_t lineno = 0;
  int form = 0;  // 0 unknown, 1 plain, 2 pairs
  std::vector<double> plain;
  std::map<std::uint64_t, double> pairs;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::trim(raw);
    if (line.empty()) continue;
    auto toks = detail::split(line, ',');
    for (auto& t : toks) t = detail::trim(t);
    if (toks.size() == 1) {
      if (form == 2) throw parse_error(path, lineno, "mixed plain and vertex,value lines");
      form = 1;
      plain.push_back(detail::parse_f64(toks[0], path, lineno));
    } else if (toks.size() == 2) {
      if (form == 1) throw parse_error(path, lineno, "mixed plain and vertex,value lines");
      form = 2;
      std::uint64_t id = detail::parse_u64(toks[0], path, lineno);
      if (id == 0) throw parse_error(path, lineno, "vertex ids are 1-based");
      double v = detail::parse_f64(toks[1], path, lineno);
      if (!pairs.emplace(id, v).second)
        throw parse_error(path, lineno, "vertex " + std::to_string(id) + " listed twice");
    } else {
      throw parse_error(path, lineno, "expected 'value' or 'vertex,value'");
    }
  }
  if (form == 0) throw parse_error(path, lineno, "no values in file");
  if (form == 1) return plain;
  std::vector<double> out(pairs.rbegin()->first);
  std::size_t filled = 0;
  for (const auto& [id, v] : pairs) {
    out[id - 1] = v;
    ++filled;
  }
  if (filled != out.size())
    throw parse_error(path, lineno, "vertex,value form must cover 1.." +
                                        std::to_string(out.size()) + " without gaps");
  return out;
}

inline void write_signal(const std::string& path, std::span<const double> x) {
  auto out = detail::open_output(path);
  for (double v : x) out << format_double(v) << '\n';
  if (!out) throw parse_error("failed writing '" + path + "'");
}

namespace detail {

// PGM header token stream: whitespace-separated, '#' to end of line is a
// comment. Used for P2 payloads too, since they are plain ASCII integers.
class PgmTokens {
 public:
  PgmTokens(std::istream& in, const std::string& path) : in_(in), path_(path) {}

  std::string next() {
    std::string tok;
    while (true) {
      int c = in_.get();
      if (c == EOF) {
        if (tok.empty()) throw parse_error(path_ + ": unexpected end of file");
        return tok;
      }
      if (c == '#') {
        while (c != EOF && c != '\n') c = in_.get();
        if (!tok.empty()) return tok;
        continue;
      }
      if (std::isspace(c)) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok.push_back(static_cast<char>(c));
    }
  }

  std::uint64_t next_u64(std::uint64_t max) {
    std::string tok = next();
    std::uint64_t v = parse_u64(tok, path_, 0);
    if (v > max)
      throw parse_error(path_ + ": value " + tok + " exceeds maximum " + std::to_string(max));
    return v;
  }

 private:
  std::istream& in_;
  const std::string& path_;
};

inline Matrix read_pgm(std::istream& in, const std::string& path) {
  PgmTokens toks(in, path);
  std::string magic = toks.next();
  std::size_t cols = toks.next_u64(1u << 20);
  std::size_t rows = toks.next_u64(1u << 20);
  std::uint64_t maxval = toks.next_u64(65535);
  if (cols == 0 || rows == 0) throw parse_error(path + ": image dimensions must be positive");
  if (maxval == 0) throw parse_error(path + ": maxval must be positive");
  Matrix m{rows, cols, std::vector<double>(rows * cols)};
  if (magic == "P2") {
    for (double& v : m.data) v = static_cast<double>(toks.next_u64(maxval));
    return m;
  }
  // P5: exactly one whitespace byte after maxval, then raw samples, one or
  // two bytes each (two-byte samples are big-endian).
  const int bytes = maxval < 256 ? 1 : 2;
  for (double& v : m.data) {
    int hi = in.get();
    if (hi == EOF) throw parse_error(path + ": truncated pixel data");
    std::uint64_t val = static_cast<unsigned char>(hi);
    if (bytes == 2) {
      int lo = in.get();
      if (lo == EOF) throw parse_error(path + ": truncated pixel data");
      val = (val << 8) | static_cast<unsigned char>(lo);
    }
    if (val > maxval)
      throw parse_error(path + ": pixel value " + std::to_string(val) + " exceeds maxval");
    v = static_cast<double>(val);
  }
  return m;
}

}  // namespace detail

// Matrix input: PGM (P2 ASCII or P5 binary, up to 16-bit) or CSV with one
// comma-separated row per line. Dispatch is by content, not extension.
// Pixel integers become doubles as-is; ranking is scale-invariant, so no
// normalization is wanted.
inline Matrix read_matrix(const std::string& path) {
  auto in = detail::open_input(path, true);
  if (in.peek() == 'P') {
    std::string magic(2, '\0');
    in.read(magic.data(), 2);
    if (magic != "P2" && magic != "P5")
      throw parse_error(path + ": unsupported image magic '" + magic + "'");
    in.clear();
    in.seekg(0);
    return detail::read_pgm(in, path);
  }
  std::string raw;
  std::size_t lineno = 0;
  Matrix m;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::trim(raw);
    if (line.empty()) continue;
    auto toks = detail::split(line, ',');
    if (m.cols == 0)
      m.cols = toks.size();
    else if (toks.size() != m.cols)
      throw parse_error(path, lineno, "row has " + std::to_string(toks.size()) +
                                          " columns, expected " + std::to_string(m.cols));
    for (auto& t : toks) m.data.push_back(detail::parse_f64(detail::trim(t), path, lineno));
    ++m.rows;
  }
  if (m.rows == 0) throw parse_error(path, lineno, "no rows in matrix file");
  return m;
}

inline void write_matrix_csv(const std::string& path, const Matrix& m) {
  auto out = detail::open_output(path);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c) out << ',';
      out << format_double(m.at(r, c));
    }
    out << '\n';
  }
  if (!out) throw parse_error("failed writing '" + path + "'");
}

// PGM writer for integral matrices (fixtures and image interchange).
inline void write_matrix_pgm(const std::string& path, const Matrix& m, bool binary,
                             std::uint64_t maxval) {
  if (maxval == 0 || maxval > 65535) throw config_error("pgm maxval must be in [1, 65535]");
  for (double v : m.data)
    if (!(v >= 0.0 && v <= static_cast<double>(maxval)) ||
        v != static_cast<double>(static_cast<std::uint64_t>(v)))
      throw config_error("pgm output needs integer values in [0, maxval]");
  auto out = detail::open_output(path, binary);
  out << (binary ? "P5" : "P2") << '\n'
      << m.cols << ' ' << m.rows << '\n'
      << maxval << '\n';
  const int bytes = maxval < 256 ? 1 : 2;
  std::size_t col = 0;
  for (double v : m.data) {
    auto val = static_cast<std::uint64_t>(v);
    if (binary) {
      if (bytes == 2) out.put(static_cast<char>((val >> 8) & 0xff));
      out.put(static_cast<char>(val & 0xff));
    } else {
      out << val << (++col % m.cols == 0 ? '\n' : ' ');
    }
  }
  if (!out) throw parse_error("failed writing '" + path + "'");
}

// Planar coordinates for the kernel graph builder: CSV `id,x,y`, 1-based
// ids covering 1..n, optional literal header line. Returned in id order.
inline std::vector<Point2> read_coords(const std::string& path) {
  auto in = detail::open_input(path);
  std::string raw;
  std::size_t lineno = 0;
  std::map<std::uint64_t, Point2> pts;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::trim(raw);
    if (line.empty()) continue;
    if (lineno == 1 && line == "id,x,y") continue;
    auto toks = detail::split(line, ',');
    if (toks.size() != 3) throw parse_error(path, lineno, "expected 'id,x,y'");
    for (auto& t : toks) t = detail::trim(t);
    std::uint64_t id = detail::parse_u64(toks[0], path, lineno);
    if (id == 0) throw parse_error(path, lineno, "vertex ids are 1-based");
    Point2 p{detail::parse_f64(toks[1], path, lineno), detail::parse_f64(toks[2], path, lineno)};
    if (!pts.emplace(id, p).second)
      throw parse_error(path, lineno, "vertex " + std::to_string(id) + " listed twice");
  }
  if (pts.empty()) throw parse_error(path, lineno, "no coordinates in file");
  if (pts.rbegin()->first != pts.size())
    throw parse_error(path, lineno,
                      "ids must cover 1.." + std::to_string(pts.size()) + " without gaps");
  std::vector<Point2> out(pts.size());
  for (const auto& [id, p] : pts) out[id - 1] = p;
  return out;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline nlohmann::json result_to_json(const EntropyResult& res) {
  nlohmann::json hist = nlohmann::json::array();
  for (const auto& [idx, c] : res.histogram.nonzero())
    hist.push_back(nlohmann::json::array({idx, c}));
  return nlohmann::json{
      {"m", res.m},
      {"L", res.L},
      {"mode", mode_name(res.mode)},
      {"raw_nats", res.raw},
      {"normalized", res.normalized},
      {"total", res.histogram.total()},
      {"tie_rows", res.tie_rows},
      {"histogram", std::move(hist)},
      {"graph",
       {{"kind", res.graph.kind},
        {"n", res.graph.n},
        {"directed", res.graph.directed},
        {"weighted", res.graph.weighted},
        {"edges", res.graph.edges}}},
      {"signal_hash", hash_hex(res.signal_hash)},
  };
}

inline EntropyResult result_from_json(const nlohmann::json& j) {
  try {
    EntropyResult res;
    res.m = j.at("m").get<int>();
    res.L = j.at("L").get<int>();
    res.mode = parse_mode(j.at("mode").get<std::string>());
    res.raw = j.at("raw_nats").get<double>();
    res.normalized = j.at("normalized").get<double>();
    res.tie_rows = j.at("tie_rows").get<std::uint64_t>();
    res.histogram = PatternHistogram(res.m);
    for (const auto& bin : j.at("histogram"))
      res.histogram.add(bin.at(0).get<std::uint64_t>(), bin.at(1).get<std::uint64_t>());
    if (res.histogram.total() != j.at("total").get<std::uint64_t>())
      throw parse_error("histogram counts do not sum to 'total'");
    const auto& g = j.at("graph");
    res.graph = {g.at("kind").get<std::string>(), g.at("n").get<std::size_t>(),
                 g.at("directed").get<bool>(), g.at("weighted").get<bool>(),
                 g.at("edges").get<std::size_t>()};
    res.signal_hash = std::stoull(j.at("signal_hash").get<std::string>(), nullptr, 16);
    return res;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("bad result json: ") + e.what());
  }
}

inline void write_result(const EntropyResult& res, const std::string& path) {
  auto out = detail::open_output(path);
  out << result_to_json(res).dump(2) << '\n';
  if (!out) throw parse_error("failed writing '" + path + "'");
}

inline EntropyResult read_result(const std::string& path) {
  auto in = detail::open_input(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(path + ": " + e.what());
  }
  return result_from_json(j);
}

// A loaded input bundle: what the CLI hands to the core. When both parts are
// present every signal length must match the vertex count; checked by the
// caller at use, where the mismatch message can say which file is at fault.
struct Dataset {
  std::optional<Graph> graph;
  std::vector<std::vector<double>> signals;
  std::map<std::string, std::string> metadata;  // source paths, formats, hashes
};

}
