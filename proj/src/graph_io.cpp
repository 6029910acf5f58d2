#include "ariel/graph_io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ariel/error.hpp"

namespace ariel {
namespace {

namespace fs = std::filesystem;

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError(path.string(), 0, "cannot open file");
  return in;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

bool skippable(std::string_view line) {
  for (char c : line) {
    if (c == '#') return true;
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

template <typename T>
T parse_token(std::string_view tok, const fs::path& path, std::size_t line_no) {
  T value{};
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw IngestionError(path.string(), line_no, "unparsable token '" + std::string(tok) + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Matrix read_rows(const fs::path& path, bool allow_empty) {
  std::ifstream in = open_input(path);
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (rows == 0) cols = tokens.size();
    else if (tokens.size() != cols) {
      throw IngestionError(path.string(), line_no,
                           "ragged row: expected " + std::to_string(cols) + " values, got " + std::to_string(tokens.size()));
    }
    for (auto tok : tokens) values.push_back(parse_token<double>(tok, path, line_no));
    ++rows;
  }
  if (rows == 0 && !allow_empty) throw IngestionError(path.string(), 0, "no rows");
  Matrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.values().begin());
  return m;
}

}  // namespace

Graph load_graph(const fs::path& edge_path, const fs::path& feature_path,
                 const std::optional<fs::path>& label_path, LoadStats* stats) {
  Matrix features = read_rows(feature_path, false);
  for (double v : features.values())
    if (!std::isfinite(v)) throw IngestionError(feature_path.string(), 0, "non-finite feature value");
  const std::size_t n = features.rows();

  LoadStats local;
  std::set<Edge> edges;
  {
    std::ifstream in = open_input(edge_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (skippable(line)) continue;
      const auto tokens = split_ws(line);
      if (tokens.size() != 2) throw IngestionError(edge_path.string(), line_no, "expected two node ids");
      const auto u = parse_token<std::size_t>(tokens[0], edge_path, line_no);
      const auto v = parse_token<std::size_t>(tokens[1], edge_path, line_no);
      if (u >= n || v >= n) {
        throw IngestionError(edge_path.string(), line_no,
                             "node id out of range [0, " + std::to_string(n) + ")");
      }
      if (u == v) {
        ++local.self_loops_dropped;
        continue;
      }
      if (!edges.insert(Edge{std::min(u, v), std::max(u, v)}).second) ++local.duplicate_edges;
    }
  }

  std::vector<int> labels;
  if (label_path) {
    std::ifstream in = open_input(*label_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tokens = split_ws(line);
      if (tokens.empty()) continue;
      if (tokens.size() != 1) throw IngestionError(label_path->string(), line_no, "expected one label");
      const int y = parse_token<int>(tokens[0], *label_path, line_no);
      if (y < -1) throw IngestionError(label_path->string(), line_no, "label below -1");
      labels.push_back(y);
    }
    if (labels.size() != n) {
      throw IngestionError(label_path->string(), line_no,
                           "expected " + std::to_string(n) + " labels, got " + std::to_string(labels.size()));
    }
  }
  if (stats) *stats = local;
  return Graph::from_edges(n, std::vector<Edge>(edges.begin(), edges.end()), std::move(features), std::move(labels));
}

Graph load_graph_dir(const fs::path& dir, LoadStats* stats) {
  std::optional<fs::path> labels;
  if (fs::exists(dir / "labels.txt")) labels = dir / "labels.txt";
  return load_graph(dir / "edges.txt", dir / "features.txt", labels, stats);
}

void save_graph(const Graph& graph, const fs::path& dir) {
  if (!graph.is_binary()) throw ContractViolation("save_graph: only binary graphs can be exported");
  fs::create_directories(dir);
  const auto edges = graph.edges();
  {
    std::ofstream out(dir / "edges.txt");
    for (const Edge& e : edges) out << e.u << ' ' << e.v << '\n';
  }
  write_matrix_text(graph.features(), dir / "features.txt");
  if (graph.has_labels()) {
    std::ofstream out(dir / "labels.txt");
    for (int y : graph.labels()) out << y << '\n';
  }
  nlohmann::json sidecar = {{"n", graph.num_nodes()}, {"d", graph.feature_dim()}, {"edges", edges.size()}};
  std::ofstream(dir / "graph.json") << sidecar.dump(2) << '\n';
}

Matrix read_matrix_text(const fs::path& path) { return read_rows(path, true); }

void write_matrix_text(const Matrix& m, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  std::string line;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    line.clear();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) line += ' ';
      line += format_double(m(i, j));
    }
    line += '\n';
    out << line;
  }
}

}  // namespace ariel
