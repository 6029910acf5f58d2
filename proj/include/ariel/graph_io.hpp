#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>

#include "ariel/graph.hpp"
#include "ariel/matrix.hpp"

namespace ariel {

struct LoadStats {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_edges = 0;
};

/// Reads the text dataset format:
///   edges    – "u v" per line, 0-based, undirected; blank and '#' lines skipped
///   features – n lines of d reals; n is taken from this file
///   labels   – n lines, one integer each (-1 = unlabeled)
/// Throws IngestionError with the offending line number.
Graph load_graph(const std::filesystem::path& edge_path, const std::filesystem::path& feature_path,
                 const std::optional<std::filesystem::path>& label_path = std::nullopt,
                 LoadStats* stats = nullptr);

/// load_graph on <dir>/edges.txt, <dir>/features.txt and, if present, <dir>/labels.txt.
Graph load_graph_dir(const std::filesystem::path& dir, LoadStats* stats = nullptr);

/// Writes edges.txt, features.txt, labels.txt (when labeled) and the
/// graph.json sidecar {"d":…, "edges":…, "n":…}. The graph must be binary.
void save_graph(const Graph& graph, const std::filesystem::path& dir);

/// Whitespace-separated text matrix, one row per line.
Matrix read_matrix_text(const std::filesystem::path& path);
void write_matrix_text(const Matrix& m, const std::filesystem::path& path);

}  // namespace ariel
