#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ariel/checkpoint.hpp"
#include "ariel/config.hpp"
#include "ariel/error.hpp"
#include "ariel/graph_io.hpp"
#include "support.hpp"

using namespace ariel;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / (std::string("ariel_io_") + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(LoadGraph, SingleEdge) {
  TempDir dir;
  write(dir / "e", "0 1\n");
  write(dir / "f", "1 2\n3 4\n");
  const Graph g = load_graph(dir / "e", dir / "f");
  EXPECT_EQ(g.adjacency(), (Matrix{{0, 1}, {1, 0}}));
  EXPECT_EQ(g.features(), (Matrix{{1, 2}, {3, 4}}));
  EXPECT_FALSE(g.has_labels());
}

TEST(LoadGraph, DuplicatesCommentsAndSelfLoops) {
  TempDir dir;
  write(dir / "e1", "0 1\n");
  write(dir / "e2", "# header\n0 1\n\n1 0\n0 1\n2 2\n");
  write(dir / "f", "1\n2\n3\n");
  LoadStats stats;
  const Graph twice = load_graph(dir / "e2", dir / "f", std::nullopt, &stats);
  EXPECT_EQ(twice, load_graph(dir / "e1", dir / "f"));
  EXPECT_EQ(stats.self_loops_dropped, 1u);
  EXPECT_EQ(stats.duplicate_edges, 2u);
}

TEST(LoadGraph, Labels) {
  TempDir dir;
  write(dir / "e", "0 1\n");
  write(dir / "f", "0\n0\n");
  write(dir / "y", "3\n-1\n");
  EXPECT_EQ(load_graph(dir / "e", dir / "f", dir / "y").labels(), (std::vector<int>{3, -1}));
}

TEST(LoadGraph, ErrorsCarryLineNumbers) {
  TempDir dir;
  write(dir / "f", "1 2\n3 4\n");
  write(dir / "ragged", "1 2\n3\n");
  write(dir / "range", "0 1\n# ok\n0 5\n");
  write(dir / "token", "0 1\n1 x\n");
  write(dir / "e", "0 1\n");
  write(dir / "badlabel", "0\nfoo\n");
  auto expect_line = [](auto&& fn, std::size_t line) {
    try {
      fn();
      FAIL() << "expected IngestionError";
    } catch (const IngestionError& e) {
      EXPECT_EQ(e.line(), line) << e.what();
    }
  };
  expect_line([&] { load_graph(dir / "e", dir / "ragged"); }, 2);
  expect_line([&] { load_graph(dir / "range", dir / "f"); }, 3);
  expect_line([&] { load_graph(dir / "token", dir / "f"); }, 2);
  expect_line([&] { load_graph(dir / "e", dir / "f", dir / "badlabel"); }, 2);
  EXPECT_THROW(load_graph(dir / "missing", dir / "f"), IngestionError);
}

TEST(SaveGraph, RoundTripAndSidecar) {
  TempDir dir;
  RngStream rng(3);
  const Graph g = ariel::testing::random_graph(15, 4, 0.3, rng, 3);
  save_graph(g, dir.path());
  EXPECT_EQ(load_graph_dir(dir.path()), g);
  std::ifstream in(dir / "graph.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["n"], 15);
  EXPECT_EQ(j["d"], 4);
  EXPECT_EQ(j["edges"], g.edge_count());
}

TEST(MatrixText, ShortestRoundTripIsExact) {
  TempDir dir;
  RngStream rng(8);
  const Matrix m = ariel::testing::random_matrix(6, 3, rng, 1e-3);
  write_matrix_text(m, dir / "m.txt");
  EXPECT_EQ(read_matrix_text(dir / "m.txt"), m);
}

TEST(Checkpoint, BinaryAndJsonRoundTripsAreBitExact) {
  TempDir dir;
  RngStream rng(1);
  const EncoderParams p = init_params({5, 4, 3, 2}, rng);
  save_checkpoint(p, dir / "c.bin");
  save_checkpoint_json(p, dir / "c.json");
  EXPECT_EQ(load_checkpoint(dir / "c.bin"), p);
  EXPECT_EQ(load_checkpoint_json(dir / "c.json"), p);
  EXPECT_EQ(load_checkpoint_any(dir / "c.bin"), p);
  EXPECT_EQ(load_checkpoint_any(dir / "c.json"), p);
}

TEST(Checkpoint, RejectsCorruptFiles) {
  TempDir dir;
  write(dir / "junk", "not a checkpoint");
  EXPECT_THROW(load_checkpoint(dir / "junk"), Error);
  RngStream rng(1);
  save_checkpoint(init_params({5, 4, 3, 2}, rng), dir / "c.bin");
  fs::resize_file(dir / "c.bin", fs::file_size(dir / "c.bin") - 8);
  EXPECT_THROW(load_checkpoint(dir / "c.bin"), Error);
}

TEST(Config, EmptyGivesDefaults) {
  const TrainConfig c = parse_config("");
  EXPECT_EQ(c.attack.steps, 5u);
  EXPECT_EQ(c.attack.delta_a_fraction, 0.1);
  EXPECT_EQ(c.attack.delta_x, 0.5);
  EXPECT_EQ(c.gamma, 1.1);
  EXPECT_EQ(c.period_t, 20u);
  EXPECT_EQ(c.subgraph_size, 500u);
  EXPECT_EQ(to_json(c), to_json(TrainConfig{}));
}

TEST(Config, ParsesAndRoundTrips) {
  const TrainConfig c = parse_config("# comment\n eps1 = 1.5\nattack.anchor=original\n\nepochs = 7 # trailing\n");
  EXPECT_EQ(c.eps1, 1.5);
  EXPECT_EQ(c.epochs, 7u);
  EXPECT_EQ(c.attack.anchor, AttackAnchor::kOriginal);
  EXPECT_EQ(to_json(parse_config(to_config_text(c))), to_json(c));
}

TEST(Config, ErrorsNameTheKey) {
  auto key_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(key_of("nonsense = 1"), "nonsense");
  EXPECT_EQ(key_of("epochs = many"), "epochs");
  EXPECT_EQ(key_of("tau = 0.4x"), "tau");
  EXPECT_EQ(key_of("attack.anchor = sideways"), "attack.anchor");
  EXPECT_EQ(key_of("seed"), "seed");
}
