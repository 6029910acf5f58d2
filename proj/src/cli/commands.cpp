#include "ariel/cli/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "ariel/checkpoint.hpp"
#include "ariel/cli/manifest.hpp"
#include "ariel/config.hpp"
#include "ariel/error.hpp"
#include "ariel/eval.hpp"
#include "ariel/graph_io.hpp"

namespace ariel::cli {
namespace fs = std::filesystem;

TrainConfig resolve_config(const fs::path& config_path, const std::vector<std::string>& overrides) {
  TrainConfig config = config_path.empty() ? TrainConfig{} : load_config(config_path);
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError(item, "override must look like key=value");
    set_config_value(config, item.substr(0, eq), item.substr(eq + 1));
  }
  config.validate();
  return config;
}

namespace {

struct CommonArgs {
  std::string config;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config, "config file (key = value lines)")->check(CLI::ExistingFile);
  cmd->add_option("-s,--set", args.overrides, "override a config key, e.g. --set eps1=1.5");
  cmd->add_option("--seed", args.seed, "shorthand for --set seed=<n>");
}

RunManifest start_manifest(const std::string& command, const CommonArgs& args) {
  std::vector<std::string> overrides = args.overrides;
  if (args.seed) overrides.push_back("seed=" + std::to_string(*args.seed));
  RunManifest m;
  m.command = command;
  m.config = resolve_config(args.config, overrides);
  if (!args.config.empty()) m.add_input(args.config);
  return m;
}

std::string quote(std::string s) {
  for (char& c : s)
    if (c == '"' || c == '\n') c = '\'';
  return '"' + s + '"';
}

int fail(ExitCode code, const std::string& kind, const std::string& extra, const std::string& message) {
  std::cerr << "error code=" << static_cast<int>(code) << " kind=" << kind << extra << " message=" << quote(message)
            << '\n';
  return code;
}

fs::path default_manifest(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"ariel: adversarial graph contrastive learning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // train
  CommonArgs train_common;
  std::string train_data, train_out;
  std::size_t checkpoint_every = 0;
  bool json_checkpoint = false, timing = false, quiet = false;
  auto* train_cmd = app.add_subcommand("train", "train an encoder");
  add_common(train_cmd, train_common);
  train_cmd->add_option("-d,--data", train_data, "dataset directory")->required()->check(CLI::ExistingDirectory);
  train_cmd->add_option("-o,--out", train_out, "output directory")->required();
  train_cmd->add_option("--checkpoint-every", checkpoint_every, "also checkpoint every N epochs");
  train_cmd->add_flag("--json-checkpoint", json_checkpoint, "also write checkpoint.json");
  train_cmd->add_flag("--timing", timing, "record wall-clock seconds in the log");
  train_cmd->add_flag("-q,--quiet", quiet, "no progress on stderr");

  // embed
  CommonArgs embed_common;
  std::string embed_data, embed_ckpt, embed_out, embed_manifest;
  bool embed_projected = false;
  auto* embed_cmd = app.add_subcommand("embed", "encode a graph with a trained checkpoint");
  add_common(embed_cmd, embed_common);
  embed_cmd->add_option("-d,--data", embed_data)->required()->check(CLI::ExistingDirectory);
  embed_cmd->add_option("-k,--checkpoint", embed_ckpt)->required()->check(CLI::ExistingFile);
  embed_cmd->add_option("-o,--out", embed_out, "embedding text file")->required();
  embed_cmd->add_option("--manifest", embed_manifest, "default <out>.manifest.json");
  embed_cmd->add_flag("--projected", embed_projected, "write projection-head outputs instead");

  // probe
  CommonArgs probe_common;
  std::string probe_data, probe_emb, probe_out, probe_manifest;
  std::size_t probe_splits = 20;
  ProbeOptions probe_opts;
  auto* probe_cmd = app.add_subcommand("probe", "linear-probe accuracy over random splits");
  add_common(probe_cmd, probe_common);
  probe_cmd->add_option("-d,--data", probe_data, "dataset directory (labels)")->required()->check(CLI::ExistingDirectory);
  probe_cmd->add_option("-e,--embeddings", probe_emb, "embedding text file; raw features when omitted")
      ->check(CLI::ExistingFile);
  probe_cmd->add_option("-o,--out", probe_out, "metrics JSON")->required();
  probe_cmd->add_option("--splits", probe_splits)->check(CLI::PositiveNumber);
  probe_cmd->add_option("--lambda", probe_opts.lambda)->check(CLI::NonNegativeNumber);
  probe_cmd->add_option("--max-iterations", probe_opts.max_iterations);
  probe_cmd->add_option("--manifest", probe_manifest);

  // degrade
  CommonArgs degrade_common;
  std::string degrade_data, degrade_ckpt, degrade_out, degrade_manifest;
  double degrade_p = 0.03;
  std::size_t degrade_steps = 60;
  bool degrade_projected = false;
  auto* degrade_cmd = app.add_subcommand("degrade", "vulnerability study over a degradation sequence");
  add_common(degrade_cmd, degrade_common);
  degrade_cmd->add_option("-d,--data", degrade_data)->required()->check(CLI::ExistingDirectory);
  degrade_cmd->add_option("-k,--checkpoint", degrade_ckpt)->required()->check(CLI::ExistingFile);
  degrade_cmd->add_option("-o,--out", degrade_out, "CSV")->required();
  degrade_cmd->add_option("-p,--p", degrade_p)->check(CLI::Range(0.0, 1.0));
  degrade_cmd->add_option("--steps", degrade_steps);
  degrade_cmd->add_flag("--projected", degrade_projected);
  degrade_cmd->add_option("--manifest", degrade_manifest);

  // poison
  CommonArgs poison_common;
  std::string poison_data, poison_out;
  double edge_frac = 0.2, feat_frac = 0.2;
  bool edges_only = false;
  auto* poison_cmd = app.add_subcommand("poison", "write a randomly poisoned copy of a dataset");
  add_common(poison_cmd, poison_common);
  poison_cmd->add_option("-d,--data", poison_data)->required()->check(CLI::ExistingDirectory);
  poison_cmd->add_option("-o,--out", poison_out, "output dataset directory")->required();
  poison_cmd->add_option("--edge-frac", edge_frac)->check(CLI::Range(0.0, 1.0));
  poison_cmd->add_option("--feat-frac", feat_frac)->check(CLI::Range(0.0, 1.0));
  poison_cmd->add_flag("--edges-only", edges_only, "flip existing edges only");

  // synth
  CommonArgs synth_common;
  std::string synth_out;
  SbmSpec sbm{{100, 100, 100}, 0.05, 0.005, 32};
  auto* synth_cmd = app.add_subcommand("synth", "generate a stochastic block model dataset");
  add_common(synth_cmd, synth_common);
  synth_cmd->add_option("-o,--out", synth_out, "output dataset directory")->required();
  synth_cmd->add_option("--blocks", sbm.block_sizes)->delimiter(',');
  synth_cmd->add_option("--p-in", sbm.p_in)->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--p-out", sbm.p_out)->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--dim", sbm.feature_dim);
  synth_cmd->add_option("--mean-scale", sbm.mean_scale);
  synth_cmd->add_option("--noise-scale", sbm.noise_scale);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kUsage, "usage", "", e.what());
  }

  try {
    if (*train_cmd) {
      RunManifest m = start_manifest("train", train_common);
      m.add_input_dir(train_data);
      m.options = {{"data", train_data}, {"checkpoint_every", checkpoint_every}, {"timing", timing}};
      const Graph graph = load_graph_dir(train_data);
      const fs::path out(train_out);
      fs::create_directories(out);
      std::ofstream log(out / "training_log.jsonl");
      if (!log) throw Error("cannot write " + (out / "training_log.jsonl").string());
      const TrainConfig& config = m.config;
      auto on_epoch = [&](const EpochRecord& rec, const EncoderParams& params) {
        log << to_json(rec, timing).dump() << '\n';
        if (checkpoint_every > 0 && (rec.epoch + 1) % checkpoint_every == 0) {
          const fs::path p = out / ("checkpoint_epoch_" + std::to_string(rec.epoch + 1) + ".bin");
          save_checkpoint(params, p);
          m.outputs.push_back(p.string());
        }
        if (!quiet && (rec.epoch + 1) % 50 == 0)
          std::cerr << "epoch " << rec.epoch + 1 << "/" << config.epochs << " loss " << rec.loss.total << '\n';
      };
      TrainResult result;
      try {
        result = train(graph, config, on_epoch);
      } catch (const CollapseError&) {
        log.flush();
        m.outputs.push_back((out / "training_log.jsonl").string());
        write_manifest(m, out / "manifest.json");
        throw;
      }
      log.close();
      save_checkpoint(result.params, out / "checkpoint.bin");
      m.outputs.push_back((out / "checkpoint.bin").string());
      if (json_checkpoint) {
        save_checkpoint_json(result.params, out / "checkpoint.json");
        m.outputs.push_back((out / "checkpoint.json").string());
      }
      m.outputs.push_back((out / "training_log.jsonl").string());
      write_manifest(m, out / "manifest.json");
    } else if (*embed_cmd) {
      RunManifest m = start_manifest("embed", embed_common);
      m.add_input_dir(embed_data);
      m.add_input(embed_ckpt);
      m.options = {{"data", embed_data}, {"checkpoint", embed_ckpt}, {"projected", embed_projected}};
      const Graph graph = load_graph_dir(embed_data);
      const EncoderParams params = load_checkpoint_any(embed_ckpt);
      Matrix h = embed(graph, params);
      if (embed_projected) h = project_head(h, params).projected;
      write_matrix_text(h, embed_out);
      m.outputs.push_back(embed_out);
      write_manifest(m, embed_manifest.empty() ? default_manifest(embed_out) : fs::path(embed_manifest));
    } else if (*probe_cmd) {
      RunManifest m = start_manifest("probe", probe_common);
      m.add_input_dir(probe_data);
      if (!probe_emb.empty()) m.add_input(probe_emb);
      m.options = {{"data", probe_data},
                   {"embeddings", probe_emb},
                   {"splits", probe_splits},
                   {"lambda", probe_opts.lambda},
                   {"max_iterations", probe_opts.max_iterations}};
      const Graph graph = load_graph_dir(probe_data);
      const Matrix h = probe_emb.empty() ? graph.features() : read_matrix_text(probe_emb);
      if (h.rows() != graph.num_nodes())
        throw IngestionError(probe_emb, 0, "embedding rows do not match the node count");
      const RngStream split_rng = RngStream(m.config.seed).substream("split");
      const ProbeReport report = evaluate_embeddings(h, graph.labels(), probe_splits, split_rng, probe_opts);
      std::ofstream out(probe_out);
      if (!out) throw Error("cannot write " + probe_out);
      out << to_json(report).dump(2) << '\n';
      out.close();
      m.outputs.push_back(probe_out);
      write_manifest(m, probe_manifest.empty() ? default_manifest(probe_out) : fs::path(probe_manifest));
    } else if (*degrade_cmd) {
      RunManifest m = start_manifest("degrade", degrade_common);
      m.add_input_dir(degrade_data);
      m.add_input(degrade_ckpt);
      m.options = {{"data", degrade_data},
                   {"checkpoint", degrade_ckpt},
                   {"p", degrade_p},
                   {"steps", degrade_steps},
                   {"projected", degrade_projected}};
      const Graph graph = load_graph_dir(degrade_data);
      const EncoderParams params = load_checkpoint_any(degrade_ckpt);
      RngStream rng = RngStream(m.config.seed).substream("degrade");
      const auto rows = vulnerability_study(params, graph, degrade_p, degrade_steps, rng, {degrade_projected});
      write_vulnerability_csv(rows, degrade_out);
      m.outputs.push_back(degrade_out);
      write_manifest(m, degrade_manifest.empty() ? default_manifest(degrade_out) : fs::path(degrade_manifest));
    } else if (*poison_cmd) {
      RunManifest m = start_manifest("poison", poison_common);
      m.add_input_dir(poison_data);
      m.options = {{"data", poison_data}, {"edge_frac", edge_frac}, {"feat_frac", feat_frac}, {"edges_only", edges_only}};
      if (fs::exists(poison_out) && fs::equivalent(poison_data, poison_out))
        throw DomainError("poison: output directory must differ from the input");
      const Graph graph = load_graph_dir(poison_data);
      RngStream rng = RngStream(m.config.seed).substream("poison");
      const Graph poisoned = random_poison(graph, edge_frac, feat_frac, rng, {edges_only});
      save_graph(poisoned, poison_out);
      m.outputs.push_back(poison_out);
      write_manifest(m, fs::path(poison_out) / "manifest.json");
    } else if (*synth_cmd) {
      RunManifest m = start_manifest("synth", synth_common);
      m.options = {{"blocks", sbm.block_sizes}, {"p_in", sbm.p_in},     {"p_out", sbm.p_out},
                   {"dim", sbm.feature_dim},    {"mean_scale", sbm.mean_scale}, {"noise_scale", sbm.noise_scale}};
      RngStream rng = RngStream(m.config.seed).substream("synth");
      save_graph(generate_sbm(sbm, rng), synth_out);
      m.outputs.push_back(synth_out);
      write_manifest(m, fs::path(synth_out) / "manifest.json");
    }
  } catch (const ConfigError& e) {
    return fail(kUsage, "config", " key=" + e.key(), e.what());
  } catch (const IngestionError& e) {
    return fail(kData, "data", " path=" + e.path() + " line=" + std::to_string(e.line()), e.what());
  } catch (const CollapseError& e) {
    return fail(kNumeric, "collapse", " epoch=" + std::to_string(e.epoch()), e.what());
  } catch (const NumericError& e) {
    return fail(kNumeric, "numeric", "", e.what());
  } catch (const DomainError& e) {
    return fail(kUsage, "domain", "", e.what());
  } catch (const ContractViolation& e) {
    return fail(kData, "contract", "", e.what());
  } catch (const std::exception& e) {
    return fail(kData, "io", "", e.what());
  }
  return kOk;
}

int run(int argc, char** argv) { return run(std::vector<std::string>(argv, argv + argc)); }

}  // namespace ariel::cli
