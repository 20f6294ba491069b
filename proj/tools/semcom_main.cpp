/**
 * @file semcom_main.cpp
 * @brief Command-line entry point.
 *
 * Subcommands: ingest, train, eval, fig2, fig3, fig4, baseline. Every
 * subcommand takes --config <json> plus repeatable --set dotted overrides and
 * writes its outputs (config snapshot, CSV tables, SVG plots, checkpoints)
 * into the configured run directory.
 *
 * Exit codes: 0 success, 2 configuration / usage error, 3 runtime failure
 * (including training divergence).
 */
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semcom/eval/config.hpp"
#include "semcom/eval/csv.hpp"
#include "semcom/eval/experiments.hpp"

namespace {

using semcom::eval::ExperimentConfig;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "JSON config file (defaults apply when omitted)")
      ->check(CLI::ExistingFile);
  sub->add_option("--set", args.overrides,
                  "Override a config key, e.g. --set train.epochs=5 (repeatable)");
}

ExperimentConfig load(const CommonArgs& args) {
  return ExperimentConfig::load(args.config_path, args.overrides);
}

int cmd_ingest(const CommonArgs& args) {
  ExperimentConfig cfg = load(args);
  std::filesystem::create_directories(cfg.run_dir);
  cfg.save(cfg.run_dir + "/config.json");
  semcom::eval::ExperimentContext ctx = semcom::eval::load_context(cfg);
  ctx.vocab.save_manifest(cfg.run_dir + "/vocab.tsv");

  semcom::eval::CsvWriter csv(cfg.run_dir + "/dataset_summary.csv",
                              {"split", "graphs", "nodes", "edges"});
  auto summarize = [&](const char* name, const std::vector<semcom::KnowledgeGraph>& gs) {
    std::size_t nodes = 0, edges = 0;
    for (const auto& g : gs) {
      nodes += g.nodes.size();
      edges += g.edges.size();
    }
    csv.row({name, std::to_string(gs.size()), std::to_string(nodes),
             std::to_string(edges)});
    std::cout << name << ": " << gs.size() << " graphs, " << nodes << " nodes, "
              << edges << " edges\n";
  };
  summarize("train", ctx.data.train);
  summarize("validation", ctx.data.validation);
  summarize("test", ctx.data.test);
  std::cout << "skipped empty entries: " << ctx.data.skipped_empty_entries << "\n"
            << "entities: " << ctx.vocab.num_entities()
            << ", relations: " << ctx.vocab.num_relations() << "\n"
            << "vocabulary digest: " << ctx.vocab.digest() << "\n"
            << "manifest: " << cfg.run_dir << "/vocab.tsv" << std::endl;
  return 0;
}

int cmd_train(const CommonArgs& args) {
  ExperimentConfig cfg = load(args);
  semcom::eval::TrainRunResult r = semcom::eval::run_training(cfg);
  std::cout << "final node_acc=" << r.final_metrics.node_acc
            << " f1=" << r.final_metrics.f1 << "\n"
            << "checkpoint: " << r.checkpoint_path << "\n"
            << "metrics: " << r.metrics_csv << std::endl;
  return 0;
}

int cmd_eval(const CommonArgs& args, const std::string& checkpoint) {
  ExperimentConfig cfg = load(args);
  semcom::eval::EvalRunResult r = semcom::eval::run_evaluation(cfg, checkpoint);
  std::cout << "split=" << cfg.eval.split << " node_acc=" << r.metrics.node_acc
            << " macro_f1=" << r.metrics.macro_f1
            << " micro_f1=" << r.metrics.micro_f1 << "\n"
            << "table: " << r.csv_path << std::endl;
  return 0;
}

int cmd_fig2(const CommonArgs& args, const std::vector<int>& dz_list) {
  ExperimentConfig cfg = load(args);
  semcom::eval::Fig2Result r = semcom::eval::run_fig2(cfg, dz_list);
  for (const auto& c : r.cells)
    std::cout << c.variant << " d_z=" << c.d_z << " node_acc=" << c.node_acc
              << " macro_f1=" << c.macro_f1 << "\n";
  std::cout << "table: " << r.csv_path << std::endl;
  return 0;
}

int cmd_fig3(const CommonArgs& args, const std::vector<double>& snr_grid) {
  ExperimentConfig cfg = load(args);
  semcom::eval::Fig3Result r = semcom::eval::run_fig3(cfg, snr_grid);
  for (const auto& [scheme, snr] : r.snr_at_90pct)
    std::cout << scheme << ": 90%-of-max F1 reached at " << snr << " dB\n";
  std::cout << "table: " << r.csv_path << std::endl;
  return 0;
}

int cmd_fig4(const CommonArgs& args) {
  ExperimentConfig cfg = load(args);
  semcom::eval::Fig4Result r = semcom::eval::run_fig4(cfg);
  std::cout << "mean bits/graph: semantic=" << r.mean_semantic_bits
            << " huffman=" << r.mean_huffman_bits
            << " sixbit=" << r.mean_sixbit_bits << "\n"
            << "compression gain vs huffman: " << r.gain_vs_huffman << "\n"
            << "compression gain vs sixbit:  " << r.gain_vs_sixbit << "\n"
            << "table: " << r.csv_path << std::endl;
  return 0;
}

int cmd_baseline(const CommonArgs& args, const std::vector<double>& snr_grid) {
  ExperimentConfig cfg = load(args);
  for (const auto& p : semcom::eval::run_baseline(cfg, snr_grid))
    std::cout << p.scheme << " snr=" << p.snr_db << " macro_f1=" << p.macro_f1
              << " mean_coded_bits=" << p.mean_coded_bits << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-graph semantic communication testbed"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string checkpoint;
  std::vector<int> dz_list{16, 32, 64, 128};
  std::vector<double> snr_grid{-6, -3, 0, 3, 6, 9, 12, 15, 18, 21, 24, 27, 30};
  std::function<int()> action;

  CLI::App* ingest = app.add_subcommand("ingest", "Parse the dataset and report statistics");
  add_common(ingest, args);
  ingest->callback([&] { action = [&] { return cmd_ingest(args); }; });

  CLI::App* train = app.add_subcommand("train", "Train the semantic system end to end");
  add_common(train, args);
  train->callback([&] { action = [&] { return cmd_train(args); }; });

  CLI::App* eval = app.add_subcommand("eval", "Score a checkpoint on a dataset split");
  add_common(eval, args);
  eval->add_option("--checkpoint", checkpoint, "Checkpoint file to load")->required();
  eval->callback([&] { action = [&] { return cmd_eval(args, checkpoint); }; });

  CLI::App* fig2 = app.add_subcommand("fig2", "Node accuracy vs d_z for both encoders");
  add_common(fig2, args);
  fig2->add_option("--dz", dz_list, "Embedding sizes to sweep");
  fig2->callback([&] { action = [&] { return cmd_fig2(args, dz_list); }; });

  CLI::App* fig3 = app.add_subcommand("fig3", "Triple F1 vs SNR, semantic and classical");
  add_common(fig3, args);
  fig3->add_option("--snr", snr_grid, "SNR grid in dB (ascending)");
  fig3->callback([&] { action = [&] { return cmd_fig3(args, snr_grid); }; });

  CLI::App* fig4 = app.add_subcommand("fig4", "Transmitted bits per graph vs graph size");
  add_common(fig4, args);
  fig4->callback([&] { action = [&] { return cmd_fig4(args); }; });

  CLI::App* baseline = app.add_subcommand("baseline", "Classical Huffman/6-bit + 64-QAM sweep");
  add_common(baseline, args);
  baseline->add_option("--snr", snr_grid, "SNR grid in dB");
  baseline->callback([&] { action = [&] { return cmd_baseline(args, snr_grid); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    return action ? action() : 2;
  } catch (const semcom::eval::ConfigError& e) {
    std::cerr << "config error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 3;
  }
}
