#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "semcom/eval/experiments.hpp"

using namespace semcom;
using namespace semcom::eval;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool have_corpus() { return fs::exists("data/webnlg-sample"); }

ExperimentConfig tiny_config(const std::string& run_tag) {
  ExperimentConfig cfg;
  cfg.dataset.max_train_graphs = 12;
  cfg.dataset.max_eval_graphs = 8;
  cfg.encoder.d_z = 8;
  cfg.encoder.hidden = 32;
  cfg.channel.k = 2;
  cfg.channel.hidden = 32;
  cfg.decoder.node_hidden = 32;
  cfg.decoder.rel_heads = 2;
  cfg.decoder.rel_ff_hidden = 32;
  cfg.mine.hidden = 16;
  cfg.train.epochs = 2;
  cfg.train.batch_size = 4;
  cfg.eval.batch_size = 4;
  cfg.run_dir = (fs::temp_directory_path() /
                 (run_tag + "_" + std::to_string(::getpid())))
                    .string();
  return cfg;
}

}  // namespace

TEST_CASE("select_graphs truncates without copying graphs") {
  std::vector<KnowledgeGraph> graphs(5);
  for (int i = 0; i < 5; ++i)
    graphs[i] = graph_from_triples(
        {{"s" + std::to_string(i), "r", "o" + std::to_string(i)}}, "g");

  CHECK(select_graphs(graphs, 0).size() == 5);
  CHECK(select_graphs(graphs, -1).size() == 5);
  CHECK(select_graphs(graphs, 3).size() == 3);
  CHECK(select_graphs(graphs, 99).size() == 5);
  CHECK(select_graphs(graphs, 3)[0] == &graphs[0]);
  CHECK(select_graphs(graphs, 3)[2] == &graphs[2]);
}

TEST_CASE("split_by_name resolves the three split names") {
  DatasetSplit ds;
  ds.train.resize(3);
  ds.validation.resize(2);
  ds.test.resize(1);
  CHECK(&split_by_name(ds, "train") == &ds.train);
  CHECK(&split_by_name(ds, "validation") == &ds.validation);
  CHECK(&split_by_name(ds, "test") == &ds.test);
  CHECK_THROWS(split_by_name(ds, "dev2"));
}

TEST_CASE("snr_at_fraction_of_max interpolates the first crossing") {
  const std::vector<double> snr = {-6, 0, 6, 12, 18};

  // Monotone curve with max 0.9; 90% of max = 0.81, crossed between 6 and 12.
  const std::vector<double> f1 = {0.1, 0.3, 0.6, 0.9, 0.9};
  // Linear interpolation: 6 + (0.81 - 0.6) / (0.9 - 0.6) * 6 = 10.2.
  CHECK(snr_at_fraction_of_max(snr, f1, 0.9) == doctest::Approx(10.2));

  // Crossing exactly at a grid point.
  const std::vector<double> exact = {0.0, 0.45, 0.9, 0.9, 0.9};
  CHECK(snr_at_fraction_of_max(snr, exact, 0.5) == doctest::Approx(0.0));

  // Already above threshold at the lowest SNR -> the grid floor.
  const std::vector<double> high = {0.89, 0.9, 0.9, 0.9, 0.9};
  CHECK(snr_at_fraction_of_max(snr, high, 0.9) == doctest::Approx(-6.0));

  // A scheme that never works reports the top of the grid (pessimistic).
  const std::vector<double> zero = {0, 0, 0, 0, 0};
  CHECK(snr_at_fraction_of_max(snr, zero, 0.9) == doctest::Approx(18.0));

  // Non-monotone curve: the first crossing wins.
  const std::vector<double> bumpy = {0.0, 0.85, 0.2, 0.9, 0.9};
  const double s = snr_at_fraction_of_max(snr, bumpy, 0.9);
  CHECK(s > -6.0);
  CHECK(s < 0.0);

  CHECK_THROWS(snr_at_fraction_of_max({0.0}, {0.5, 0.6}, 0.9));
  CHECK_THROWS(snr_at_fraction_of_max({}, {}, 0.9));
}

TEST_CASE("load_context builds a closed vocabulary over all splits") {
  if (!have_corpus()) return;
  ExperimentConfig cfg;
  const ExperimentContext ctx = load_context(cfg);
  CHECK(ctx.data.train.size() == 2400);
  CHECK(ctx.data.validation.size() == 300);
  CHECK(ctx.data.test.size() == 800);
  CHECK(ctx.vocab.num_entities() > 100);
  CHECK(ctx.vocab.num_relations() > 10);
  REQUIRE(ctx.embedder != nullptr);
  // Every test-split label must be in the vocabulary (closed setting).
  for (int i = 0; i < 20; ++i)
    for (const auto& n : ctx.data.test[i].nodes) ctx.vocab.entity_id(n);
}

TEST_CASE("run_fig4 accounting is reproducible byte for byte") {
  if (!have_corpus()) return;
  ExperimentConfig cfg = tiny_config("fig4");
  cfg.dataset.max_eval_graphs = 40;

  const Fig4Result a = run_fig4(cfg);
  const std::string csv_a = slurp(a.csv_path);
  const Fig4Result b = run_fig4(cfg);
  CHECK(slurp(b.csv_path) == csv_a);

  CHECK(a.mean_semantic_bits > 0.0);
  CHECK(a.mean_huffman_bits > a.mean_semantic_bits);
  CHECK(a.mean_sixbit_bits > a.mean_huffman_bits);
  CHECK(a.gain_vs_huffman ==
        doctest::Approx(a.mean_huffman_bits / a.mean_semantic_bits));
  CHECK(a.gain_vs_sixbit ==
        doctest::Approx(a.mean_sixbit_bits / a.mean_semantic_bits));
  // Per-bucket semantic bits follow nodes * k * bits_per_symbol exactly.
  for (const auto& [nodes, schemes] : a.by_nodes) {
    CHECK(schemes.at("semantic") ==
          doctest::Approx(nodes * cfg.channel.k * cfg.eval.bits_per_symbol));
    CHECK(schemes.at("huffman") > 0.0);
    CHECK(schemes.at("sixbit") > 0.0);
  }
  fs::remove_all(cfg.run_dir);
}

TEST_CASE("run_training then run_evaluation round-trips a checkpoint") {
  if (!have_corpus()) return;
  ExperimentConfig cfg = tiny_config("trainrun");
  cfg.channel.noiseless = true;

  const TrainRunResult tr = run_training(cfg);
  CHECK(fs::exists(tr.checkpoint_path));
  CHECK(fs::exists(tr.metrics_csv));
  CHECK(fs::exists(fs::path(cfg.run_dir) / "config.json"));
  CHECK(std::isfinite(tr.final_metrics.ce_nodes));

  // Metrics CSV has header + one line per epoch.
  std::istringstream lines(slurp(tr.metrics_csv));
  std::string line;
  int count = 0;
  while (std::getline(lines, line))
    if (!line.empty()) ++count;
  CHECK(count == 1 + cfg.train.epochs);

  ExperimentConfig eval_cfg = cfg;
  eval_cfg.eval.split = "validation";
  const EvalRunResult ev = run_evaluation(eval_cfg, tr.checkpoint_path);
  CHECK(fs::exists(ev.csv_path));
  CHECK(ev.metrics.node_acc >= 0.0);
  CHECK(ev.metrics.node_acc <= 1.0);

  // Determinism: evaluating twice gives identical CSV bytes.
  const EvalRunResult ev2 = run_evaluation(eval_cfg, tr.checkpoint_path);
  CHECK(slurp(ev2.csv_path) == slurp(ev.csv_path));
  fs::remove_all(cfg.run_dir);
}
