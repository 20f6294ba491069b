/**
 * @file experiments.hpp
 * @brief Experiment drivers behind the fig2 / fig3 / fig4 / train / eval /
 *        baseline CLI subcommands.
 *
 * Each driver loads the dataset named in the config, writes CSV tables and an
 * SVG plot into the run directory, and returns its numbers for programmatic
 * use. All randomness flows from config seeds, so a rerun with the same
 * config produces byte-identical CSV files.
 */
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "semcom/baselines/baselines.hpp"
#include "semcom/eval/config.hpp"
#include "semcom/eval/metrics.hpp"
#include "semcom/features/embedder.hpp"
#include "semcom/kg/graph.hpp"
#include "semcom/kg/webnlg.hpp"
#include "semcom/train/checkpoint.hpp"
#include "semcom/train/training.hpp"

namespace semcom::eval {

// Dataset plus a vocabulary covering every split (closed-vocabulary setting:
// transmitter and receiver share the label space).
struct ExperimentContext {
  DatasetSplit data;
  Vocabulary vocab;
  std::unique_ptr<CachedEmbedder> embedder;
};

ExperimentContext load_context(const ExperimentConfig& cfg);

// First max_n pointers (all when max_n <= 0), preserving split order.
std::vector<const KnowledgeGraph*> select_graphs(
    const std::vector<KnowledgeGraph>& graphs, int max_n);

const std::vector<KnowledgeGraph>& split_by_name(const DatasetSplit& data,
                                                 const std::string& name);

// --- train / eval subcommands -------------------------------------------

struct TrainRunResult {
  train::EpochMetrics final_metrics;
  std::string checkpoint_path;
  std::string metrics_csv;
};

// Trains per config on the train split, logging per-epoch metrics and
// checkpointing into the run directory.
TrainRunResult run_training(const ExperimentConfig& cfg);

struct EvalRunResult {
  train::EvalResult metrics;
  std::string csv_path;
};

// Loads a checkpoint and scores the configured split at the configured SNR.
EvalRunResult run_evaluation(const ExperimentConfig& cfg,
                             const std::string& checkpoint_path);

// --- figure drivers -------------------------------------------------------

struct Fig2Cell {
  std::string variant;
  int d_z = 0;
  double node_acc = 0.0;
  double macro_f1 = 0.0;
};

struct Fig2Result {
  std::vector<Fig2Cell> cells;
  std::string csv_path;

  double node_acc(const std::string& variant, int d_z) const;
};

// Trains both encoder variants noiselessly at each d_z; node accuracy is
// measured on the configured eval split with the vocabulary closed over the
// graphs actually used.
Fig2Result run_fig2(const ExperimentConfig& cfg, const std::vector<int>& dz_list);

struct Fig3Point {
  double snr_db = 0.0;
  std::string scheme;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
};

struct Fig3Result {
  std::vector<Fig3Point> points;
  // Lowest SNR at which a scheme reaches the given fraction of its own
  // maximum F1 (linear interpolation between grid points).
  std::map<std::string, double> snr_at_90pct;
  std::string csv_path;
};

// Trains both semantic variants at the reference SNR, then sweeps evaluation
// SNR for them and for both classical baselines.
Fig3Result run_fig3(const ExperimentConfig& cfg, const std::vector<double>& snr_grid);

double snr_at_fraction_of_max(const std::vector<double>& snr,
                              const std::vector<double>& f1, double fraction);

struct Fig4Result {
  // nodes -> scheme -> mean bits per graph
  std::map<int, std::map<std::string, double>> by_nodes;
  std::map<int, int> graphs_per_bucket;
  double mean_semantic_bits = 0.0;
  double mean_huffman_bits = 0.0;
  double mean_sixbit_bits = 0.0;
  double gain_vs_huffman = 0.0;  // huffman / semantic, ratio of means
  double gain_vs_sixbit = 0.0;
  std::string csv_path;
};

// Bit accounting over the test split; no training, no randomness.
Fig4Result run_fig4(const ExperimentConfig& cfg);

struct BaselinePoint {
  double snr_db = 0.0;
  std::string scheme;
  double macro_f1 = 0.0;
  double mean_coded_bits = 0.0;
};

// Classical pipeline alone over an SNR grid (subset of fig3, no training).
std::vector<BaselinePoint> run_baseline(const ExperimentConfig& cfg,
                                        const std::vector<double>& snr_grid);

}  // namespace semcom::eval
