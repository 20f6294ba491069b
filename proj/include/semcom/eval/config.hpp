/**
 * @file config.hpp
 * @brief Experiment configuration: one JSON file, strict keys, dotted-path
 *        command-line overrides.
 *
 * Every experiment entry point consumes an ExperimentConfig. Unknown keys are
 * rejected so typos fail loudly (exit code 2 at the CLI), and the effective
 * config is snapshotted into the run directory for reproducibility.
 */
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "semcom/channel/channel.hpp"
#include "semcom/decoders/decoders.hpp"
#include "semcom/encoders/encoders.hpp"
#include "semcom/train/training.hpp"

namespace semcom::eval {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  struct Dataset {
    std::string dir = "data/webnlg-sample";
    std::string embedder = "hash-v1";
    std::string cache;            // empty = in-memory only
    int max_train_graphs = 0;     // 0 = use every graph
    int max_eval_graphs = 0;
  } dataset;

  encoders::EncoderConfig encoder;
  channel::ChannelConfig channel;
  decoders::DecoderConfig decoder;
  train::MineConfig mine;
  train::TrainConfig train;

  struct Eval {
    int bits_per_symbol = 6;      // semantic symbol -> bit equivalence
    std::uint64_t draw_seed = 99; // channel noise stream used at evaluation
    int batch_size = 8;
    std::string split = "test";   // train | validation | test
  } eval;

  std::string run_dir = "runs/default";
  std::uint64_t init_seed = 1;

  train::SystemConfig system_config() const;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);

  // Loads the file (or defaults when path is empty) and applies overrides of
  // the form "section.key=value" in order.
  static ExperimentConfig load(const std::string& path,
                               const std::vector<std::string>& overrides);
  void save(const std::string& path) const;
};

// Applies one "a.b.c=value" override; the value is parsed as JSON when
// possible and treated as a string otherwise.
void apply_override(nlohmann::json& j, const std::string& spec);

}  // namespace semcom::eval
