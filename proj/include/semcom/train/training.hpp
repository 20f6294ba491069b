/**
 * @file training.hpp
 * @brief End-to-end system bundle, the MINE mutual-information estimator, and
 *        the two-step training loop.
 *
 * Every epoch runs two passes over the shuffled training set:
 *
 *   step 1  update only the MINE statistics network on fresh channel
 *           input/output samples drawn from the current system (samples are
 *           detached, so no gradient reaches the system);
 *   step 2  update encoder, channel codec and decoders by minimizing
 *           CE_nodes + CE_relations - alpha * I, with the MINE parameters
 *           frozen (the estimate still backpropagates into the symbols).
 *
 * MI is estimated between the transmitted symbol blocks and the received
 * blocks. The Donsker-Varadhan bound needs a marginal shuffle, so batches
 * must contribute at least two node rows.
 */
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "semcom/channel/channel.hpp"
#include "semcom/decoders/decoders.hpp"
#include "semcom/encoders/encoders.hpp"
#include "semcom/eval/metrics.hpp"
#include "semcom/features/embedder.hpp"
#include "semcom/kg/graph.hpp"
#include "semcom/nn/modules.hpp"

namespace semcom::train {

struct MineConfig {
  int hidden = 256;
  double ema_decay = 0.99;
};

// Statistics network T(x, y) with the Donsker-Varadhan estimate
//   I >= mean T(joint) - log mean exp T(marginal)
// where the marginal pairs x rows with permuted y rows.
class MineEstimator {
 public:
  MineEstimator(nn::ParamSet& ps, int dim_x, int dim_y, const MineConfig& cfg,
                nn::Rng& rng);

  // The DV lower bound as a tape node; perm must be a permutation of the row
  // indices with at least 2 rows.
  nn::Tape::Id estimate(nn::Tape& t, nn::Tape::Id x, nn::Tape::Id y,
                        const std::vector<int>& perm) const;

  // Bias-corrected objective for updating T (to be maximized):
  //   mean T(joint) - mean exp T(marginal) / ema.
  // The moving average is updated from the current batch as a side effect;
  // its gradient contribution is treated as constant.
  nn::Tape::Id training_objective(nn::Tape& t, nn::Tape::Id x, nn::Tape::Id y,
                                  const std::vector<int>& perm);

  double ema() const { return ema_; }
  void reset_ema() { ema_ = -1.0; }

 private:
  nn::Tape::Id statistic(nn::Tape& t, nn::Tape::Id x, nn::Tape::Id y) const;

  nn::Linear t1_, t2_, t3_;
  double ema_ = -1.0;  // negative until the first batch seeds it
  double decay_ = 0.99;
};

// Returns a shuffled index vector 0..n-1; throws for n < 2 because the
// marginal resampling is undefined on a single sample.
std::vector<int> marginal_permutation(int n, nn::Rng& rng);

struct SystemConfig {
  encoders::EncoderConfig encoder;
  channel::ChannelConfig channel;
  decoders::DecoderConfig decoder;
  MineConfig mine;
  std::uint64_t init_seed = 1;
};

// Owns every trainable piece of the pipeline. E2E parameters (encoder,
// channel codec, decoders) and MINE parameters live in separate sets so the
// two training steps can use independent optimizers and freezing.
class SemanticSystem {
 public:
  SemanticSystem(const SystemConfig& cfg, const Vocabulary& vocab);

  struct Forward {
    nn::Tape::Id embeddings = 0;   // [n x d_z]
    channel::ChannelOutput chan;   // sent / received symbol blocks
    nn::Tape::Id decoded = 0;      // [n x d_z]
    nn::Tape::Id node_logits = 0;  // [n x |entities|]
    nn::Tape::Id rel_logits = 0;   // [pairs x |relations|]
  };

  // Full pipeline on one batch; pairs must come from make_pairs(batch, ...).
  Forward forward(nn::Tape& t, const encoders::GraphBatch& batch,
                  const decoders::PairSet& pairs, std::uint64_t draw_seed) const;

  const SystemConfig& config() const { return cfg_; }
  // Evaluation-time channel override (SNR / noiseless flag / noise seed only;
  // the codec geometry is fixed at construction).
  void set_channel(const channel::ChannelConfig& ch);
  const encoders::Encoder& encoder() const { return *encoder_; }
  const channel::ChannelCodec& codec() const { return *codec_; }
  const decoders::NodeClassifier& node_classifier() const { return *node_clf_; }
  const decoders::RelationClassifier& relation_classifier() const { return *rel_clf_; }
  MineEstimator& mine() { return *mine_; }

  nn::ParamSet& params() { return params_; }
  const nn::ParamSet& params() const { return params_; }
  nn::ParamSet& mine_params() { return mine_params_; }
  const nn::ParamSet& mine_params() const { return mine_params_; }

 private:
  SystemConfig cfg_;
  nn::ParamSet params_;
  nn::ParamSet mine_params_;
  std::unique_ptr<encoders::Encoder> encoder_;
  std::unique_ptr<channel::ChannelCodec> codec_;
  std::unique_ptr<decoders::NodeClassifier> node_clf_;
  std::unique_ptr<decoders::RelationClassifier> rel_clf_;
  std::unique_ptr<MineEstimator> mine_;
};

// Cross-entropy weights for relation targets: positive pairs weigh 1, "none"
// pairs are down-weighted by (positives / negatives). Falls back to uniform
// when either side is empty or when disabled.
std::vector<double> relation_weights(const std::vector<int>& targets, bool enabled);

struct TrainConfig {
  double alpha = 0.01;           // MI penalty weight
  int batch_size = 8;
  double lr_e2e = 1e-4;
  double lr_mine = 1e-4;
  int epochs = 30;
  std::uint64_t seed = 1;
  bool weight_none_class = true;
};

struct EpochMetrics {
  int epoch = 0;
  double ce_nodes = 0.0;
  double ce_relations = 0.0;
  double mi = 0.0;
  double node_acc = 0.0;
  double f1 = 0.0;
};

// One-line CSV schema shared by the trainer and the experiment drivers.
std::string epoch_metrics_header();
std::string epoch_metrics_row(const EpochMetrics& m);

class Trainer {
 public:
  Trainer(SemanticSystem& system, const Vocabulary& vocab, CachedEmbedder& embedder,
          const TrainConfig& cfg);

  // Runs MINE calibration then the E2E update over the whole training list.
  // Metrics are averaged over step-2 batches. Throws std::runtime_error with
  // a diagnostic when any loss turns non-finite.
  EpochMetrics run_epoch(const std::vector<const KnowledgeGraph*>& train_graphs,
                         int epoch);

  const TrainConfig& config() const { return cfg_; }

 private:
  SemanticSystem& system_;
  const Vocabulary& vocab_;
  CachedEmbedder& embedder_;
  TrainConfig cfg_;
  nn::Adam e2e_opt_;
  nn::Adam mine_opt_;
};

// Convenience evaluation shared by trainer logging and experiment drivers.
struct EvalResult {
  double node_acc = 0.0;
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
};
EvalResult evaluate_graphs(SemanticSystem& system, const Vocabulary& vocab,
                           CachedEmbedder& embedder,
                           const std::vector<const KnowledgeGraph*>& graphs,
                           int batch_size, std::uint64_t draw_seed);

}  // namespace semcom::train
