/**
 * @file training.cpp
 */
#include "semcom/train/training.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "semcom/eval/csv.hpp"

namespace semcom::train {

using nn::Tape;

MineEstimator::MineEstimator(nn::ParamSet& ps, int dim_x, int dim_y,
                             const MineConfig& cfg, nn::Rng& rng)
    : decay_(cfg.ema_decay) {
  t1_.init(ps, "mine.t1", dim_x + dim_y, cfg.hidden, rng);
  t2_.init(ps, "mine.t2", cfg.hidden, cfg.hidden, rng);
  t3_.init(ps, "mine.t3", cfg.hidden, 1, rng);
}

Tape::Id MineEstimator::statistic(Tape& t, Tape::Id x, Tape::Id y) const {
  Tape::Id h = t.relu(t1_.forward(t, t.concat_cols(x, y)));
  return t3_.forward(t, t.relu(t2_.forward(t, h)));
}

Tape::Id MineEstimator::estimate(Tape& t, Tape::Id x, Tape::Id y,
                                 const std::vector<int>& perm) const {
  Tape::Id joint = statistic(t, x, y);
  Tape::Id marg = statistic(t, x, t.gather_rows(y, perm));
  return t.sub(t.mean_all(joint), t.log_mean_exp(marg));
}

Tape::Id MineEstimator::training_objective(Tape& t, Tape::Id x, Tape::Id y,
                                           const std::vector<int>& perm) {
  Tape::Id joint = statistic(t, x, y);
  Tape::Id marg = statistic(t, x, t.gather_rows(y, perm));
  Tape::Id mean_exp = t.mean_all(t.exp_(marg));
  const double batch_mean = t.scalar(mean_exp);
  if (!std::isfinite(batch_mean))
    throw std::runtime_error("mine: partition term overflowed");
  ema_ = ema_ < 0.0 ? batch_mean : decay_ * ema_ + (1.0 - decay_) * batch_mean;
  return t.sub(t.mean_all(joint), t.scale(mean_exp, 1.0 / ema_));
}

std::vector<int> marginal_permutation(int n, nn::Rng& rng) {
  if (n < 2)
    throw std::invalid_argument("marginal_permutation: need at least 2 samples");
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  rng.shuffle(idx);
  return idx;
}

SemanticSystem::SemanticSystem(const SystemConfig& cfg, const Vocabulary& vocab)
    : cfg_(cfg) {
  nn::Rng rng(cfg.init_seed);
  encoder_ = encoders::make_encoder(params_, cfg.encoder, kEmbeddingDim, rng);
  codec_ = std::make_unique<channel::ChannelCodec>(
      params_, cfg.encoder.d_z, cfg.channel.k, cfg.channel.hidden, rng);
  node_clf_ = std::make_unique<decoders::NodeClassifier>(
      params_, cfg.encoder.d_z, cfg.decoder.node_hidden, vocab.num_entities(), rng);
  rel_clf_ = std::make_unique<decoders::RelationClassifier>(
      params_, cfg.encoder.d_z, cfg.decoder, vocab.num_relations(), rng);
  mine_ = std::make_unique<MineEstimator>(mine_params_, 2 * cfg.channel.k,
                                          2 * cfg.channel.k, cfg.mine, rng);
}

void SemanticSystem::set_channel(const channel::ChannelConfig& ch) {
  if (ch.k != cfg_.channel.k || ch.hidden != cfg_.channel.hidden)
    throw std::invalid_argument("set_channel: k and hidden are fixed at construction");
  cfg_.channel = ch;
}

SemanticSystem::Forward SemanticSystem::forward(Tape& t,
                                                const encoders::GraphBatch& batch,
                                                const decoders::PairSet& pairs,
                                                std::uint64_t draw_seed) const {
  Forward f;
  f.embeddings = encoder_->encode(t, batch);
  f.chan = codec_->transmit(t, f.embeddings, cfg_.channel, batch, draw_seed);
  f.decoded = codec_->decode(t, f.chan.received);
  f.node_logits = node_clf_->logits(t, f.decoded);
  f.rel_logits = rel_clf_->logits(t, f.decoded, pairs);
  return f;
}

std::vector<double> relation_weights(const std::vector<int>& targets, bool enabled) {
  std::vector<double> w(targets.size(), 1.0);
  if (!enabled) return w;
  long pos = 0;
  for (int t : targets)
    if (t != 0) ++pos;
  const long neg = static_cast<long>(targets.size()) - pos;
  if (pos == 0 || neg == 0) return w;
  const double none_w = static_cast<double>(pos) / static_cast<double>(neg);
  for (std::size_t i = 0; i < targets.size(); ++i)
    if (targets[i] == 0) w[i] = none_w;
  return w;
}

std::string epoch_metrics_header() {
  return "epoch,ce_nodes,ce_relations,mi,node_acc,f1";
}

std::string epoch_metrics_row(const EpochMetrics& m) {
  std::ostringstream os;
  os << m.epoch << ',' << eval::csv_double(m.ce_nodes) << ','
     << eval::csv_double(m.ce_relations) << ',' << eval::csv_double(m.mi) << ','
     << eval::csv_double(m.node_acc) << ',' << eval::csv_double(m.f1);
  return os.str();
}

Trainer::Trainer(SemanticSystem& system, const Vocabulary& vocab,
                 CachedEmbedder& embedder, const TrainConfig& cfg)
    : system_(system), vocab_(vocab), embedder_(embedder), cfg_(cfg),
      e2e_opt_(nn::AdamConfig{cfg.lr_e2e, 0.9, 0.999, 1e-8}),
      mine_opt_(nn::AdamConfig{cfg.lr_mine, 0.9, 0.999, 1e-8}) {
  if (cfg.batch_size < 1) throw std::invalid_argument("trainer: batch_size >= 1");
  if (cfg.alpha < 0.0) throw std::invalid_argument("trainer: alpha >= 0");
}

EpochMetrics Trainer::run_epoch(
    const std::vector<const KnowledgeGraph*>& train_graphs, int epoch) {
  if (train_graphs.empty())
    throw std::invalid_argument("trainer: empty training set");

  std::vector<const KnowledgeGraph*> order = train_graphs;
  nn::Rng shuffle_rng(nn::mix_seed(cfg_.seed, static_cast<std::uint64_t>(epoch)));
  shuffle_rng.shuffle(order);

  std::vector<std::vector<const KnowledgeGraph*>> batches;
  for (std::size_t i = 0; i < order.size(); i += cfg_.batch_size) {
    const std::size_t j = std::min(order.size(), i + cfg_.batch_size);
    batches.emplace_back(order.begin() + i, order.begin() + j);
  }

  const bool mi_active = cfg_.alpha > 0.0 && !system_.config().channel.noiseless;
  nn::Rng perm_rng(nn::mix_seed(cfg_.seed, 0x5eedULL + epoch));

  // Step 1: calibrate the MI estimator on detached samples from the current
  // system. Skipped entirely for noiseless channels, where input and output
  // coincide and the bound has no finite target.
  if (mi_active) {
    for (std::size_t b = 0; b < batches.size(); ++b) {
      encoders::GraphBatch batch = encoders::make_batch(batches[b], embedder_);
      if (batch.total_nodes() < 2) continue;
      nn::Mat sent, received;
      {
        Tape t0;
        Tape::Id x = system_.encoder().encode(t0, batch);
        channel::ChannelOutput ch = system_.codec().transmit(
            t0, x, system_.config().channel, batch,
            nn::mix_seed(2 * epoch, static_cast<std::uint64_t>(b)));
        sent = t0.value(ch.sent);
        received = t0.value(ch.received);
      }
      Tape t;
      Tape::Id x = t.constant(std::move(sent));
      Tape::Id y = t.constant(std::move(received));
      std::vector<int> perm = marginal_permutation(t.value(x).rows, perm_rng);
      Tape::Id objective = system_.mine().training_objective(t, x, y, perm);
      Tape::Id loss = t.scale(objective, -1.0);
      if (!std::isfinite(t.scalar(loss)))
        throw std::runtime_error("training diverged: MINE loss non-finite at epoch " +
                                 std::to_string(epoch));
      t.backward(loss);
      mine_opt_.step(system_.mine_params().all());
      system_.mine_params().zero_grad();
    }
  }

  // Step 2: end-to-end update with the estimator frozen.
  EpochMetrics m;
  m.epoch = epoch;
  double acc_nodes_num = 0.0;
  long acc_nodes_den = 0;
  std::vector<eval::F1Report> f1s;
  system_.mine_params().set_trainable(false);
  try {
    for (std::size_t b = 0; b < batches.size(); ++b) {
      encoders::GraphBatch batch = encoders::make_batch(batches[b], embedder_);
      decoders::PairSet pairs = decoders::make_pairs(batch, &vocab_);
      Tape t;
      SemanticSystem::Forward f = system_.forward(
          t, batch, pairs,
          nn::mix_seed(2 * epoch + 1, static_cast<std::uint64_t>(b)));

      const std::vector<int> node_t = decoders::node_targets(batch, vocab_);
      const std::vector<double> rel_w =
          relation_weights(pairs.target_relation, cfg_.weight_none_class);
      Tape::Id ce_n = t.cross_entropy(f.node_logits, node_t);
      Tape::Id ce_r = t.cross_entropy(f.rel_logits, pairs.target_relation, rel_w);
      Tape::Id loss = t.add(ce_n, ce_r);

      double mi_value = 0.0;
      if (mi_active && batch.total_nodes() >= 2) {
        std::vector<int> perm = marginal_permutation(batch.total_nodes(), perm_rng);
        Tape::Id mi = system_.mine().estimate(t, f.chan.sent, f.chan.received, perm);
        mi_value = t.scalar(mi);
        loss = t.sub(loss, t.scale(mi, cfg_.alpha));
      }
      if (!std::isfinite(t.scalar(loss)))
        throw std::runtime_error(
            "training diverged: loss non-finite at epoch " + std::to_string(epoch) +
            " batch " + std::to_string(b));
      t.backward(loss);
      e2e_opt_.step(system_.params().all());
      system_.params().zero_grad();

      m.ce_nodes += t.scalar(ce_n);
      m.ce_relations += t.scalar(ce_r);
      m.mi += mi_value;

      const std::vector<int> node_p = decoders::argmax_rows(t.value(f.node_logits));
      for (std::size_t i = 0; i < node_t.size(); ++i)
        if (node_p[i] == node_t[i]) acc_nodes_num += 1.0;
      acc_nodes_den += static_cast<long>(node_t.size());
      const std::vector<int> rel_p = decoders::argmax_rows(t.value(f.rel_logits));
      std::vector<KnowledgeGraph> decoded =
          decoders::assemble_graphs(batch, node_p, pairs, rel_p, vocab_);
      for (int gi = 0; gi < batch.num_graphs(); ++gi)
        f1s.push_back(eval::triple_f1(decoded[gi], *batch.graphs[gi]));
    }
  } catch (...) {
    system_.mine_params().set_trainable(true);
    throw;
  }
  system_.mine_params().set_trainable(true);

  const double nb = static_cast<double>(batches.size());
  m.ce_nodes /= nb;
  m.ce_relations /= nb;
  m.mi /= nb;
  m.node_acc = acc_nodes_den > 0 ? acc_nodes_num / acc_nodes_den : 0.0;
  m.f1 = eval::summarize_f1(f1s).macro_f1;
  return m;
}

EvalResult evaluate_graphs(SemanticSystem& system, const Vocabulary& vocab,
                           CachedEmbedder& embedder,
                           const std::vector<const KnowledgeGraph*>& graphs,
                           int batch_size, std::uint64_t draw_seed) {
  if (graphs.empty()) throw std::invalid_argument("evaluate_graphs: empty set");
  EvalResult r;
  double acc_num = 0.0;
  long acc_den = 0;
  std::vector<eval::F1Report> f1s;
  for (std::size_t i = 0; i < graphs.size(); i += batch_size) {
    const std::size_t j = std::min(graphs.size(), i + batch_size);
    std::vector<const KnowledgeGraph*> chunk(graphs.begin() + i, graphs.begin() + j);
    encoders::GraphBatch batch = encoders::make_batch(chunk, embedder);
    decoders::PairSet pairs = decoders::make_pairs(batch, &vocab);
    Tape t;
    SemanticSystem::Forward f = system.forward(t, batch, pairs, draw_seed);
    const std::vector<int> node_t = decoders::node_targets(batch, vocab);
    const std::vector<int> node_p = decoders::argmax_rows(t.value(f.node_logits));
    for (std::size_t n = 0; n < node_t.size(); ++n)
      if (node_p[n] == node_t[n]) acc_num += 1.0;
    acc_den += static_cast<long>(node_t.size());
    const std::vector<int> rel_p = decoders::argmax_rows(t.value(f.rel_logits));
    std::vector<KnowledgeGraph> decoded =
        decoders::assemble_graphs(batch, node_p, pairs, rel_p, vocab);
    for (int gi = 0; gi < batch.num_graphs(); ++gi)
      f1s.push_back(eval::triple_f1(decoded[gi], *batch.graphs[gi]));
  }
  const eval::F1Summary s = eval::summarize_f1(f1s);
  r.node_acc = acc_den > 0 ? acc_num / acc_den : 0.0;
  r.macro_f1 = s.macro_f1;
  r.micro_f1 = s.micro_f1;
  return r;
}

}  // namespace semcom::train
