/**
 * @file channel.cpp
 */
#include "semcom/channel/channel.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "semcom/features/sha256.hpp"

namespace semcom::channel {

using nn::Tape;

double noise_variance(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

nn::Mat sample_awgn(int rows, int cols, double snr_db, nn::Rng& rng) {
  const double sd = std::sqrt(noise_variance(snr_db) / 2.0);
  nn::Mat n(rows, cols);
  for (std::size_t i = 0; i < n.size(); ++i) n.a[i] = sd * rng.normal();
  return n;
}

std::uint64_t graph_noise_key(const KnowledgeGraph& g) {
  const Sha256Digest d = sha256(graph_identity(g));
  std::uint64_t key = 0;
  std::memcpy(&key, d.data(), sizeof(key));
  return key;
}

nn::Mat sample_awgn_batch(const encoders::GraphBatch& batch, int cols,
                          double snr_db, std::uint64_t seed) {
  const double sd = std::sqrt(noise_variance(snr_db) / 2.0);
  nn::Mat n(batch.total_nodes(), cols);
  for (int gi = 0; gi < batch.num_graphs(); ++gi) {
    nn::Rng rng(nn::mix_seed(seed, graph_noise_key(*batch.graphs[gi])));
    for (int r = batch.node_offset[gi]; r < batch.node_offset[gi + 1]; ++r)
      for (int c = 0; c < cols; ++c) n.at(r, c) = sd * rng.normal();
  }
  return n;
}

ChannelCodec::ChannelCodec(nn::ParamSet& ps, int d_z, int k, int hidden,
                           nn::Rng& rng)
    : d_z_(d_z), k_(k) {
  if (k < 1) throw std::invalid_argument("channel: k must be >= 1");
  enc1_.init(ps, "ch.enc1", d_z, hidden, rng);
  enc2_.init(ps, "ch.enc2", hidden, 2 * k, rng);
  dec1_.init(ps, "ch.dec1", 2 * k, hidden, rng);
  dec2_.init(ps, "ch.dec2", hidden, d_z, rng);
}

Tape::Id ChannelCodec::encode(Tape& t, Tape::Id x) const {
  Tape::Id h = t.relu(enc1_.forward(t, x));
  Tape::Id s = t.power_normalize_rows(enc2_.forward(t, h), k_);
  const nn::Mat& v = t.value(s);
  for (int r = 0; r < v.rows; ++r) {
    double p = 0.0;
    for (int c = 0; c < v.cols; ++c) p += v.at(r, c) * v.at(r, c);
    p /= k_;
    if (std::abs(p - 1.0) > 1e-6)
      throw std::logic_error("channel: emitted block violates unit-power invariant");
  }
  return s;
}

Tape::Id ChannelCodec::decode(Tape& t, Tape::Id y) const {
  return dec2_.forward(t, t.relu(dec1_.forward(t, y)));
}

ChannelOutput ChannelCodec::transmit(Tape& t, Tape::Id x,
                                     const ChannelConfig& cfg,
                                     const encoders::GraphBatch& batch,
                                     std::uint64_t draw_seed) const {
  ChannelOutput out;
  out.sent = encode(t, x);
  if (cfg.noiseless) {
    out.received = out.sent;
  } else {
    nn::Mat noise =
        sample_awgn_batch(batch, 2 * k_, cfg.snr_db, nn::mix_seed(cfg.seed, draw_seed));
    out.received = t.add(out.sent, t.constant(std::move(noise)));
  }
  return out;
}

}  // namespace semcom::channel
