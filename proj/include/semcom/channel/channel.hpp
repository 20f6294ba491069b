/**
 * @file channel.hpp
 * @brief Learned channel codec and AWGN simulation.
 *
 * The channel encoder maps each d_z node vector through a single-hidden-layer
 * FFN to 2k reals (k complex symbols) and power-normalizes each node block so
 * its mean squared symbol magnitude is one. The channel adds circularly
 * symmetric complex Gaussian noise with per-symbol variance
 * sigma^2 = 10^(-snr_db / 10); the decoder is the mirror-image FFN back to
 * d_z. Noise enters the tape as an additive constant, so gradients flow
 * end-to-end through encoder, channel and decoder.
 *
 * Noise draws are derived from (seed, graph key), which makes a graph's
 * realization independent of how the batch around it was assembled.
 */
#pragma once

#include <cstdint>

#include "semcom/encoders/encoders.hpp"
#include "semcom/nn/modules.hpp"
#include "semcom/nn/tape.hpp"

namespace semcom::channel {

struct ChannelConfig {
  double snr_db = 14.0;
  bool noiseless = false;  // bypasses the noise add entirely (bit-exact)
  int k = 5;               // complex symbols per node
  int hidden = 256;
  std::uint64_t seed = 0;
};

// Complex noise variance sigma^2 for unit signal power.
double noise_variance(double snr_db);

// One [rows x cols] draw of real Gaussian components with variance
// noise_variance(snr_db) / 2 each (cols = 2k reals).
nn::Mat sample_awgn(int rows, int cols, double snr_db, nn::Rng& rng);

// Per-graph streams: rows of graph g are filled from an RNG seeded with
// mix_seed(seed, key(g)) where key hashes the graph's canonical triple form.
nn::Mat sample_awgn_batch(const encoders::GraphBatch& batch, int cols,
                          double snr_db, std::uint64_t seed);

std::uint64_t graph_noise_key(const KnowledgeGraph& g);

struct ChannelOutput {
  nn::Tape::Id sent = 0;      // [n x 2k], unit power per node block
  nn::Tape::Id received = 0;  // equal to `sent` when noiseless
};

class ChannelCodec {
 public:
  ChannelCodec(nn::ParamSet& ps, int d_z, int k, int hidden, nn::Rng& rng);

  // x [n x d_z] -> [n x 2k]; every emitted block is checked against the
  // unit-power invariant (tolerance 1e-6) before returning.
  nn::Tape::Id encode(nn::Tape& t, nn::Tape::Id x) const;

  // y [n x 2k] -> [n x d_z]
  nn::Tape::Id decode(nn::Tape& t, nn::Tape::Id y) const;

  // encode, then add a noise draw unless cfg.noiseless.
  ChannelOutput transmit(nn::Tape& t, nn::Tape::Id x, const ChannelConfig& cfg,
                         const encoders::GraphBatch& batch,
                         std::uint64_t draw_seed) const;

  int k() const { return k_; }
  int d_z() const { return d_z_; }

 private:
  nn::Linear enc1_, enc2_;
  nn::Linear dec1_, dec2_;
  int d_z_ = 0;
  int k_ = 0;
};

}  // namespace semcom::channel
