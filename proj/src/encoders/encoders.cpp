/**
 * @file encoders.cpp
 */
#include "semcom/encoders/encoders.hpp"

#include <stdexcept>

namespace semcom::encoders {

using nn::Tape;

std::string variant_name(EncoderVariant v) {
  return v == EncoderVariant::llm_gnn ? "llm_gnn" : "llm_ffn";
}

EncoderVariant parse_variant(const std::string& name) {
  if (name == "llm_gnn") return EncoderVariant::llm_gnn;
  if (name == "llm_ffn") return EncoderVariant::llm_ffn;
  throw std::invalid_argument("unknown encoder variant: " + name);
}

GraphBatch make_batch(const std::vector<const KnowledgeGraph*>& graphs,
                      CachedEmbedder& embedder) {
  if (graphs.empty()) throw std::invalid_argument("make_batch: empty batch");
  int total_nodes = 0;
  int total_edges = 0;
  for (const auto* g : graphs) {
    g->validate();
    total_nodes += g->num_nodes();
    total_edges += g->num_edges();
  }
  GraphBatch b;
  b.graphs = graphs;
  b.node_feats = nn::Mat(total_nodes, kEmbeddingDim);
  b.edge_feats = nn::Mat(total_edges, kEmbeddingDim);
  b.edge_src.reserve(total_edges);
  b.edge_dst.reserve(total_edges);
  b.node_offset.push_back(0);
  b.edge_offset.push_back(0);
  int nrow = 0;
  int erow = 0;
  for (const auto* g : graphs) {
    const int base = nrow;
    GraphFeatures f = embed_graph(*g, embedder);
    for (int i = 0; i < g->num_nodes(); ++i, ++nrow)
      std::copy(f.node_feats.row(i), f.node_feats.row(i) + kEmbeddingDim,
                b.node_feats.row(nrow));
    for (int e = 0; e < g->num_edges(); ++e, ++erow) {
      std::copy(f.edge_feats.row(e), f.edge_feats.row(e) + kEmbeddingDim,
                b.edge_feats.row(erow));
      b.edge_src.push_back(base + g->edges[e].src);
      b.edge_dst.push_back(base + g->edges[e].dst);
    }
    b.node_offset.push_back(nrow);
    b.edge_offset.push_back(erow);
  }
  return b;
}

void GineLayer::init(nn::ParamSet& ps, const std::string& name, int in_dim,
                     int out_dim, int edge_dim, nn::Rng& rng) {
  in_dim_ = in_dim;
  out_dim_ = out_dim;
  eps_ = &ps.add(name + ".eps", 1, 1);
  eps_->value.a[0] = 0.0;
  project_edges_ = edge_dim != in_dim;
  if (project_edges_) edge_proj_.init(ps, name + ".edge_proj", edge_dim, in_dim, rng);
  h1_.init(ps, name + ".h1", in_dim, out_dim, rng);
  h2_.init(ps, name + ".h2", out_dim, out_dim, rng);
}

Tape::Id GineLayer::forward(Tape& t, Tape::Id x,
                            const std::vector<int>& edge_src,
                            const std::vector<int>& edge_dst,
                            Tape::Id edge_feats, int num_nodes) const {
  // self term: x + eps * x
  Tape::Id eps_node = t.param(*eps_);
  Tape::Id self_term = t.add(x, t.scale_node(x, eps_node));

  Tape::Id pre;
  if (edge_src.empty()) {
    pre = self_term;
  } else {
    Tape::Id e = project_edges_ ? edge_proj_.forward(t, edge_feats) : edge_feats;
    Tape::Id xj = t.gather_rows(x, edge_src);
    Tape::Id msg = t.relu(t.add(xj, e));
    Tape::Id agg = t.scatter_sum_rows(msg, edge_dst, num_nodes);
    pre = t.add(self_term, agg);
  }
  return h2_.forward(t, t.relu(h1_.forward(t, pre)));
}

namespace {

// Layer widths for a depth-L stack: feat_dim, hidden, ..., hidden, d_z.
std::vector<int> stack_widths(int feat_dim, const EncoderConfig& cfg) {
  if (cfg.d_z < 1) throw std::invalid_argument("encoder: d_z must be >= 1");
  if (cfg.num_gnn_layers < 1)
    throw std::invalid_argument("encoder: need at least one layer");
  std::vector<int> w;
  w.push_back(feat_dim);
  for (int i = 0; i + 1 < cfg.num_gnn_layers; ++i) w.push_back(cfg.hidden);
  w.push_back(cfg.d_z);
  return w;
}

}  // namespace

GnnEncoder::GnnEncoder(nn::ParamSet& ps, const EncoderConfig& cfg, int feat_dim,
                       nn::Rng& rng)
    : cfg_(cfg) {
  const auto widths = stack_widths(feat_dim, cfg);
  layers_.resize(widths.size() - 1);
  for (std::size_t i = 0; i + 1 < widths.size(); ++i)
    layers_[i].init(ps, "enc.gine" + std::to_string(i), widths[i], widths[i + 1],
                    feat_dim, rng);
}

Tape::Id GnnEncoder::encode(Tape& t, const GraphBatch& batch) const {
  Tape::Id x = t.constant(batch.node_feats);
  Tape::Id ef = t.constant(batch.edge_feats);
  std::vector<int> src = batch.edge_src;
  std::vector<int> dst = batch.edge_dst;
  if (cfg_.reverse_edges && batch.total_edges() > 0) {
    std::vector<int> dup(batch.total_edges() * 2);
    for (int e = 0; e < batch.total_edges(); ++e) {
      dup[e] = e;
      dup[batch.total_edges() + e] = e;
    }
    ef = t.gather_rows(ef, dup);
    src.insert(src.end(), batch.edge_dst.begin(), batch.edge_dst.end());
    dst.insert(dst.end(), batch.edge_src.begin(), batch.edge_src.end());
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    x = layers_[i].forward(t, x, src, dst, ef, batch.total_nodes());
    if (i + 1 < layers_.size()) x = t.relu(x);
  }
  return x;
}

FfnEncoder::FfnEncoder(nn::ParamSet& ps, const EncoderConfig& cfg, int feat_dim,
                       nn::Rng& rng)
    : cfg_(cfg) {
  const auto widths = stack_widths(feat_dim, cfg);
  layers_.resize(widths.size() - 1);
  for (std::size_t i = 0; i + 1 < widths.size(); ++i)
    layers_[i].init(ps, "enc.ffn" + std::to_string(i), widths[i], widths[i + 1],
                    rng);
}

Tape::Id FfnEncoder::encode(Tape& t, const GraphBatch& batch) const {
  Tape::Id x = t.constant(batch.node_feats);
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    x = layers_[i].forward(t, x);
    if (i + 1 < layers_.size()) x = t.relu(x);
  }
  return x;
}

std::unique_ptr<Encoder> make_encoder(nn::ParamSet& ps, const EncoderConfig& cfg,
                                      int feat_dim, nn::Rng& rng) {
  if (cfg.variant == EncoderVariant::llm_gnn)
    return std::make_unique<GnnEncoder>(ps, cfg, feat_dim, rng);
  return std::make_unique<FfnEncoder>(ps, cfg, feat_dim, rng);
}

}  // namespace semcom::encoders
