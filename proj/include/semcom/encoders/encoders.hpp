/**
 * @file encoders.hpp
 * @brief Semantic encoders mapping a knowledge graph to per-node embeddings.
 *
 * Two variants share one interface:
 *
 *   llm_gnn   GINE message passing over the frozen text features. Each layer
 *             computes x'_i = h((1+eps) x_i + sum over in-edges j->i of
 *             ReLU(x_j + e_ji)), so a node sees the relations that point at it.
 *   llm_ffn   a per-node bottleneck that ignores topology entirely; the
 *             contrast baseline for the GNN.
 *
 * Both compress 384-d inputs down to d_z per node. Graphs are batched
 * block-diagonally: node rows are stacked and edge endpoints shifted by the
 * per-graph node offset, which keeps message passing within each graph.
 */
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "semcom/features/embedder.hpp"
#include "semcom/kg/graph.hpp"
#include "semcom/nn/modules.hpp"
#include "semcom/nn/tape.hpp"

namespace semcom::encoders {

enum class EncoderVariant { llm_gnn, llm_ffn };

std::string variant_name(EncoderVariant v);
EncoderVariant parse_variant(const std::string& name);

struct EncoderConfig {
  EncoderVariant variant = EncoderVariant::llm_gnn;
  int d_z = 128;           // output embedding width per node
  int num_gnn_layers = 2;  // also the depth of the FFN bottleneck
  int hidden = 256;        // width of every non-final layer
  bool reverse_edges = false;  // ablation: also aggregate against arrow direction
};

// A block-diagonal batch of graphs. Row i of node_feats belongs to the graph
// whose half-open node range [node_offset[g], node_offset[g+1]) contains i.
struct GraphBatch {
  nn::Mat node_feats;  // [total_nodes x feat_dim]
  nn::Mat edge_feats;  // [total_edges x feat_dim]
  std::vector<int> edge_src;     // flattened endpoint indices
  std::vector<int> edge_dst;
  std::vector<int> node_offset;  // size num_graphs + 1
  std::vector<int> edge_offset;  // size num_graphs + 1
  std::vector<const KnowledgeGraph*> graphs;

  int num_graphs() const { return static_cast<int>(graphs.size()); }
  int total_nodes() const { return node_feats.rows; }
  int total_edges() const { return static_cast<int>(edge_src.size()); }
  int graph_nodes(int g) const { return node_offset[g + 1] - node_offset[g]; }
};

GraphBatch make_batch(const std::vector<const KnowledgeGraph*>& graphs,
                      CachedEmbedder& embedder);

// One GINE layer. h is a two-layer feed-forward map in_dim -> out_dim ->
// out_dim with an interior ReLU; edge features pass through a learned
// projection when their width differs from in_dim.
class GineLayer {
 public:
  void init(nn::ParamSet& ps, const std::string& name, int in_dim, int out_dim,
            int edge_dim, nn::Rng& rng);

  // x [n x in_dim], edge_feats [m x edge_dim]; endpoints index rows of x.
  nn::Tape::Id forward(nn::Tape& t, nn::Tape::Id x,
                       const std::vector<int>& edge_src,
                       const std::vector<int>& edge_dst,
                       nn::Tape::Id edge_feats, int num_nodes) const;

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }

 private:
  nn::Parameter* eps_ = nullptr;  // trainable scalar, starts at 0
  nn::Linear edge_proj_;
  bool project_edges_ = false;
  nn::Linear h1_;
  nn::Linear h2_;
  int in_dim_ = 0;
  int out_dim_ = 0;
};

class Encoder {
 public:
  virtual ~Encoder() = default;
  // Returns a tape node of shape [total_nodes x d_z].
  virtual nn::Tape::Id encode(nn::Tape& t, const GraphBatch& batch) const = 0;
  virtual EncoderVariant variant() const = 0;
  virtual int d_z() const = 0;
};

class GnnEncoder final : public Encoder {
 public:
  GnnEncoder(nn::ParamSet& ps, const EncoderConfig& cfg, int feat_dim,
             nn::Rng& rng);
  nn::Tape::Id encode(nn::Tape& t, const GraphBatch& batch) const override;
  EncoderVariant variant() const override { return EncoderVariant::llm_gnn; }
  int d_z() const override { return cfg_.d_z; }

  const GineLayer& layer(int i) const { return layers_[i]; }

 private:
  EncoderConfig cfg_;
  std::vector<GineLayer> layers_;
};

class FfnEncoder final : public Encoder {
 public:
  FfnEncoder(nn::ParamSet& ps, const EncoderConfig& cfg, int feat_dim,
             nn::Rng& rng);
  nn::Tape::Id encode(nn::Tape& t, const GraphBatch& batch) const override;
  EncoderVariant variant() const override { return EncoderVariant::llm_ffn; }
  int d_z() const override { return cfg_.d_z; }

 private:
  EncoderConfig cfg_;
  std::vector<nn::Linear> layers_;
};

std::unique_ptr<Encoder> make_encoder(nn::ParamSet& ps,
                                      const EncoderConfig& cfg, int feat_dim,
                                      nn::Rng& rng);

}  // namespace semcom::encoders
