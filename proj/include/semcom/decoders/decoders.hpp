/**
 * @file decoders.hpp
 * @brief Receiver-side reconstruction: node classification, pairwise relation
 *        classification, and assembly of the decoded graph.
 *
 * The node classifier is an MLP over each received vector with additive skip
 * projections from the input to both hidden layers; it scores the full entity
 * vocabulary. Relations are scored densely: every ordered node pair (i, j)
 * with i != j inside a graph becomes a 2-token sequence (source role, target
 * role) run through a single transformer encoder layer, and a fully connected
 * head over the concatenated outputs scores the relation vocabulary, whose
 * class 0 is the synthetic "none" (no edge). The decoded graph keeps one edge
 * for each pair whose argmax relation is not "none".
 */
#pragma once

#include <vector>

#include "semcom/encoders/encoders.hpp"
#include "semcom/kg/graph.hpp"
#include "semcom/nn/modules.hpp"
#include "semcom/nn/tape.hpp"

namespace semcom::decoders {

struct DecoderConfig {
  int node_hidden = 256;
  int rel_heads = 4;
  int rel_ff_hidden = 256;
};

// All ordered intra-graph pairs (i, j), i != j, in flattened row indices.
// target_relation holds the vocabulary id of the edge i->j (0 = "none") and
// is filled only when a vocabulary is supplied; for a multi-edge pair the
// first edge in graph order wins.
struct PairSet {
  std::vector<int> src;
  std::vector<int> dst;
  std::vector<int> pair_graph;       // owning graph index per pair
  std::vector<int> target_relation;  // empty when built without labels

  int num_pairs() const { return static_cast<int>(src.size()); }
};

PairSet make_pairs(const encoders::GraphBatch& batch,
                   const Vocabulary* vocab = nullptr);

// Entity-vocabulary target id per flattened node row.
std::vector<int> node_targets(const encoders::GraphBatch& batch,
                              const Vocabulary& vocab);

class NodeClassifier {
 public:
  NodeClassifier(nn::ParamSet& ps, int d_z, int hidden, int num_entities,
                 nn::Rng& rng);
  // y [n x d_z] -> [n x |entities|]
  nn::Tape::Id logits(nn::Tape& t, nn::Tape::Id y) const;

 private:
  nn::Linear l1_, l2_, out_;
  nn::Linear skip1_, skip2_;  // input-to-hidden skip projections
};

class RelationClassifier {
 public:
  RelationClassifier(nn::ParamSet& ps, int d_z, const DecoderConfig& cfg,
                     int num_relations, nn::Rng& rng);
  // y [n x d_z] -> [num_pairs x |relations|]
  nn::Tape::Id logits(nn::Tape& t, nn::Tape::Id y, const PairSet& pairs) const;

 private:
  // One encoder token stream: x + role, through shared attention weights.
  nn::Parameter* role_src_ = nullptr;
  nn::Parameter* role_dst_ = nullptr;
  nn::Linear wq_, wk_, wv_, wo_;
  nn::LayerNorm ln1_, ln2_;
  nn::Linear ff1_, ff2_;
  nn::Linear head_;
  int d_z_ = 0;
  int heads_ = 0;
};

// Row-wise argmax of a logit matrix.
std::vector<int> argmax_rows(const nn::Mat& logits);

// Rebuilds one decoded KnowledgeGraph per batch entry from predicted node
// labels and per-pair relation predictions. Pairs predicted "none" emit no
// edge; everything else becomes (i, j, relation label).
std::vector<KnowledgeGraph> assemble_graphs(const encoders::GraphBatch& batch,
                                            const std::vector<int>& node_preds,
                                            const PairSet& pairs,
                                            const std::vector<int>& rel_preds,
                                            const Vocabulary& vocab);

}  // namespace semcom::decoders
