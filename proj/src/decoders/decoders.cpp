/**
 * @file decoders.cpp
 */
#include "semcom/decoders/decoders.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace semcom::decoders {

using nn::Tape;

PairSet make_pairs(const encoders::GraphBatch& batch, const Vocabulary* vocab) {
  PairSet p;
  for (int gi = 0; gi < batch.num_graphs(); ++gi) {
    const KnowledgeGraph& g = *batch.graphs[gi];
    const int base = batch.node_offset[gi];

    std::map<std::pair<int, int>, int> edge_rel;
    if (vocab) {
      for (const Edge& e : g.edges)
        edge_rel.emplace(std::make_pair(e.src, e.dst), vocab->relation_id(e.relation));
    }
    for (int i = 0; i < g.num_nodes(); ++i) {
      for (int j = 0; j < g.num_nodes(); ++j) {
        if (i == j) continue;  // self-relations are out of scope
        p.src.push_back(base + i);
        p.dst.push_back(base + j);
        p.pair_graph.push_back(gi);
        if (vocab) {
          auto it = edge_rel.find({i, j});
          p.target_relation.push_back(it == edge_rel.end() ? 0 : it->second);
        }
      }
    }
  }
  return p;
}

std::vector<int> node_targets(const encoders::GraphBatch& batch,
                              const Vocabulary& vocab) {
  std::vector<int> t;
  t.reserve(batch.total_nodes());
  for (const auto* g : batch.graphs)
    for (const auto& label : g->nodes) t.push_back(vocab.entity_id(label));
  return t;
}

NodeClassifier::NodeClassifier(nn::ParamSet& ps, int d_z, int hidden,
                               int num_entities, nn::Rng& rng) {
  l1_.init(ps, "dec.node.l1", d_z, hidden, rng);
  l2_.init(ps, "dec.node.l2", hidden, hidden, rng);
  skip1_.init(ps, "dec.node.skip1", d_z, hidden, rng);
  skip2_.init(ps, "dec.node.skip2", d_z, hidden, rng);
  out_.init(ps, "dec.node.out", hidden, num_entities, rng);
}

Tape::Id NodeClassifier::logits(Tape& t, Tape::Id y) const {
  Tape::Id h1 = t.relu(t.add(l1_.forward(t, y), skip1_.forward(t, y)));
  Tape::Id h2 = t.relu(t.add(l2_.forward(t, h1), skip2_.forward(t, y)));
  return out_.forward(t, h2);
}

RelationClassifier::RelationClassifier(nn::ParamSet& ps, int d_z,
                                       const DecoderConfig& cfg,
                                       int num_relations, nn::Rng& rng)
    : d_z_(d_z), heads_(cfg.rel_heads) {
  if (heads_ < 1 || d_z % heads_ != 0)
    throw std::invalid_argument("relation classifier: head count must divide d_z");
  role_src_ = &ps.add("dec.rel.role_src", 1, d_z);
  role_dst_ = &ps.add("dec.rel.role_dst", 1, d_z);
  nn::glorot_init(*role_src_, rng);
  nn::glorot_init(*role_dst_, rng);
  wq_.init(ps, "dec.rel.wq", d_z, d_z, rng);
  wk_.init(ps, "dec.rel.wk", d_z, d_z, rng);
  wv_.init(ps, "dec.rel.wv", d_z, d_z, rng);
  wo_.init(ps, "dec.rel.wo", d_z, d_z, rng);
  ln1_.init(ps, "dec.rel.ln1", d_z);
  ln2_.init(ps, "dec.rel.ln2", d_z);
  ff1_.init(ps, "dec.rel.ff1", d_z, cfg.rel_ff_hidden, rng);
  ff2_.init(ps, "dec.rel.ff2", cfg.rel_ff_hidden, d_z, rng);
  head_.init(ps, "dec.rel.head", 2 * d_z, num_relations, rng);
}

Tape::Id RelationClassifier::logits(Tape& t, Tape::Id y,
                                    const PairSet& pairs) const {
  if (pairs.num_pairs() == 0)
    throw std::invalid_argument("relation classifier: empty pair set");
  // Tokens with role encodings; [P x d_z] each.
  Tape::Id xs = t.add_rowvec(t.gather_rows(y, pairs.src), t.param(*role_src_));
  Tape::Id xt = t.add_rowvec(t.gather_rows(y, pairs.dst), t.param(*role_dst_));

  Tape::Id qs = wq_.forward(t, xs), ks = wk_.forward(t, xs), vs = wv_.forward(t, xs);
  Tape::Id qt = wq_.forward(t, xt), kt = wk_.forward(t, xt), vt = wv_.forward(t, xt);

  const int dh = d_z_ / heads_;
  const double inv_sqrt_dh = 1.0 / std::sqrt(static_cast<double>(dh));
  Tape::Id attn_s = 0, attn_t = 0;
  for (int h = 0; h < heads_; ++h) {
    const int c0 = h * dh, c1 = (h + 1) * dh;
    Tape::Id qsh = t.slice_cols(qs, c0, c1), ksh = t.slice_cols(ks, c0, c1);
    Tape::Id vsh = t.slice_cols(vs, c0, c1);
    Tape::Id qth = t.slice_cols(qt, c0, c1), kth = t.slice_cols(kt, c0, c1);
    Tape::Id vth = t.slice_cols(vt, c0, c1);

    // Each token attends over the 2-token sequence {source, target}.
    Tape::Id a_s = t.softmax_rows(t.scale(
        t.concat_cols(t.rowwise_dot(qsh, ksh), t.rowwise_dot(qsh, kth)),
        inv_sqrt_dh));
    Tape::Id a_t = t.softmax_rows(t.scale(
        t.concat_cols(t.rowwise_dot(qth, ksh), t.rowwise_dot(qth, kth)),
        inv_sqrt_dh));
    Tape::Id o_s = t.add(t.mul_colvec(vsh, t.slice_cols(a_s, 0, 1)),
                         t.mul_colvec(vth, t.slice_cols(a_s, 1, 2)));
    Tape::Id o_t = t.add(t.mul_colvec(vsh, t.slice_cols(a_t, 0, 1)),
                         t.mul_colvec(vth, t.slice_cols(a_t, 1, 2)));
    attn_s = h == 0 ? o_s : t.concat_cols(attn_s, o_s);
    attn_t = h == 0 ? o_t : t.concat_cols(attn_t, o_t);
  }
  Tape::Id us = ln1_.forward(t, t.add(xs, wo_.forward(t, attn_s)));
  Tape::Id ut = ln1_.forward(t, t.add(xt, wo_.forward(t, attn_t)));
  Tape::Id zs = ln2_.forward(t, t.add(us, ff2_.forward(t, t.relu(ff1_.forward(t, us)))));
  Tape::Id zt = ln2_.forward(t, t.add(ut, ff2_.forward(t, t.relu(ff1_.forward(t, ut)))));
  return head_.forward(t, t.concat_cols(zs, zt));
}

std::vector<int> argmax_rows(const nn::Mat& logits) {
  std::vector<int> out(logits.rows);
  for (int r = 0; r < logits.rows; ++r) {
    int best = 0;
    for (int c = 1; c < logits.cols; ++c)
      if (logits.at(r, c) > logits.at(r, best)) best = c;
    out[r] = best;
  }
  return out;
}

std::vector<KnowledgeGraph> assemble_graphs(const encoders::GraphBatch& batch,
                                            const std::vector<int>& node_preds,
                                            const PairSet& pairs,
                                            const std::vector<int>& rel_preds,
                                            const Vocabulary& vocab) {
  if (static_cast<int>(node_preds.size()) != batch.total_nodes())
    throw std::invalid_argument("assemble_graphs: node prediction count mismatch");
  if (rel_preds.size() != pairs.src.size())
    throw std::invalid_argument("assemble_graphs: pair prediction count mismatch");

  std::vector<KnowledgeGraph> out(batch.num_graphs());
  for (int gi = 0; gi < batch.num_graphs(); ++gi) {
    out[gi].source_id = batch.graphs[gi]->source_id;
    for (int r = batch.node_offset[gi]; r < batch.node_offset[gi + 1]; ++r)
      out[gi].nodes.push_back(vocab.entity_label(node_preds[r]));
  }
  for (int p = 0; p < pairs.num_pairs(); ++p) {
    if (rel_preds[p] == 0) continue;  // "none"
    const int gi = pairs.pair_graph[p];
    const int base = batch.node_offset[gi];
    out[gi].edges.push_back({pairs.src[p] - base, pairs.dst[p] - base,
                             vocab.relation_label(rel_preds[p])});
  }
  return out;
}

}  // namespace semcom::decoders
