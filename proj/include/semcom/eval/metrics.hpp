/**
 * @file metrics.hpp
 * @brief Reconstruction metrics: exact-match triple F1, node accuracy, and
 *        transmitted-bits accounting.
 *
 * A predicted triple counts as correct only when subject, relation and object
 * all match a reference triple exactly, with one-to-one matching (multiset
 * intersection; since matching is exact-string, greedy matching is optimal).
 */
#pragma once

#include <string>
#include <vector>

#include "semcom/kg/graph.hpp"

namespace semcom::eval {

struct F1Report {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int matched = 0;
  int predicted = 0;
  int reference = 0;
};

// Exact-match triple F1. Empty vs empty scores 1; empty vs non-empty scores 0.
F1Report triple_f1(const KnowledgeGraph& predicted, const KnowledgeGraph& reference);
F1Report triple_f1(const std::vector<Triple>& predicted,
                   const std::vector<Triple>& reference);

// Mean per-graph F1 (macro) plus pooled counts (micro).
struct F1Summary {
  double macro_f1 = 0.0;
  double micro_f1 = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  int graphs = 0;
};
F1Summary summarize_f1(const std::vector<F1Report>& reports);

double node_accuracy(const std::vector<int>& predicted,
                     const std::vector<int>& reference);
double node_accuracy_labels(const std::vector<std::string>& predicted,
                            const std::vector<std::string>& reference);

enum class Scheme { semantic_gnn, semantic_ffn, huffman, sixbit };
std::string scheme_name(Scheme s);

struct BitAccount {
  Scheme scheme = Scheme::semantic_gnn;
  double bits_per_graph = 0.0;
  int nodes = 0;
};

// Semantic schemes transmit k complex symbols per node; the bit equivalence
// is bits_per_symbol per symbol (default 6, matching 64-QAM baselines).
BitAccount semantic_bits(Scheme scheme, int nodes, int k, int bits_per_symbol);

// Classical schemes transmit an actual coded bitstring.
BitAccount coded_bits(Scheme scheme, int nodes, std::size_t bit_length);

}  // namespace semcom::eval
