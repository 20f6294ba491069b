/**
 * @file metrics.cpp
 */
#include "semcom/eval/metrics.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace semcom::eval {

F1Report triple_f1(const std::vector<Triple>& predicted,
                   const std::vector<Triple>& reference) {
  F1Report r;
  r.predicted = static_cast<int>(predicted.size());
  r.reference = static_cast<int>(reference.size());
  std::map<Triple, int> ref_counts;
  for (const Triple& t : reference) ++ref_counts[t];
  for (const Triple& t : predicted) {
    auto it = ref_counts.find(t);
    if (it != ref_counts.end() && it->second > 0) {
      --it->second;
      ++r.matched;
    }
  }
  if (r.predicted == 0 && r.reference == 0) {
    r.precision = r.recall = r.f1 = 1.0;
    return r;
  }
  r.precision = r.predicted > 0 ? static_cast<double>(r.matched) / r.predicted : 0.0;
  r.recall = r.reference > 0 ? static_cast<double>(r.matched) / r.reference : 0.0;
  const double denom = r.precision + r.recall;
  r.f1 = denom > 0.0 ? 2.0 * r.precision * r.recall / denom : 0.0;
  return r;
}

F1Report triple_f1(const KnowledgeGraph& predicted, const KnowledgeGraph& reference) {
  return triple_f1(graph_to_triples(predicted), graph_to_triples(reference));
}

F1Summary summarize_f1(const std::vector<F1Report>& reports) {
  F1Summary s;
  s.graphs = static_cast<int>(reports.size());
  if (reports.empty()) return s;
  long matched = 0, predicted = 0, reference = 0;
  for (const F1Report& r : reports) {
    s.macro_f1 += r.f1;
    s.macro_precision += r.precision;
    s.macro_recall += r.recall;
    matched += r.matched;
    predicted += r.predicted;
    reference += r.reference;
  }
  s.macro_f1 /= s.graphs;
  s.macro_precision /= s.graphs;
  s.macro_recall /= s.graphs;
  const double p = predicted > 0 ? static_cast<double>(matched) / predicted : 0.0;
  const double q = reference > 0 ? static_cast<double>(matched) / reference : 0.0;
  s.micro_f1 = (p + q) > 0.0 ? 2.0 * p * q / (p + q) : 0.0;
  if (predicted == 0 && reference == 0) s.micro_f1 = 1.0;
  return s;
}

double node_accuracy(const std::vector<int>& predicted,
                     const std::vector<int>& reference) {
  if (predicted.size() != reference.size())
    throw std::invalid_argument("node_accuracy: size mismatch");
  if (predicted.empty()) throw std::invalid_argument("node_accuracy: empty input");
  int ok = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == reference[i]) ++ok;
  return static_cast<double>(ok) / static_cast<double>(predicted.size());
}

double node_accuracy_labels(const std::vector<std::string>& predicted,
                            const std::vector<std::string>& reference) {
  if (predicted.size() != reference.size())
    throw std::invalid_argument("node_accuracy: size mismatch");
  if (predicted.empty()) throw std::invalid_argument("node_accuracy: empty input");
  int ok = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i)
    if (predicted[i] == reference[i]) ++ok;
  return static_cast<double>(ok) / static_cast<double>(predicted.size());
}

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::semantic_gnn: return "semantic_gnn";
    case Scheme::semantic_ffn: return "semantic_ffn";
    case Scheme::huffman: return "huffman";
    case Scheme::sixbit: return "sixbit";
  }
  throw std::invalid_argument("scheme_name: bad enum");
}

BitAccount semantic_bits(Scheme scheme, int nodes, int k, int bits_per_symbol) {
  if (scheme != Scheme::semantic_gnn && scheme != Scheme::semantic_ffn)
    throw std::invalid_argument("semantic_bits: classical scheme given");
  if (nodes < 1 || k < 1 || bits_per_symbol < 1)
    throw std::invalid_argument("semantic_bits: bad arguments");
  return {scheme, static_cast<double>(nodes) * k * bits_per_symbol, nodes};
}

BitAccount coded_bits(Scheme scheme, int nodes, std::size_t bit_length) {
  if (scheme != Scheme::huffman && scheme != Scheme::sixbit)
    throw std::invalid_argument("coded_bits: semantic scheme given");
  return {scheme, static_cast<double>(bit_length), nodes};
}

}  // namespace semcom::eval
