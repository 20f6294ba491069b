/**
 * @file baselines.cpp
 */
#include "semcom/baselines/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "semcom/channel/channel.hpp"

namespace semcom::baselines {

HuffmanCode HuffmanCode::build(const std::string& corpus) {
  if (corpus.empty()) throw std::invalid_argument("huffman: empty corpus");
  std::map<unsigned char, long long> freq;
  for (unsigned char c : corpus) ++freq[c];

  HuffmanCode hc;
  if (freq.size() == 1) {
    hc.lengths_[freq.begin()->first] = 1;
  } else {
    // Deterministic tree build: ties broken by node id (leaves carry their
    // symbol value, internal nodes count up from 256).
    struct Item {
      long long weight;
      int id;
      bool operator>(const Item& o) const {
        return weight != o.weight ? weight > o.weight : id > o.id;
      }
    };
    std::vector<int> parent;
    std::vector<int> symbol_node(256, -1);
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    int next_id = 0;
    std::vector<int> ids;  // node id -> parent index vector position
    for (auto& [c, w] : freq) {
      symbol_node[c] = next_id;
      parent.push_back(-1);
      heap.push({w, next_id++});
    }
    const int first_internal = next_id;
    (void)first_internal;
    while (heap.size() > 1) {
      Item a = heap.top();
      heap.pop();
      Item b = heap.top();
      heap.pop();
      parent.push_back(-1);
      parent[a.id] = next_id;
      parent[b.id] = next_id;
      heap.push({a.weight + b.weight, next_id++});
    }
    for (auto& [c, w] : freq) {
      int depth = 0;
      for (int n = symbol_node[c]; parent[n] != -1; n = parent[n]) ++depth;
      hc.lengths_[c] = depth;
    }
  }

  // Canonical assignment: symbols ordered by (length, value); each code is the
  // previous one incremented, left-shifted when the length grows.
  std::vector<std::pair<int, unsigned char>> order;
  for (auto& [c, len] : hc.lengths_) order.emplace_back(len, c);
  std::sort(order.begin(), order.end());
  std::uint64_t code = 0;
  int prev_len = order.front().first;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto [len, c] = order[i];
    if (i > 0) {
      code += 1;
      code <<= (len - prev_len);
    }
    prev_len = len;
    BitString bits(len);
    for (int b = 0; b < len; ++b) bits[b] = (code >> (len - 1 - b)) & 1u;
    hc.codes_[c] = std::move(bits);
  }
  hc.build_decoder();
  return hc;
}

void HuffmanCode::build_decoder() {
  child0_.assign(1, -1);
  child1_.assign(1, -1);
  leaf_.assign(1, -1);
  for (auto& [c, bits] : codes_) {
    int node = 0;
    for (std::uint8_t b : bits) {
      std::vector<int>& child = b ? child1_ : child0_;
      if (child[node] == -1) {
        child[node] = static_cast<int>(child0_.size());
        child0_.push_back(-1);
        child1_.push_back(-1);
        leaf_.push_back(-1);
      }
      node = b ? child1_[node] : child0_[node];
    }
    leaf_[node] = c;
  }
}

bool HuffmanCode::contains(unsigned char c) const { return codes_.count(c) > 0; }

int HuffmanCode::code_length(unsigned char c) const {
  auto it = lengths_.find(c);
  if (it == lengths_.end())
    throw std::invalid_argument("huffman: symbol not in codebook");
  return it->second;
}

BitString HuffmanCode::encode(const std::string& text) const {
  BitString out;
  for (unsigned char c : text) {
    auto it = codes_.find(c);
    if (it == codes_.end())
      throw std::invalid_argument(std::string("huffman: character '") +
                                  static_cast<char>(c) + "' not in codebook");
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

HuffmanCode::LossyDecode HuffmanCode::decode_lossy(const BitString& bits) const {
  LossyDecode out;
  int node = 0;
  int bits_in_flight = 0;
  for (std::uint8_t b : bits) {
    node = b ? child1_[node] : child0_[node];
    ++bits_in_flight;
    if (node == -1)
      throw std::logic_error("huffman: decoder fell off the trie");
    if (leaf_[node] != -1) {
      out.text.push_back(static_cast<char>(leaf_[node]));
      node = 0;
      bits_in_flight = 0;
    }
  }
  out.truncated_bits = bits_in_flight;
  return out;
}

std::string HuffmanCode::decode(const BitString& bits) const {
  LossyDecode d = decode_lossy(bits);
  if (d.truncated_bits != 0)
    throw std::runtime_error("huffman: stream truncated inside a codeword, " +
                             std::to_string(d.truncated_bits) + " bits at position " +
                             std::to_string(bits.size() - d.truncated_bits));
  return d.text;
}

double HuffmanCode::expected_length(const std::string& text) const {
  if (text.empty()) throw std::invalid_argument("huffman: empty text");
  double total = 0.0;
  for (unsigned char c : text) total += code_length(c);
  return total / static_cast<double>(text.size());
}

std::string HuffmanCode::export_codebook() const {
  std::string out;
  for (auto& [c, bits] : codes_) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\\': out += "\\\\"; break;
      case ' ': out += "\\s"; break;
      default: out += static_cast<char>(c);
    }
    out += '\t';
    for (std::uint8_t b : bits) out += b ? '1' : '0';
    out += '\n';
  }
  return out;
}

SixBitCode::SixBitCode() {
  for (char c = 'A'; c <= 'Z'; ++c) alphabet_ += c;
  for (char c = 'a'; c <= 'z'; ++c) alphabet_ += c;
  for (char c = '0'; c <= '6'; ++c) alphabet_ += c;
  alphabet_ += ' ';
  alphabet_ += '|';
  alphabet_ += '\n';
  alphabet_ += '_';
  for (int i = 0; i < 256; ++i) index_[i] = -1;
  for (std::size_t i = 0; i < alphabet_.size(); ++i)
    index_[static_cast<unsigned char>(alphabet_[i])] = static_cast<int>(i);
}

BitString SixBitCode::encode(const std::string& text, int* substitutions) const {
  if (substitutions) *substitutions = 0;
  BitString out;
  out.reserve(text.size() * kBitsPerChar);
  for (unsigned char c : text) {
    int idx = index_[c];
    if (idx < 0) {
      idx = 63;  // reserved substitute point
      if (substitutions) ++*substitutions;
    }
    for (int b = kBitsPerChar - 1; b >= 0; --b) out.push_back((idx >> b) & 1);
  }
  return out;
}

std::string SixBitCode::decode(const BitString& bits) const {
  std::string out;
  const std::size_t chars = bits.size() / kBitsPerChar;
  out.reserve(chars);
  for (std::size_t i = 0; i < chars; ++i) {
    int idx = 0;
    for (int b = 0; b < kBitsPerChar; ++b)
      idx = (idx << 1) | bits[i * kBitsPerChar + b];
    out += idx < static_cast<int>(alphabet_.size()) ? alphabet_[idx] : '?';
  }
  return out;
}

Qam64::Qam64() : points_(64, 2) {
  const double scale = 1.0 / std::sqrt(42.0);  // unit mean power for 8 levels
  for (int i = 0; i < 8; ++i) {
    levels_[i] = (2 * i - 7) * scale;
    level_to_gray_[i] = i ^ (i >> 1);
    gray_to_level_[level_to_gray_[i]] = i;
  }
  for (int label = 0; label < 64; ++label) {
    const int gi = label >> 3, gq = label & 7;
    points_.at(label, 0) = levels_[gray_to_level_[gi]];
    points_.at(label, 1) = levels_[gray_to_level_[gq]];
  }
}

nn::Mat Qam64::modulate(const BitString& bits) const {
  BitString padded = bits;
  while (padded.size() % kBitsPerSymbol != 0) padded.push_back(0);
  const int n = static_cast<int>(padded.size() / kBitsPerSymbol);
  nn::Mat out(n, 2);
  for (int s = 0; s < n; ++s) {
    int label = 0;
    for (int b = 0; b < kBitsPerSymbol; ++b)
      label = (label << 1) | padded[s * kBitsPerSymbol + b];
    out.at(s, 0) = points_.at(label, 0);
    out.at(s, 1) = points_.at(label, 1);
  }
  return out;
}

BitString Qam64::demodulate(const nn::Mat& received) const {
  if (received.cols != 2)
    throw std::invalid_argument("qam64: expected [n x 2] I/Q matrix");
  BitString out;
  out.reserve(static_cast<std::size_t>(received.rows) * kBitsPerSymbol);
  const double scale = std::sqrt(42.0);
  for (int r = 0; r < received.rows; ++r) {
    for (int axis = 0; axis < 2; ++axis) {
      // Nearest level on a uniform grid is plain quantization.
      int li = static_cast<int>(std::lround((received.at(r, axis) * scale + 7.0) / 2.0));
      li = std::clamp(li, 0, 7);
      const int gray = level_to_gray_[li];
      for (int b = 2; b >= 0; --b) out.push_back((gray >> b) & 1);
    }
  }
  return out;
}

std::string build_codebook_corpus(const std::vector<const KnowledgeGraph*>& graphs) {
  std::string corpus;
  for (const auto* g : graphs) corpus += serialize_for_baseline(*g);
  return corpus;
}

BaselineRun classical_pipeline_run(const KnowledgeGraph& g, SourceCoder coder,
                                   const HuffmanCode* code, double snr_db,
                                   bool noiseless, std::uint64_t seed) {
  static const SixBitCode sixbit;
  static const Qam64 qam;

  const std::string text = serialize_for_baseline(g);
  BaselineRun run;
  BitString bits;
  if (coder == SourceCoder::huffman) {
    if (!code) throw std::invalid_argument("baseline: huffman coder needs a codebook");
    bits = code->encode(text);
  } else {
    bits = sixbit.encode(text, &run.substitutions);
  }
  run.coded_bits = bits.size();

  nn::Mat symbols = qam.modulate(bits);
  run.transmitted_symbols = static_cast<std::size_t>(symbols.rows);
  if (!noiseless && symbols.rows > 0) {
    nn::Rng rng(nn::mix_seed(seed, channel::graph_noise_key(g)));
    nn::Mat noise = channel::sample_awgn(symbols.rows, 2, snr_db, rng);
    for (std::size_t i = 0; i < symbols.size(); ++i) symbols.a[i] += noise.a[i];
  }

  BitString rbits = qam.demodulate(symbols);
  rbits.resize(bits.size());  // receiver knows the payload length; drop padding

  std::string rtext;
  if (coder == SourceCoder::huffman) {
    HuffmanCode::LossyDecode d = code->decode_lossy(rbits);
    rtext = std::move(d.text);
    run.truncated_bits = d.truncated_bits;
  } else {
    rtext = sixbit.decode(rbits);
  }
  ParsedTriples parsed = parse_serialized_triples(rtext);
  run.triples = std::move(parsed.triples);
  run.dropped_lines = parsed.dropped_lines;
  return run;
}

}  // namespace semcom::baselines
