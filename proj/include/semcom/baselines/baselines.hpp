/**
 * @file baselines.hpp
 * @brief Classical transmission pipeline: source coding of serialized triples
 *        (canonical Huffman or fixed 6-bit), 64-QAM over AWGN, hard-decision
 *        demodulation, and parsing the text back into triples.
 *
 * The Huffman codebook is built once on the training-split serialization and
 * reused at test time (shared codebook between transmitter and receiver).
 * Corrupted streams never raise: an incomplete tail is dropped with its bit
 * position reported, and lines that no longer parse as "s | r | o" are
 * discarded and counted.
 */
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semcom/kg/graph.hpp"
#include "semcom/nn/mat.hpp"

namespace semcom::baselines {

// One bit per element; kept unpacked because clarity beats density here.
using BitString = std::vector<std::uint8_t>;

class HuffmanCode {
 public:
  // Canonical code over the characters observed in `corpus`. Ties in the tree
  // merge deterministically; a single-symbol corpus gets a 1-bit code.
  static HuffmanCode build(const std::string& corpus);

  BitString encode(const std::string& text) const;  // unknown char throws

  // Strict decode: throws on a tail that ends inside a codeword.
  std::string decode(const BitString& bits) const;

  struct LossyDecode {
    std::string text;
    int truncated_bits = 0;  // bits left undecoded at the tail
  };
  LossyDecode decode_lossy(const BitString& bits) const;

  bool contains(unsigned char c) const;
  int code_length(unsigned char c) const;
  std::size_t alphabet_size() const { return lengths_.size(); }

  // Mean codeword length under `text`'s empirical distribution.
  double expected_length(const std::string& text) const;

  // "char<TAB>bitstring" lines, one per symbol, canonical order. Control
  // characters are escaped (\n, \t, \\; space prints as \s).
  std::string export_codebook() const;

 private:
  std::map<unsigned char, int> lengths_;
  std::map<unsigned char, BitString> codes_;
  // Flattened binary trie for decoding: child[b][node], -1 = absent;
  // leaf_[node] holds the decoded char or -1.
  std::vector<int> child0_, child1_, leaf_;
  void build_decoder();
};

// Fixed 6-bit character code over a 64-point alphabet: letters, digits 0-6,
// space, '|', newline and '_'; the final point is a reserved substitute that
// out-of-alphabet characters map to (counted) and that decodes to '?'.
class SixBitCode {
 public:
  static constexpr int kBitsPerChar = 6;

  SixBitCode();
  BitString encode(const std::string& text, int* substitutions = nullptr) const;
  std::string decode(const BitString& bits) const;  // tail < 6 bits dropped

  const std::string& alphabet() const { return alphabet_; }

 private:
  std::string alphabet_;  // 63 characters; index 63 is the substitute point
  int index_[256];
};

// 64-QAM: an 8x8 grid with per-axis binary-reflected Gray labeling and unit
// average symbol power. Bits map 3+3 to the in-phase and quadrature axes.
class Qam64 {
 public:
  Qam64();

  // Pads with zero bits to a multiple of 6; returns [symbols x 2] (I, Q).
  nn::Mat modulate(const BitString& bits) const;

  // Hard nearest-neighbor decision, which on a square grid is independent
  // per-axis quantization. Returns 6 bits per symbol.
  BitString demodulate(const nn::Mat& received) const;

  // The 64 constellation points as [64 x 2], index = 6-bit label.
  const nn::Mat& constellation() const { return points_; }

  static constexpr int kBitsPerSymbol = 6;

 private:
  nn::Mat points_;
  double levels_[8];       // per-axis amplitudes, Gray-indexed lookup below
  int gray_to_level_[8];   // 3-bit Gray label -> level index 0..7
  int level_to_gray_[8];
};

enum class SourceCoder { huffman, sixbit };

struct BaselineRun {
  std::vector<Triple> triples;       // parsed receiver-side triples
  std::size_t coded_bits = 0;        // source-coded length before QAM padding
  std::size_t transmitted_symbols = 0;
  int dropped_lines = 0;
  int substitutions = 0;             // sixbit encode substitutions
  int truncated_bits = 0;            // huffman tail loss after corruption
};

// serialize -> source-code -> 64-QAM -> AWGN -> demodulate -> source-decode
// -> parse. `code` is required for the huffman coder and ignored otherwise.
// Noise is seeded per (seed, graph key); snr_db is ignored when noiseless.
BaselineRun classical_pipeline_run(const KnowledgeGraph& g, SourceCoder coder,
                                   const HuffmanCode* code, double snr_db,
                                   bool noiseless, std::uint64_t seed);

// Training-split corpus for the shared Huffman codebook.
std::string build_codebook_corpus(const std::vector<const KnowledgeGraph*>& graphs);

}  // namespace semcom::baselines
