#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "semcom/baselines/baselines.hpp"
#include "semcom/channel/channel.hpp"

using namespace semcom;
using namespace semcom::baselines;

namespace {

double entropy_bits(const std::string& text) {
  std::map<char, double> counts;
  for (char c : text) counts[c] += 1.0;
  double h = 0.0;
  for (const auto& [c, n] : counts) {
    const double p = n / static_cast<double>(text.size());
    h -= p * std::log2(p);
  }
  return h;
}

int popcount_diff(int a, int b) { return __builtin_popcount(a ^ b); }

}  // namespace

// ---------------------------------------------------------------------------
// Huffman coding. Expected codeword lengths below were computed independently
// with a reference heap-based construction.
// ---------------------------------------------------------------------------

TEST_CASE("huffman code matches reference lengths on small corpora") {
  // "abca": frequencies a=2, b=1, c=1 -> lengths a:1, b:2, c:2, total 6 bits.
  HuffmanCode abc = HuffmanCode::build("abca");
  CHECK(abc.alphabet_size() == 3);
  CHECK(abc.code_length('a') == 1);
  CHECK(abc.code_length('b') == 2);
  CHECK(abc.code_length('c') == 2);
  CHECK(abc.encode("abca").size() == 6);

  // Uniform four symbols -> all lengths 2, total 8 bits.
  HuffmanCode uni = HuffmanCode::build("abcd");
  for (char c : std::string("abcd")) CHECK(uni.code_length(c) == 2);
  CHECK(uni.encode("abcd").size() == 8);

  // Skewed 8a 4b 2c 1d 1e -> lengths 1,2,3,4,4; 30 bits total; mean 1.875
  // equals the source entropy exactly (dyadic distribution).
  const std::string skewed = "aaaaaaaabbbbccde";
  HuffmanCode sk = HuffmanCode::build(skewed);
  CHECK(sk.code_length('a') == 1);
  CHECK(sk.code_length('b') == 2);
  CHECK(sk.code_length('c') == 3);
  CHECK(sk.code_length('d') == 4);
  CHECK(sk.code_length('e') == 4);
  CHECK(sk.encode(skewed).size() == 30);
  CHECK(sk.expected_length(skewed) == doctest::Approx(1.875).epsilon(1e-12));
  CHECK(entropy_bits(skewed) == doctest::Approx(1.875).epsilon(1e-12));

  // Pangram-like sentence: 159 bits total, mean 4.542857 vs entropy 4.514718.
  const std::string pan = "sphinx of black quartz judge my vow";
  HuffmanCode pc = HuffmanCode::build(pan);
  CHECK(pc.encode(pan).size() == 159);
  CHECK(pc.expected_length(pan) ==
        doctest::Approx(159.0 / 35.0).epsilon(1e-12));
}

TEST_CASE("huffman code is prefix-free and round-trips") {
  const std::string corpus =
      "Alan_Bean | birthPlace | Wheeler\nApollo_12 | operator | NASA\n";
  HuffmanCode code = HuffmanCode::build(corpus);

  // No codeword is a prefix of another.
  std::vector<BitString> words;
  for (int c = 0; c < 256; ++c)
    if (code.contains(static_cast<unsigned char>(c)))
      words.push_back(code.encode(std::string(1, static_cast<char>(c))));
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < words.size(); ++j) {
      if (i == j) continue;
      if (words[i].size() > words[j].size()) continue;
      bool is_prefix = true;
      for (std::size_t b = 0; b < words[i].size(); ++b)
        is_prefix = is_prefix && words[i][b] == words[j][b];
      CHECK_FALSE(is_prefix);
    }

  CHECK(code.decode(code.encode(corpus)) == corpus);
  CHECK_THROWS(code.encode("corpus with unseen char: #"));

  // Kraft equality for a complete code: sum 2^-len == 1.
  double kraft = 0.0;
  for (int c = 0; c < 256; ++c)
    if (code.contains(static_cast<unsigned char>(c)))
      kraft += std::pow(2.0, -code.code_length(static_cast<unsigned char>(c)));
  CHECK(kraft == doctest::Approx(1.0).epsilon(1e-12));

  // Shannon bounds: H <= expected length < H + 1.
  const double h = entropy_bits(corpus);
  const double l = code.expected_length(corpus);
  CHECK(l >= h - 1e-9);
  CHECK(l < h + 1.0);
}

TEST_CASE("huffman single-symbol corpus still codes at one bit") {
  HuffmanCode one = HuffmanCode::build("aaaa");
  CHECK(one.alphabet_size() == 1);
  CHECK(one.code_length('a') == 1);
  CHECK(one.encode("aaaa").size() == 4);
  CHECK(one.decode(one.encode("aaa")) == "aaa");
}

TEST_CASE("huffman decode handles truncated tails") {
  HuffmanCode code = HuffmanCode::build("aaaaaaaabbbbccde");  // d has length 4
  BitString bits = code.encode("ad");
  REQUIRE(bits.size() == 5);
  bits.pop_back();  // cut into the middle of 'd'
  CHECK_THROWS(code.decode(bits));
  const auto lossy = code.decode_lossy(bits);
  CHECK(lossy.text == "a");
  CHECK(lossy.truncated_bits == 3);
}

TEST_CASE("huffman codebook export is canonical and stable") {
  HuffmanCode code = HuffmanCode::build("hello world\nhello | world\n");
  const std::string book = code.export_codebook();
  CHECK(book == HuffmanCode::build("hello world\nhello | world\n").export_codebook());
  CHECK(book.find("\\s") != std::string::npos);  // escaped space
  CHECK(book.find("\\n") != std::string::npos);  // escaped newline
  // One line per symbol.
  const std::size_t lines = std::count(book.begin(), book.end(), '\n');
  CHECK(lines == code.alphabet_size());
}

// ---------------------------------------------------------------------------
// Fixed 6-bit code.
// ---------------------------------------------------------------------------

TEST_CASE("sixbit code is fixed-rate and round-trips its alphabet") {
  SixBitCode code;
  CHECK(code.alphabet().size() == 63);

  const std::string text = "Alan_Bean | birthPlace | Wheeler\n20 041";
  int subs = -1;
  const BitString bits = code.encode(text, &subs);
  CHECK(subs == 0);
  CHECK(bits.size() == text.size() * SixBitCode::kBitsPerChar);
  CHECK(code.decode(bits) == text);

  // Every alphabet character survives a round trip.
  const std::string all = code.alphabet();
  CHECK(code.decode(code.encode(all)) == all);
}

TEST_CASE("sixbit code substitutes out-of-alphabet characters") {
  SixBitCode code;
  int subs = 0;
  const BitString bits = code.encode("a#b@c", &subs);
  CHECK(subs == 2);
  CHECK(code.decode(bits) == "a?b?c");

  // Digits 7-9 are outside the 64-point alphabet by design.
  int subs2 = 0;
  code.encode("789", &subs2);
  CHECK(subs2 == 3);
  int subs3 = 0;
  code.encode("0123456", &subs3);
  CHECK(subs3 == 0);

  // A trailing partial symbol is dropped on decode.
  BitString ragged = code.encode("ab");
  ragged.resize(ragged.size() - 3);
  CHECK(code.decode(ragged) == "a");
}

// ---------------------------------------------------------------------------
// 64-QAM.
// ---------------------------------------------------------------------------

TEST_CASE("qam64 round-trips all 64 labels and has unit average power") {
  Qam64 qam;
  const nn::Mat& pts = qam.constellation();
  REQUIRE(pts.rows == 64);
  REQUIRE(pts.cols == 2);

  // Unit average power over the uniform constellation.
  double power = 0.0;
  for (int i = 0; i < 64; ++i)
    power += pts(i, 0) * pts(i, 0) + pts(i, 1) * pts(i, 1);
  CHECK(power / 64.0 == doctest::Approx(1.0).epsilon(1e-9));

  // Distinct points.
  std::set<std::pair<double, double>> uniq;
  for (int i = 0; i < 64; ++i) uniq.insert({pts(i, 0), pts(i, 1)});
  CHECK(uniq.size() == 64);

  // Exhaustive modulate/demodulate round trip over every 6-bit label.
  BitString bits;
  for (int label = 0; label < 64; ++label)
    for (int b = 5; b >= 0; --b) bits.push_back((label >> b) & 1);
  const nn::Mat symbols = qam.modulate(bits);
  REQUIRE(symbols.rows == 64);
  const BitString back = qam.demodulate(symbols);
  REQUIRE(back.size() == bits.size());
  CHECK(back == bits);
}

TEST_CASE("qam64 gray labeling flips one bit between grid neighbours") {
  Qam64 qam;
  const nn::Mat& pts = qam.constellation();
  // Group labels per axis value; neighbours along an axis differ in one bit.
  std::map<double, std::map<double, int>> grid;  // I -> Q -> label
  for (int label = 0; label < 64; ++label)
    grid[pts(label, 0)][pts(label, 1)] = label;
  REQUIRE(grid.size() == 8);

  std::vector<double> ivals;
  for (const auto& [iv, col] : grid) {
    REQUIRE(col.size() == 8);
    ivals.push_back(iv);
    // Vertical neighbours.
    std::vector<int> labels;
    for (const auto& [qv, label] : col) labels.push_back(label);
    for (std::size_t r = 0; r + 1 < labels.size(); ++r)
      CHECK(popcount_diff(labels[r], labels[r + 1]) == 1);
  }
  // Horizontal neighbours at equal Q.
  for (std::size_t c = 0; c + 1 < ivals.size(); ++c) {
    const auto& a = grid[ivals[c]];
    const auto& b = grid[ivals[c + 1]];
    for (const auto& [qv, label] : a)
      CHECK(popcount_diff(label, b.at(qv)) == 1);
  }
}

TEST_CASE("qam64 pads ragged bit streams with zeros") {
  Qam64 qam;
  BitString bits = {1, 0, 1};  // half a symbol
  const nn::Mat sym = qam.modulate(bits);
  REQUIRE(sym.rows == 1);
  BitString back = qam.demodulate(sym);
  REQUIRE(back.size() == 6);
  CHECK(back[0] == 1);
  CHECK(back[1] == 0);
  CHECK(back[2] == 1);
  CHECK(back[3] == 0);
  CHECK(back[4] == 0);
  CHECK(back[5] == 0);
}

// Analytic 64-QAM symbol error rate over AWGN:
//   P_axis = 2 (1 - 1/8) Q(sqrt(3 gamma / 63)), SER = 1 - (1 - P_axis)^2.
// Reference values (independently verified by Monte Carlo):
//   SER(0 dB) = 0.923742, SER(14 dB) = 0.422147, SER(22 dB) = 0.010491.
TEST_CASE("qam64 symbol error rate tracks the analytic curve") {
  Qam64 qam;
  const int n_symbols = 60000;
  nn::Rng bit_rng(123);
  BitString bits(n_symbols * 6);
  for (auto& b : bits) b = static_cast<std::uint8_t>(bit_rng.below(2));
  const nn::Mat sent = qam.modulate(bits);

  auto measure = [&](double snr_db, std::uint64_t seed) {
    nn::Rng noise_rng(seed);
    nn::Mat received =
        channel::sample_awgn(sent.rows, 2, snr_db, noise_rng);
    for (int i = 0; i < sent.rows; ++i) {
      received(i, 0) += sent(i, 0);
      received(i, 1) += sent(i, 1);
    }
    const BitString back = qam.demodulate(received);
    int errors = 0;
    for (int s = 0; s < n_symbols; ++s) {
      bool wrong = false;
      for (int b = 0; b < 6; ++b)
        wrong = wrong || back[s * 6 + b] != bits[s * 6 + b];
      errors += wrong ? 1 : 0;
    }
    return static_cast<double>(errors) / n_symbols;
  };

  CHECK(measure(0.0, 7) == doctest::Approx(0.923742).epsilon(0.02));
  CHECK(measure(14.0, 8) == doctest::Approx(0.422147).epsilon(0.02));
  CHECK(measure(22.0, 9) == doctest::Approx(0.010491).epsilon(0.15));
}

// ---------------------------------------------------------------------------
// End-to-end classical pipeline.
// ---------------------------------------------------------------------------

TEST_CASE("noiseless classical pipeline reconstructs triples exactly") {
  KnowledgeGraph g = graph_from_triples(
      {{"Alan_Bean", "birthPlace", "Wheeler"},
       {"Alan_Bean", "spaceMission", "Apollo_12"}},
      "t");
  const std::string corpus = build_codebook_corpus({&g});
  CHECK(corpus == serialize_for_baseline(g));
  HuffmanCode code = HuffmanCode::build(corpus);

  const BaselineRun hr = classical_pipeline_run(
      g, SourceCoder::huffman, &code, /*snr_db=*/0.0, /*noiseless=*/true, 1);
  CHECK(hr.triples == graph_to_triples(g));
  CHECK(hr.dropped_lines == 0);
  CHECK(hr.truncated_bits == 0);
  CHECK(hr.coded_bits == code.encode(corpus).size());
  CHECK(hr.transmitted_symbols == (hr.coded_bits + 5) / 6);

  const BaselineRun sr = classical_pipeline_run(
      g, SourceCoder::sixbit, nullptr, 0.0, true, 1);
  CHECK(sr.triples == graph_to_triples(g));
  CHECK(sr.substitutions == 0);
  CHECK(sr.coded_bits == corpus.size() * 6);
}

TEST_CASE("classical pipeline degrades monotonically-ish with noise") {
  KnowledgeGraph g = graph_from_triples(
      {{"Alan_Bean", "birthPlace", "Wheeler"},
       {"Alan_Bean", "spaceMission", "Apollo_12"},
       {"Apollo_12", "operator", "NASA"}},
      "t");
  HuffmanCode code = HuffmanCode::build(build_codebook_corpus({&g}));

  // Very high SNR: error-free in practice.
  const BaselineRun clean = classical_pipeline_run(
      g, SourceCoder::huffman, &code, 40.0, false, 3);
  CHECK(clean.triples == graph_to_triples(g));

  // Low SNR: with SER ~0.92 per symbol the text is destroyed; the decoder
  // must survive and return few or no valid triples.
  const BaselineRun noisy = classical_pipeline_run(
      g, SourceCoder::huffman, &code, 0.0, false, 3);
  CHECK(noisy.triples.size() < 3);
  const BaselineRun noisy6 = classical_pipeline_run(
      g, SourceCoder::sixbit, nullptr, 0.0, false, 3);
  CHECK(noisy6.triples.size() < 3);

  // Same seed, same realization.
  const BaselineRun again = classical_pipeline_run(
      g, SourceCoder::huffman, &code, 0.0, false, 3);
  CHECK(again.triples == noisy.triples);
  CHECK(again.truncated_bits == noisy.truncated_bits);

  // Huffman coder without a codebook is an error.
  CHECK_THROWS(classical_pipeline_run(g, SourceCoder::huffman, nullptr, 0.0,
                                      true, 1));
}
