/**
 * @file embedder.hpp
 * @brief Frozen 384-d sentence embeddings for node and relation texts.
 *
 * The sentence model sits behind the TextEmbedder interface and is selected by
 * a model identifier in the configuration:
 *
 *   "hash-v1"             built-in deterministic feature-hashing embedder.
 *                         Tokens (words + character trigrams) are hashed to
 *                         seeded Gaussian directions and summed, then
 *                         L2-normalized. Frozen by construction.
 *   "precomputed:<path>"  embeddings exported by an external sentence model
 *                         (e.g. a MiniLM-class transformer) in the cache file
 *                         format below; texts absent from the file are errors.
 *
 * No gradient ever flows into the embedder. A persistent cache keyed by
 * (model id, SHA-256 of text) makes repeated labels cheap and survives runs;
 * a cache hit returns a bit-identical vector.
 */
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "semcom/features/sha256.hpp"
#include "semcom/kg/graph.hpp"
#include "semcom/nn/mat.hpp"

namespace semcom {

inline constexpr int kEmbeddingDim = 384;

struct TextEmbedding {
  std::vector<double> vector;  // exactly kEmbeddingDim entries
  std::string source_text;
};

class TextEmbedder {
 public:
  virtual ~TextEmbedder() = default;
  virtual std::string model_id() const = 0;
  virtual std::vector<double> embed(const std::string& text) const = 0;
};

class HashEmbedder final : public TextEmbedder {
 public:
  std::string model_id() const override { return "hash-v1"; }
  std::vector<double> embed(const std::string& text) const override;
};

// In-memory embedding store with a versioned binary file behind it.
class EmbeddingCache {
 public:
  EmbeddingCache(std::string model_id, std::string path);

  bool contains(const Sha256Digest& key) const;
  const std::vector<double>* find(const Sha256Digest& key) const;
  void put(const Sha256Digest& key, std::vector<double> vec);

  // Writes all entries, sorted by digest. Load-after-save is bit-identical.
  void save() const;
  void load();

  const std::string& model_id() const { return model_id_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::string model_id_;
  std::string path_;
  std::map<Sha256Digest, std::vector<double>> entries_;
};

// Serves embeddings from the cache, falling back to the model on miss.
// Writes are serialized; reads after warm-up do not mutate state.
class CachedEmbedder {
 public:
  // cache_path may be empty for a purely in-memory cache.
  CachedEmbedder(std::shared_ptr<TextEmbedder> model, std::string cache_path);

  const std::vector<double>& embed(const std::string& text);
  std::vector<TextEmbedding> embed_batch(const std::vector<std::string>& texts);

  void save_cache() const;
  std::string model_id() const { return model_->model_id(); }

 private:
  std::shared_ptr<TextEmbedder> model_;
  EmbeddingCache cache_;
  mutable std::mutex mu_;
};

// Loads embeddings only from a previously exported cache file; unknown text
// is an explicit error (the external model is not available in-process).
class PrecomputedEmbedder final : public TextEmbedder {
 public:
  explicit PrecomputedEmbedder(const std::string& path);
  std::string model_id() const override { return model_id_; }
  std::vector<double> embed(const std::string& text) const override;

 private:
  std::string model_id_;
  std::shared_ptr<EmbeddingCache> store_;
};

// Factory for the identifiers documented above.
std::shared_ptr<TextEmbedder> make_embedder(const std::string& model_id);

struct GraphFeatures {
  nn::Mat node_feats;  // [N_e x 384]
  nn::Mat edge_feats;  // [|edges| x 384]
};

// Row order follows node/edge order of the graph.
GraphFeatures embed_graph(const KnowledgeGraph& g, CachedEmbedder& embedder);

}  // namespace semcom
