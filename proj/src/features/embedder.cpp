/**
 * @file embedder.cpp
 */
#include "semcom/features/embedder.hpp"

#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace semcom {

namespace {

constexpr char kCacheMagic[8] = {'S', 'E', 'M', 'E', 'M', 'B', '0', '1'};

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Adds `weight` times a unit-variance pseudo-random direction for `token`.
void add_token_direction(std::vector<double>& acc, const std::string& token,
                         double weight) {
  nn::Rng rng(fnv1a64(token));
  for (int i = 0; i < kEmbeddingDim; ++i) acc[i] += weight * rng.normal();
}

template <typename T>
void write_raw(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_raw(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

std::vector<double> HashEmbedder::embed(const std::string& text) const {
  std::vector<double> acc(kEmbeddingDim, 0.0);
  // Sentence marker keeps the empty string well-defined.
  add_token_direction(acc, "<s>", 0.25);

  std::string norm;
  norm.reserve(text.size());
  for (unsigned char c : text)
    norm.push_back(std::isalnum(c) ? static_cast<char>(std::tolower(c)) : ' ');

  std::string word;
  auto flush_word = [&] {
    if (!word.empty()) add_token_direction(acc, "w:" + word, 1.0);
    word.clear();
  };
  for (char c : norm) {
    if (c == ' ')
      flush_word();
    else
      word.push_back(c);
  }
  flush_word();

  const std::string padded = "^" + norm + "$";
  for (std::size_t i = 0; i + 3 <= padded.size(); ++i)
    add_token_direction(acc, "t:" + padded.substr(i, 3), 0.5);

  double ss = 0.0;
  for (double v : acc) ss += v * v;
  const double inv = 1.0 / std::sqrt(ss);
  for (double& v : acc) v *= inv;
  return acc;
}

EmbeddingCache::EmbeddingCache(std::string model_id, std::string path)
    : model_id_(std::move(model_id)), path_(std::move(path)) {
  if (!path_.empty() && std::ifstream(path_).good()) load();
}

bool EmbeddingCache::contains(const Sha256Digest& key) const {
  return entries_.count(key) > 0;
}

const std::vector<double>* EmbeddingCache::find(const Sha256Digest& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

void EmbeddingCache::put(const Sha256Digest& key, std::vector<double> vec) {
  if (static_cast<int>(vec.size()) != kEmbeddingDim)
    throw std::invalid_argument("EmbeddingCache: vector dimension must be 384");
  entries_[key] = std::move(vec);
}

void EmbeddingCache::save() const {
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("EmbeddingCache: cannot write " + path_);
  out.write(kCacheMagic, sizeof(kCacheMagic));
  const std::uint32_t dim = kEmbeddingDim;
  const std::uint32_t idlen = static_cast<std::uint32_t>(model_id_.size());
  const std::uint64_t count = entries_.size();
  write_raw(out, dim);
  write_raw(out, idlen);
  out.write(model_id_.data(), idlen);
  write_raw(out, count);
  for (const auto& [key, vec] : entries_) {
    out.write(reinterpret_cast<const char*>(key.data()), key.size());
    out.write(reinterpret_cast<const char*>(vec.data()), vec.size() * sizeof(double));
  }
  if (!out) throw std::runtime_error("EmbeddingCache: short write to " + path_);
}

void EmbeddingCache::load() {
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw std::runtime_error("EmbeddingCache: cannot read " + path_);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0)
    throw std::runtime_error("EmbeddingCache: bad header in " + path_);
  std::uint32_t dim = 0, idlen = 0;
  read_raw(in, dim);
  read_raw(in, idlen);
  if (dim != kEmbeddingDim)
    throw std::runtime_error("EmbeddingCache: dimension mismatch in " + path_);
  std::string file_model(idlen, '\0');
  in.read(file_model.data(), idlen);
  if (!model_id_.empty() && file_model != model_id_)
    throw std::runtime_error("EmbeddingCache: cache " + path_ + " was built with model \"" +
                             file_model + "\", expected \"" + model_id_ + "\"");
  model_id_ = file_model;
  std::uint64_t count = 0;
  read_raw(in, count);
  entries_.clear();
  for (std::uint64_t i = 0; i < count; ++i) {
    Sha256Digest key{};
    in.read(reinterpret_cast<char*>(key.data()), key.size());
    std::vector<double> vec(kEmbeddingDim);
    in.read(reinterpret_cast<char*>(vec.data()), vec.size() * sizeof(double));
    if (!in) throw std::runtime_error("EmbeddingCache: truncated file " + path_);
    entries_.emplace(key, std::move(vec));
  }
}

CachedEmbedder::CachedEmbedder(std::shared_ptr<TextEmbedder> model, std::string cache_path)
    : model_(std::move(model)), cache_(model_->model_id(), std::move(cache_path)) {}

const std::vector<double>& CachedEmbedder::embed(const std::string& text) {
  const Sha256Digest key = sha256(text);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (const auto* hit = cache_.find(key)) return *hit;
  }
  std::vector<double> vec = model_->embed(text);
  if (static_cast<int>(vec.size()) != kEmbeddingDim)
    throw std::runtime_error("embedder \"" + model_->model_id() +
                             "\" returned wrong dimension");
  for (double v : vec)
    if (!std::isfinite(v))
      throw std::runtime_error("embedder returned non-finite value for \"" + text + "\"");
  std::lock_guard<std::mutex> lock(mu_);
  cache_.put(key, std::move(vec));
  return *cache_.find(key);
}

std::vector<TextEmbedding> CachedEmbedder::embed_batch(const std::vector<std::string>& texts) {
  std::vector<TextEmbedding> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back({embed(t), t});
  return out;
}

void CachedEmbedder::save_cache() const {
  std::lock_guard<std::mutex> lock(mu_);
  cache_.save();
}

PrecomputedEmbedder::PrecomputedEmbedder(const std::string& path)
    : store_(std::make_shared<EmbeddingCache>("", path)) {
  if (!std::ifstream(path).good())
    throw std::runtime_error("precomputed embedding file not found: " + path);
  model_id_ = "precomputed:" + store_->model_id();
}

std::vector<double> PrecomputedEmbedder::embed(const std::string& text) const {
  const auto* hit = store_->find(sha256(text));
  if (hit == nullptr)
    throw std::runtime_error("precomputed embeddings have no entry for \"" + text + "\"");
  return *hit;
}

std::shared_ptr<TextEmbedder> make_embedder(const std::string& model_id) {
  if (model_id == "hash-v1") return std::make_shared<HashEmbedder>();
  if (model_id.rfind("precomputed:", 0) == 0)
    return std::make_shared<PrecomputedEmbedder>(model_id.substr(12));
  throw std::runtime_error("unknown embedding model identifier \"" + model_id +
                           "\" (expected \"hash-v1\" or \"precomputed:<path>\")");
}

GraphFeatures embed_graph(const KnowledgeGraph& g, CachedEmbedder& embedder) {
  GraphFeatures f;
  f.node_feats = nn::Mat(g.num_nodes(), kEmbeddingDim);
  f.edge_feats = nn::Mat(g.num_edges(), kEmbeddingDim);
  for (int i = 0; i < g.num_nodes(); ++i) {
    const auto& v = embedder.embed(g.nodes[i]);
    std::copy(v.begin(), v.end(), f.node_feats.row(i));
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    const auto& v = embedder.embed(g.edges[e].relation);
    std::copy(v.begin(), v.end(), f.edge_feats.row(e));
  }
  return f;
}

}  // namespace semcom
