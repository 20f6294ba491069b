/**
 * @file graph.hpp
 * @brief Knowledge-graph data model, vocabularies and triple serialization.
 *
 * A KnowledgeGraph is a labeled directed multigraph: textual node attributes
 * plus (source, target, relation-text) edges. Everything here is a plain value
 * type; all operations are read-only after construction.
 */
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace semcom {

struct Triple {
  std::string subject;
  std::string relation;
  std::string object;

  bool operator==(const Triple& o) const = default;
  bool operator<(const Triple& o) const {
    if (subject != o.subject) return subject < o.subject;
    if (relation != o.relation) return relation < o.relation;
    return object < o.object;
  }
};

struct Edge {
  int src = 0;
  int dst = 0;
  std::string relation;
};

struct KnowledgeGraph {
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
  std::string source_id;  // dataset entry identifier, for diagnostics

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  // Throws std::invalid_argument when an invariant is broken: empty node list,
  // edge endpoint out of range, empty label, or duplicate (src, dst, relation).
  void validate() const;
};

// Builds a graph from triples, deduplicating entities by exact string match
// after whitespace trimming. Node order follows first appearance.
KnowledgeGraph graph_from_triples(const std::vector<Triple>& triples,
                                  const std::string& source_id = "");

// One Triple per edge, in edge order.
std::vector<Triple> graph_to_triples(const KnowledgeGraph& g);

// Canonical text form: "subject | relation | object\n" per triple, edge order.
std::string serialize_for_baseline(const KnowledgeGraph& g);

// Inverse of serialize_for_baseline for well-formed text. Lines without
// exactly three " | "-separated non-empty fields are dropped and counted.
struct ParsedTriples {
  std::vector<Triple> triples;
  int dropped_lines = 0;
};
ParsedTriples parse_serialized_triples(const std::string& text);

// Sorted-triple canonical key; used for split-disjointness checks.
std::string graph_identity(const KnowledgeGraph& g);

class Vocabulary {
 public:
  static constexpr const char* kNoneRelation = "none";

  // Builds entity and relation vocabularies over the given graphs.
  // Ids are dense and lexicographic; relation id 0 is reserved for "none".
  // Throws if any dataset edge uses the literal relation "none".
  static Vocabulary build(const std::vector<const KnowledgeGraph*>& graphs);

  int entity_id(const std::string& label) const;
  int relation_id(const std::string& label) const;
  const std::string& entity_label(int id) const { return entities_[id]; }
  const std::string& relation_label(int id) const { return relations_[id]; }
  int num_entities() const { return static_cast<int>(entities_.size()); }
  int num_relations() const { return static_cast<int>(relations_.size()); }

  const std::vector<std::string>& entities() const { return entities_; }
  const std::vector<std::string>& relations() const { return relations_; }

  // Manifest text: an "entities" section and a "relations" section, each one
  // "id<TAB>label" line per symbol.
  std::string manifest_text() const;
  static Vocabulary from_manifest_text(const std::string& text);
  void save_manifest(const std::string& path) const;
  static Vocabulary load_manifest(const std::string& path);

  // SHA-256 hex digest of manifest_text(); bound into checkpoints.
  std::string digest() const;

 private:
  std::vector<std::string> entities_;
  std::vector<std::string> relations_;
  std::map<std::string, int> entity_ids_;
  std::map<std::string, int> relation_ids_;
  void rebuild_maps();
};

struct DatasetSplit {
  std::vector<KnowledgeGraph> train;
  std::vector<KnowledgeGraph> validation;
  std::vector<KnowledgeGraph> test;
  std::vector<std::string> provenance;  // source file identifiers
  int skipped_empty_entries = 0;

  std::vector<const KnowledgeGraph*> all_graphs() const;
  // Throws if the same graph identity appears in two different splits.
  void check_disjoint() const;
};

std::string trim_copy(const std::string& s);

}  // namespace semcom
