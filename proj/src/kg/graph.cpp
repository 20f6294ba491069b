/**
 * @file graph.cpp
 */
#include "semcom/kg/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "semcom/features/sha256.hpp"

namespace semcom {

std::string trim_copy(const std::string& s) {
  const char* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

void KnowledgeGraph::validate() const {
  if (nodes.empty())
    throw std::invalid_argument("KnowledgeGraph: node list is empty (" + source_id + ")");
  for (const auto& n : nodes)
    if (n.empty())
      throw std::invalid_argument("KnowledgeGraph: empty node label (" + source_id + ")");
  if (std::set<std::string>(nodes.begin(), nodes.end()).size() != nodes.size())
    throw std::invalid_argument("KnowledgeGraph: duplicate node label (" + source_id + ")");
  std::set<std::tuple<int, int, std::string>> seen;
  for (const auto& e : edges) {
    if (e.src < 0 || e.src >= num_nodes() || e.dst < 0 || e.dst >= num_nodes())
      throw std::invalid_argument("KnowledgeGraph: edge endpoint out of range (" +
                                  source_id + ")");
    if (e.relation.empty())
      throw std::invalid_argument("KnowledgeGraph: empty relation label (" + source_id + ")");
    if (!seen.emplace(e.src, e.dst, e.relation).second)
      throw std::invalid_argument("KnowledgeGraph: duplicate triple (" + source_id + ")");
  }
}

KnowledgeGraph graph_from_triples(const std::vector<Triple>& triples,
                                  const std::string& source_id) {
  KnowledgeGraph g;
  g.source_id = source_id;
  std::map<std::string, int> index;
  auto node_of = [&](const std::string& raw) {
    const std::string label = trim_copy(raw);
    auto it = index.find(label);
    if (it != index.end()) return it->second;
    const int id = g.num_nodes();
    g.nodes.push_back(label);
    index.emplace(label, id);
    return id;
  };
  std::set<std::tuple<int, int, std::string>> seen;
  for (const auto& t : triples) {
    const int s = node_of(t.subject);
    const int o = node_of(t.object);
    const std::string rel = trim_copy(t.relation);
    if (seen.emplace(s, o, rel).second) g.edges.push_back({s, o, rel});
  }
  return g;
}

std::vector<Triple> graph_to_triples(const KnowledgeGraph& g) {
  std::vector<Triple> out;
  out.reserve(g.edges.size());
  for (const auto& e : g.edges)
    out.push_back({g.nodes[e.src], e.relation, g.nodes[e.dst]});
  return out;
}

std::string serialize_for_baseline(const KnowledgeGraph& g) {
  std::string out;
  for (const auto& e : g.edges) {
    out += g.nodes[e.src];
    out += " | ";
    out += e.relation;
    out += " | ";
    out += g.nodes[e.dst];
    out += '\n';
  }
  return out;
}

ParsedTriples parse_serialized_triples(const std::string& text) {
  ParsedTriples out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      const auto sep = line.find(" | ", pos);
      if (sep == std::string::npos) {
        fields.push_back(line.substr(pos));
        break;
      }
      fields.push_back(line.substr(pos, sep - pos));
      pos = sep + 3;
    }
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      ++out.dropped_lines;
      continue;
    }
    out.triples.push_back({fields[0], fields[1], fields[2]});
  }
  return out;
}

std::string graph_identity(const KnowledgeGraph& g) {
  auto triples = graph_to_triples(g);
  std::sort(triples.begin(), triples.end());
  std::string key;
  for (const auto& t : triples) {
    key += t.subject;
    key += '\x1f';
    key += t.relation;
    key += '\x1f';
    key += t.object;
    key += '\x1e';
  }
  if (triples.empty()) {
    for (const auto& n : g.nodes) {
      key += n;
      key += '\x1e';
    }
  }
  return key;
}

Vocabulary Vocabulary::build(const std::vector<const KnowledgeGraph*>& graphs) {
  std::set<std::string> ents;
  std::set<std::string> rels;
  for (const auto* g : graphs) {
    for (const auto& n : g->nodes) ents.insert(n);
    for (const auto& e : g->edges) {
      if (e.relation == kNoneRelation)
        throw std::invalid_argument(
            "Vocabulary: dataset edge uses the reserved relation label \"none\" (" +
            g->source_id + ")");
      rels.insert(e.relation);
    }
  }
  Vocabulary v;
  v.entities_.assign(ents.begin(), ents.end());
  v.relations_.push_back(kNoneRelation);
  v.relations_.insert(v.relations_.end(), rels.begin(), rels.end());
  v.rebuild_maps();
  return v;
}

void Vocabulary::rebuild_maps() {
  entity_ids_.clear();
  relation_ids_.clear();
  for (int i = 0; i < num_entities(); ++i) entity_ids_[entities_[i]] = i;
  for (int i = 0; i < num_relations(); ++i) relation_ids_[relations_[i]] = i;
}

int Vocabulary::entity_id(const std::string& label) const {
  auto it = entity_ids_.find(label);
  if (it == entity_ids_.end())
    throw std::out_of_range("Vocabulary: unknown entity \"" + label + "\"");
  return it->second;
}

int Vocabulary::relation_id(const std::string& label) const {
  auto it = relation_ids_.find(label);
  if (it == relation_ids_.end())
    throw std::out_of_range("Vocabulary: unknown relation \"" + label + "\"");
  return it->second;
}

std::string Vocabulary::manifest_text() const {
  std::string out = "[entities]\n";
  for (int i = 0; i < num_entities(); ++i)
    out += std::to_string(i) + "\t" + entities_[i] + "\n";
  out += "[relations]\n";
  for (int i = 0; i < num_relations(); ++i)
    out += std::to_string(i) + "\t" + relations_[i] + "\n";
  return out;
}

Vocabulary Vocabulary::from_manifest_text(const std::string& text) {
  Vocabulary v;
  std::istringstream in(text);
  std::string line;
  std::vector<std::string>* section = nullptr;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == "[entities]") {
      section = &v.entities_;
      continue;
    }
    if (line == "[relations]") {
      section = &v.relations_;
      continue;
    }
    if (section == nullptr) throw std::runtime_error("vocabulary manifest: missing section");
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("vocabulary manifest: malformed line: " + line);
    const int id = std::stoi(line.substr(0, tab));
    if (id != static_cast<int>(section->size()))
      throw std::runtime_error("vocabulary manifest: non-dense id in line: " + line);
    section->push_back(line.substr(tab + 1));
  }
  if (v.relations_.empty() || v.relations_[0] != kNoneRelation)
    throw std::runtime_error("vocabulary manifest: relation id 0 must be \"none\"");
  v.rebuild_maps();
  return v;
}

void Vocabulary::save_manifest(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write vocabulary manifest: " + path);
  out << manifest_text();
}

Vocabulary Vocabulary::load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read vocabulary manifest: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_manifest_text(ss.str());
}

std::string Vocabulary::digest() const { return sha256_hex(manifest_text()); }

std::vector<const KnowledgeGraph*> DatasetSplit::all_graphs() const {
  std::vector<const KnowledgeGraph*> out;
  out.reserve(train.size() + validation.size() + test.size());
  for (const auto& g : train) out.push_back(&g);
  for (const auto& g : validation) out.push_back(&g);
  for (const auto& g : test) out.push_back(&g);
  return out;
}

void DatasetSplit::check_disjoint() const {
  std::map<std::string, const char*> seen;
  auto scan = [&](const std::vector<KnowledgeGraph>& graphs, const char* name) {
    for (const auto& g : graphs) {
      auto [it, inserted] = seen.emplace(graph_identity(g), name);
      if (!inserted && it->second != name)
        throw std::runtime_error("dataset splits are not disjoint: graph " + g.source_id +
                                 " appears in " + it->second + " and " + name);
    }
  };
  scan(train, "train");
  scan(validation, "validation");
  scan(test, "test");
}

}  // namespace semcom
