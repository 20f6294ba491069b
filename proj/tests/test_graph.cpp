#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "semcom/kg/graph.hpp"

using namespace semcom;

namespace {

std::vector<Triple> sample_triples() {
  return {{"Alan_Bean", "birthPlace", "Wheeler"},
          {"Alan_Bean", "spaceMission", "Apollo_12"},
          {"Apollo_12", "operator", "NASA"}};
}

}  // namespace

TEST_CASE("graph_from_triples dedups nodes and keeps edge order") {
  KnowledgeGraph g = graph_from_triples(sample_triples(), "t");
  CHECK(g.num_nodes() == 4);  // Alan_Bean, Wheeler, Apollo_12, NASA
  CHECK(g.num_edges() == 3);
  g.validate();

  const auto round = graph_to_triples(g);
  REQUIRE(round.size() == 3);
  CHECK(round == sample_triples());
}

TEST_CASE("serialize_for_baseline emits one pipe-separated line per triple") {
  KnowledgeGraph g = graph_from_triples(sample_triples(), "t");
  const std::string text = serialize_for_baseline(g);
  CHECK(text ==
        "Alan_Bean | birthPlace | Wheeler\n"
        "Alan_Bean | spaceMission | Apollo_12\n"
        "Apollo_12 | operator | NASA\n");

  const ParsedTriples parsed = parse_serialized_triples(text);
  CHECK(parsed.dropped_lines == 0);
  CHECK(parsed.triples == sample_triples());
}

TEST_CASE("parse_serialized_triples drops malformed lines and counts them") {
  const ParsedTriples parsed = parse_serialized_triples(
      "a | b | c\n"
      "broken line without pipes\n"
      "x | y\n"
      " |  | \n"
      "d | e | f\n");
  REQUIRE(parsed.triples.size() == 2);
  CHECK(parsed.triples[0] == Triple{"a", "b", "c"});
  CHECK(parsed.triples[1] == Triple{"d", "e", "f"});
  CHECK(parsed.dropped_lines == 3);
}

TEST_CASE("graph_identity is invariant to triple order") {
  auto t1 = sample_triples();
  auto t2 = t1;
  std::swap(t2[0], t2[2]);
  CHECK(graph_identity(graph_from_triples(t1, "a")) ==
        graph_identity(graph_from_triples(t2, "b")));

  auto t3 = t1;
  t3[0].object = "Dallas";
  CHECK(graph_identity(graph_from_triples(t1, "a")) !=
        graph_identity(graph_from_triples(t3, "c")));
}

TEST_CASE("vocabulary assigns dense lexicographic ids with none relation at 0") {
  KnowledgeGraph g = graph_from_triples(sample_triples(), "t");
  Vocabulary v = Vocabulary::build({&g});

  CHECK(v.num_entities() == 4);
  CHECK(v.num_relations() == 4);  // none + 3 observed
  CHECK(v.relation_label(0) == Vocabulary::kNoneRelation);
  CHECK(v.relation_id("none") == 0);
  // Lexicographic entity order: Alan_Bean < Apollo_12 < NASA < Wheeler.
  CHECK(v.entity_label(0) == "Alan_Bean");
  CHECK(v.entity_label(1) == "Apollo_12");
  CHECK(v.entity_label(2) == "NASA");
  CHECK(v.entity_label(3) == "Wheeler");
  CHECK(v.entity_id("Wheeler") == 3);
  CHECK_THROWS(v.entity_id("unknown"));
}

TEST_CASE("vocabulary manifest round-trips and digests are content-bound") {
  KnowledgeGraph g = graph_from_triples(sample_triples(), "t");
  Vocabulary v = Vocabulary::build({&g});

  const Vocabulary w = Vocabulary::from_manifest_text(v.manifest_text());
  CHECK(w.num_entities() == v.num_entities());
  CHECK(w.num_relations() == v.num_relations());
  CHECK(w.digest() == v.digest());
  CHECK(v.digest().size() == 64);  // hex SHA-256

  KnowledgeGraph g2 = graph_from_triples(
      {{"Alan_Bean", "birthPlace", "Dallas"}}, "t2");
  CHECK(Vocabulary::build({&g2}).digest() != v.digest());

  const auto path = std::filesystem::temp_directory_path() / "vocab_test.tsv";
  v.save_manifest(path.string());
  const Vocabulary loaded = Vocabulary::load_manifest(path.string());
  CHECK(loaded.digest() == v.digest());
  std::filesystem::remove(path);
}

TEST_CASE("vocabulary rejects datasets that use the reserved relation") {
  KnowledgeGraph g = graph_from_triples({{"a", "none", "b"}}, "t");
  CHECK_THROWS(Vocabulary::build({&g}));
}

TEST_CASE("validate rejects malformed graphs") {
  KnowledgeGraph g;
  g.nodes = {"a", "b"};
  g.edges = {{0, 5, "rel"}};
  CHECK_THROWS(g.validate());

  KnowledgeGraph dup;
  dup.nodes = {"a", "a"};
  CHECK_THROWS(dup.validate());
}

TEST_CASE("trim_copy strips surrounding whitespace only") {
  CHECK(trim_copy("  hello world \t\n") == "hello world");
  CHECK(trim_copy("x") == "x");
  CHECK(trim_copy("   ") == "");
  CHECK(trim_copy("") == "");
}
