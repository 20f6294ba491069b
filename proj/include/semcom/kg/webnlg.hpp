/**
 * @file webnlg.hpp
 * @brief WebNLG benchmark ingestion (XML and JSON release formats).
 *
 * Each benchmark entry's modified-triple set becomes one KnowledgeGraph;
 * entities appearing in several triples of an entry collapse into one shared
 * node. Entries with zero triples are skipped and counted.
 */
#pragma once

#include <string>
#include <vector>

#include "semcom/kg/graph.hpp"

namespace semcom {

enum class Split { kTrain, kValidation, kTest };

const char* split_name(Split s);

struct ParseResult {
  std::vector<KnowledgeGraph> graphs;
  std::vector<std::string> files;
  int skipped_empty_entries = 0;
};

// Parses one release file (.xml or .json, by extension). Malformed content
// raises std::runtime_error naming the file and entry.
ParseResult parse_webnlg_file(const std::string& path);

// Parses every release file for the given split under `dir`. A file belongs
// to a split when its name (anywhere under dir) contains the split token:
// "train", "dev"/"val"/"validation", or "test".
ParseResult parse_webnlg(const std::string& dir, Split split);

// Loads all three splits and checks the disjointness invariant.
DatasetSplit load_webnlg_dataset(const std::string& dir);

}  // namespace semcom
