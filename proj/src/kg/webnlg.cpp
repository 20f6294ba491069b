/**
 * @file webnlg.cpp
 */
#include "semcom/kg/webnlg.hpp"

#include <algorithm>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace semcom {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;
using nlohmann::json;

const char* split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
  }
  return "?";
}

namespace {

Triple parse_mtriple(const std::string& text, const std::string& where) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    const auto sep = text.find(" | ", pos);
    if (sep == std::string::npos) {
      fields.push_back(text.substr(pos));
      break;
    }
    fields.push_back(text.substr(pos, sep - pos));
    pos = sep + 3;
  }
  if (fields.size() != 3)
    throw std::runtime_error("WebNLG parse error at " + where +
                             ": triple does not have 3 fields: \"" + text + "\"");
  Triple t{trim_copy(fields[0]), trim_copy(fields[1]), trim_copy(fields[2])};
  if (t.subject.empty() || t.relation.empty() || t.object.empty())
    throw std::runtime_error("WebNLG parse error at " + where + ": empty triple field");
  return t;
}

void parse_xml_file(const std::string& path, ParseResult& out) {
  pt::ptree tree;
  try {
    pt::read_xml(path, tree);
  } catch (const std::exception& e) {
    throw std::runtime_error("WebNLG parse error in " + path + ": " + e.what());
  }
  const auto entries = tree.get_child_optional("benchmark.entries");
  if (!entries) throw std::runtime_error("WebNLG parse error in " + path +
                                         ": missing <benchmark><entries>");
  int index = 0;
  for (const auto& [tag, entry] : *entries) {
    if (tag != "entry") continue;
    ++index;
    const std::string eid = entry.get<std::string>("<xmlattr>.eid",
                                                   "entry#" + std::to_string(index));
    const std::string where = fs::path(path).filename().string() + ":" + eid;
    std::vector<Triple> triples;
    if (const auto mts = entry.get_child_optional("modifiedtripleset")) {
      for (const auto& [mtag, mtriple] : *mts) {
        if (mtag != "mtriple") continue;
        triples.push_back(parse_mtriple(trim_copy(mtriple.get_value<std::string>()), where));
      }
    }
    if (triples.empty()) {
      ++out.skipped_empty_entries;
      continue;
    }
    KnowledgeGraph g = graph_from_triples(triples, where);
    g.validate();
    out.graphs.push_back(std::move(g));
  }
}

void parse_json_file(const std::string& path, ParseResult& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  json root;
  try {
    in >> root;
  } catch (const std::exception& e) {
    throw std::runtime_error("WebNLG parse error in " + path + ": " + e.what());
  }
  if (!root.contains("entries") || !root["entries"].is_array())
    throw std::runtime_error("WebNLG parse error in " + path + ": missing entries array");
  int index = 0;
  for (const auto& wrapper : root["entries"]) {
    ++index;
    // Release JSON wraps each entry in an object keyed by its ordinal.
    const json* entry = &wrapper;
    if (wrapper.is_object() && !wrapper.contains("modifiedtripleset") &&
        wrapper.size() == 1)
      entry = &wrapper.begin().value();
    const std::string where =
        fs::path(path).filename().string() + ":entry#" + std::to_string(index);
    if (!entry->contains("modifiedtripleset"))
      throw std::runtime_error("WebNLG parse error at " + where +
                               ": missing modifiedtripleset");
    std::vector<Triple> triples;
    for (const auto& t : (*entry)["modifiedtripleset"]) {
      Triple tr{trim_copy(t.value("subject", "")),
                trim_copy(t.value("property", t.value("relation", ""))),
                trim_copy(t.value("object", ""))};
      if (tr.subject.empty() || tr.relation.empty() || tr.object.empty())
        throw std::runtime_error("WebNLG parse error at " + where + ": empty triple field");
      triples.push_back(std::move(tr));
    }
    if (triples.empty()) {
      ++out.skipped_empty_entries;
      continue;
    }
    KnowledgeGraph g = graph_from_triples(triples, where);
    g.validate();
    out.graphs.push_back(std::move(g));
  }
}

bool name_matches_split(const std::string& stem, Split split) {
  auto contains = [&](const char* token) { return stem.find(token) != std::string::npos; };
  switch (split) {
    case Split::kTrain: return contains("train");
    case Split::kValidation:
      return contains("dev") || contains("val");
    case Split::kTest: return contains("test");
  }
  return false;
}

}  // namespace

ParseResult parse_webnlg_file(const std::string& path) {
  ParseResult out;
  const std::string ext = fs::path(path).extension().string();
  if (ext == ".xml")
    parse_xml_file(path, out);
  else if (ext == ".json")
    parse_json_file(path, out);
  else
    throw std::runtime_error("WebNLG: unsupported file type: " + path);
  out.files.push_back(path);
  return out;
}

ParseResult parse_webnlg(const std::string& dir, Split split) {
  if (!fs::exists(dir)) throw std::runtime_error("WebNLG: no such path: " + dir);
  std::vector<std::string> files;
  if (fs::is_regular_file(dir)) {
    files.push_back(dir);
  } else {
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (!e.is_regular_file()) continue;
      const std::string ext = e.path().extension().string();
      if (ext != ".xml" && ext != ".json") continue;
      // Lowercased file name decides split membership.
      std::string stem = e.path().filename().string();
      std::transform(stem.begin(), stem.end(), stem.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      if (name_matches_split(stem, split)) files.push_back(e.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw std::runtime_error(std::string("WebNLG: no ") + split_name(split) +
                             " files under " + dir);
  ParseResult out;
  for (const auto& f : files) {
    ParseResult one = parse_webnlg_file(f);
    out.skipped_empty_entries += one.skipped_empty_entries;
    out.files.push_back(f);
    std::move(one.graphs.begin(), one.graphs.end(), std::back_inserter(out.graphs));
  }
  return out;
}

DatasetSplit load_webnlg_dataset(const std::string& dir) {
  DatasetSplit ds;
  auto tr = parse_webnlg(dir, Split::kTrain);
  auto va = parse_webnlg(dir, Split::kValidation);
  auto te = parse_webnlg(dir, Split::kTest);
  ds.train = std::move(tr.graphs);
  ds.validation = std::move(va.graphs);
  ds.test = std::move(te.graphs);
  ds.skipped_empty_entries =
      tr.skipped_empty_entries + va.skipped_empty_entries + te.skipped_empty_entries;
  for (auto* r : {&tr, &va, &te})
    ds.provenance.insert(ds.provenance.end(), r->files.begin(), r->files.end());
  ds.check_disjoint();
  return ds;
}

}  // namespace semcom
