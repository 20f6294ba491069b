/**
 * @file datagen.cpp
 * @brief Deterministic generator for the bundled WebNLG-style sample corpus.
 *
 * Emits benchmark XML files (train/dev/test) whose entries mirror the WebNLG
 * layout: <entry category=... eid=... size=...> wrapping a
 * <modifiedtripleset> of "subject | relation | object" mtriples.
 *
 * Corpus invariants enforced here so downstream code can rely on them:
 *   - every label character lies inside the 6-bit code alphabet
 *     (letters, digits 0-6, underscore),
 *   - entries never repeat an ordered (subject, object) pair,
 *   - every triple adds exactly one new node (graphs are trees, N = T + 1),
 *   - graph identities are globally unique, so the splits stay disjoint,
 *   - the character set of dev/test serializations is a subset of train's,
 *     keeping a train-built Huffman codebook total on the other splits.
 *
 * The same seed always reproduces the same corpus byte for byte.
 */
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semcom/kg/graph.hpp"
#include "semcom/nn/mat.hpp"

namespace {

using semcom::KnowledgeGraph;
using semcom::Triple;
using semcom::nn::Rng;

using Pool = std::vector<std::string>;

struct RelationSpec {
  std::string name;
  const Pool* objects;
};

struct Category {
  std::string name;
  Pool subjects;
  std::vector<RelationSpec> relations;  // relations[0] anchors chain entries
  std::string chain_relation;           // applied to relations[0]'s object
  const Pool* chain_objects = nullptr;
};

// Digits above 6 never appear: labels stay inside the 6-bit code alphabet.
Pool dates(Rng& rng) {
  static const char* months[8] = {"January", "February", "March",   "April",
                                  "June",    "August",   "October", "December"};
  Pool out;
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b) {
      const std::string year = "_20" + std::to_string(a) + std::to_string(b);
      out.push_back(months[(a * 7 + b) % 8] + year);
      out.push_back(months[(a * 7 + b + 3) % 8] + year);
    }
  rng.shuffle(out);
  out.resize(60);
  return out;
}

Pool numbers(Rng& rng, int count, int min_len, int max_len) {
  std::set<std::string> seen;
  Pool out;
  while (static_cast<int>(out.size()) < count) {
    const int len = min_len + static_cast<int>(rng.below(
                                  static_cast<std::uint64_t>(max_len - min_len + 1)));
    std::string s;
    s.push_back(static_cast<char>('1' + rng.below(6)));  // no leading zero
    while (static_cast<int>(s.size()) < len)
      s.push_back(static_cast<char>('0' + rng.below(7)));
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

Pool cross(const Pool& a, const Pool& b, const std::string& sep) {
  Pool out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x + sep + y);
  return out;
}

Pool take(Pool pool, std::size_t n, Rng& rng) {
  rng.shuffle(pool);
  pool.resize(std::min(n, pool.size()));
  return pool;
}

struct Corpus {
  Pool cities, countries, regions, organisations, universities, people, leagues,
      missions, ingredients, languages, publishers, occupations, statuses,
      courses, date_pool, small_numbers, large_numbers, measures, materials,
      listings, foods, books;
  std::vector<Category> categories;
};

Corpus build_corpus(Rng& rng) {
  Corpus c;
  c.cities = {"Alcantara_Bay",  "Bristol_Downs",  "Cordoba_Norte",
              "Dunmore_Creek",  "Esbjerg_Strand", "Fort_Waverly",
              "Galway_Point",   "Hamburg_Altona", "Iwate_Harbour",
              "Jelgava_Fields", "Kyoto_Heights",  "Lisbon_Alvor",
              "Marrakesh_Gate", "Nairobi_West",   "Oslo_Fjordside",
              "Porto_Alegre",   "Quebec_City",    "Riga_Seaside",
              "San_Antonio",    "Tbilisi_Vake",   "Utrecht_Oost",
              "Valparaiso",     "Windhoek_Central", "Zagreb_Gornji"};
  c.countries = {"Argentina",   "Botswana",   "Costa_Rica",  "Denmark",
                 "Estonia",     "Finland",    "Guatemala",   "Hungary",
                 "Indonesia",   "Kazakhstan", "Lithuania",   "Madagascar",
                 "Morocco",     "Namibia",    "Portugal",    "Uruguay"};
  c.regions = {"Andalusia",     "Bavaria",      "Catalonia",   "Dalmatia",
               "East_Flanders", "Gelderland",   "Hokkaido",    "Jutland",
               "Lombardy",      "Moravia",      "North_Island", "Patagonia"};
  c.organisations = {"Altair_Aerospace",    "Borealis_Group",   "Cobalt_Dynamics",
                     "Delta_Works_Union",   "Eversted_Labs",    "Fenwick_Holdings",
                     "Gallium_Systems",     "Harbour_Trust",    "Ionos_Collective",
                     "Juniper_Logistics",   "Kestrel_Aviation", "Lumen_Institute"};
  c.universities = {"University_of_Aldren",   "Breckland_College",
                    "Carnoth_Institute",      "Dunmore_University",
                    "Eastvale_Polytechnic",   "Firth_Academy",
                    "Glenmoor_University",    "Halvard_Institute",
                    "Ivory_Gate_College",     "Juno_State_University"};
  const Pool first = {"Alan",   "Bianca", "Carlos", "Dagmar", "Elena",  "Farid",
                      "Greta",  "Hiroshi", "Ingrid", "Jonas",  "Katya",  "Lamine",
                      "Maria",  "Nadir",  "Oskar",  "Priya",  "Ronan",  "Sofia",
                      "Teodor", "Ulrike", "Viktor", "Wanda",  "Yusuf",  "Zofia"};
  const Pool last = {"Aldrin",    "Bergstrom", "Castillo", "Duarte",   "Eriksen",
                     "Fontaine",  "Galvez",    "Hoffman",  "Iwamoto",  "Jensen",
                     "Kovacs",    "Lindgren",  "Moreau",   "Novak",    "Okafor",
                     "Petrov",    "Quintana",  "Rosario",  "Santos",   "Tanaka",
                     "Udo",       "Valdez",    "Whitfield", "Ziegler"};
  c.people = take(cross(first, last, "_"), 120, rng);
  c.leagues = {"Atlantic_Premier_League", "Boreal_Conference",
               "Central_Union_League",    "Dominion_Series",
               "Eastern_Circuit",         "Federal_Division"};
  c.missions = {"Apollo_11",    "Apollo_12",    "Apollo_14",   "Artemis_2",
                "Aurora_5",     "Castor_3",     "Gemini_10",   "Helios_4",
                "Luna_Gate_1",  "Meridian_6",   "Orion_Relay", "Zenith_20"};
  c.ingredients = {"almond_flour",   "sweet_basil",     "black_beans",
                   "coconut_milk",   "fennel_seed",     "goat_cheese",
                   "red_lentils",    "smoked_paprika",  "ripe_plantains",
                   "saffron_threads", "sourdough_starter", "tamarind_paste"};
  c.languages = {"Danish",  "Estonian", "Finnish", "Georgian",
                 "Japanese", "Latvian",  "Spanish", "Swahili"};
  c.publishers = {"Arcadia_Press",     "Bellhaven_Books", "Cedar_Gate_Media",
                  "Driftwood_House",   "Emberlight",      "Foxglove_Editions"};
  c.occupations = {"test_pilot", "flight_engineer", "research_chemist",
                   "naval_aviator", "mission_specialist"};
  c.statuses = {"on_active_duty", "formally_retired", "in_reserve_rotation"};
  c.courses = {"shared_appetizer", "main_course", "festive_dessert",
               "warm_side_dish"};
  c.date_pool = dates(rng);
  c.small_numbers = numbers(rng, 30, 3, 4);
  c.large_numbers = numbers(rng, 40, 5, 7);
  c.measures = {"166_metres", "320_metres", "452_metres",  "2120_metres",
                "364_metres", "510_metres", "1105_metres", "3500_metres"};
  c.materials = {"granite_blocks",  "weathered_bronze", "carved_limestone",
                 "polished_basalt", "oak_timberwork",   "cast_iron_plates"};
  c.listings = {"national_register", "regional_register", "candidate_listing"};

  auto cat = [&](std::string name, Pool subjects,
                 std::vector<RelationSpec> rels, std::string chain_rel,
                 const Pool* chain_pool) {
    Category k;
    k.name = std::move(name);
    k.subjects = std::move(subjects);
    k.relations = std::move(rels);
    k.chain_relation = std::move(chain_rel);
    k.chain_objects = chain_pool;
    c.categories.push_back(std::move(k));
  };

  cat("Astronaut", take(c.people, 26, rng),
      {{"birthPlace", &c.cities},
       {"nationality", &c.countries},
       {"spaceMission", &c.missions},
       {"occupation", &c.occupations},
       {"almaMater", &c.universities},
       {"selectedByAgency", &c.organisations},
       {"missionPeriod", &c.date_pool},
       {"serviceStatus", &c.statuses}},
      "country", &c.countries);

  Pool buildings;
  for (const char* stem : {"Alverton", "Brightwater", "Corvid", "Dunelm",
                           "Eastgate", "Fenchurch", "Greywell", "Harlow",
                           "Ketteridge", "Longford", "Meridian", "Northcote"})
    for (const char* kind : {"_Tower", "_Hall", "_Centre"})
      buildings.push_back(std::string(stem) + kind);
  cat("Building", take(buildings, 24, rng),
      {{"location", &c.cities},
       {"architect", &c.people},
       {"majorityOwner", &c.organisations},
       {"completionDate", &c.date_pool},
       {"overallHeight", &c.measures},
       {"floorCount", &c.small_numbers},
       {"currentTenants", &c.organisations}},
      "country", &c.countries);

  Pool airports;
  for (const auto& city : c.cities) airports.push_back(city + "_Airport");
  cat("Airport", take(airports, 22, rng),
      {{"cityServed", &c.cities},
       {"operatingOrganisation", &c.organisations},
       {"runwayLength", &c.measures},
       {"elevationAboveTheSeaLevel", &c.measures},
       {"openingDate", &c.date_pool},
       {"passengerCount", &c.large_numbers}},
      "country", &c.countries);

  Pool monuments;
  for (const char* n : {"Ashfall_Memorial", "Beacon_of_Valmere",
                        "Cenotaph_of_Riga", "Driftstone_Arch",
                        "Ember_Obelisk", "Founders_Column", "Gate_of_Winds",
                        "Harbour_Light_Monument", "Iron_Meridian",
                        "Liberty_Causeway", "Mariners_Cross", "Northern_Vigil"})
    monuments.push_back(n);
  cat("Monument", monuments,
      {{"location", &c.cities},
       {"designer", &c.people},
       {"unveilingDate", &c.date_pool},
       {"primaryMaterial", &c.materials},
       {"heritageListing", &c.listings},
       {"overallHeight", &c.measures}},
      "isPartOf", &c.regions);

  cat("University", c.universities,
      {{"campusLocation", &c.cities},
       {"chancellor", &c.people},
       {"establishedDate", &c.date_pool},
       {"studentCount", &c.large_numbers},
       {"affiliation", &c.organisations},
       {"officialLanguage", &c.languages}},
      "country", &c.countries);

  c.foods = {"Ajoblanco",      "Bandeja_paisa", "Bakso",        "Binignit",
             "Chilaquiles",     "Dobradinha",    "Escalivada",   "Fasolada",
             "Gado_gado",       "Halva",         "Kalua_loaf",   "Lagana_bread",
             "Moqueca",         "Nasi_goreng",   "Okonomiyaki",  "Pastitsio"};
  cat("Food", c.foods,
      {{"originRegion", &c.regions},
       {"mainIngredient", &c.ingredients},
       {"courseType", &c.courses},
       {"servingCount", &c.small_numbers},
       {"originCountry", &c.countries},
       {"variantOf", &c.foods}},
      "isPartOf", &c.countries);

  cat("City", c.cities,
      {{"sisterCity", &c.cities},
       {"country", &c.countries},
       {"leaderName", &c.people},
       {"populationTotal", &c.large_numbers},
       {"dialingPrefix", &c.small_numbers},
       {"foundingDate", &c.date_pool}},
      "country", &c.countries);

  Pool characters = {"Arrowhawk",      "Bolt_Warden",   "Cinder_Fox",
                     "Dusk_Sentinel",  "Ember_Knight",  "Frost_Jackal",
                     "Gale_Runner",    "Hollow_Mask",   "Ion_Matron",
                     "Jade_Falcon",    "Karst_Golem",   "Lumen_Shade"};
  cat("ComicsCharacter", characters,
      {{"homeCity", &c.cities},
       {"creator", &c.people},
       {"alternativeName", &c.people},
       {"firstAppearance", &c.date_pool},
       {"publisher", &c.publishers}},
      "country", &c.countries);

  Pool teams;
  for (const auto& city : take(c.cities, 14, rng))
    for (const char* suffix : {"_Rovers", "_Athletic"})
      teams.push_back(city + suffix);
  cat("SportsTeam", take(teams, 20, rng),
      {{"homeGround", &c.cities},
       {"league", &c.leagues},
       {"manager", &c.people},
       {"foundingDate", &c.date_pool},
       {"memberCount", &c.large_numbers},
       {"shirtSponsor", &c.organisations}},
      "country", &c.countries);

  c.books = {"A_Long_Way_North",    "Ashes_of_Meridian",  "Below_the_Weir",
             "Cartographers_Song",  "Driftwood_Letters",  "Echo_Harbour",
             "Five_Winters",        "Glass_Causeway",     "Hollow_Lantern",
             "Iron_Tides",          "Juniper_Atlas",      "Lantern_Road"};
  cat("WrittenWork", c.books,
      {{"author", &c.people},
       {"publisher", &c.publishers},
       {"language", &c.languages},
       {"publicationDate", &c.date_pool},
       {"numberOfPages", &c.small_numbers},
       {"followedBy", &c.books}},
      "basedIn", &c.cities);

  return c;
}

// Triple count distribution, mean ~= 4.1.
int sample_size(Rng& rng) {
  static const int weights[7] = {8, 12, 17, 21, 18, 14, 10};
  int total = 0;
  for (int w : weights) total += w;
  int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(total)));
  for (int t = 0; t < 7; ++t) {
    r -= weights[t];
    if (r < 0) return t + 1;
  }
  return 7;
}

struct Entry {
  std::string category;
  std::vector<Triple> triples;
};

// One tree-shaped entry: a star around the subject, occasionally extended by
// one chain hop off the anchor object. Every triple introduces a new node.
bool generate_entry(Rng& rng, const Category& cat, Entry& out) {
  const int size = sample_size(rng);
  const std::string& subject = cat.subjects[rng.below(cat.subjects.size())];
  std::set<std::string> used{subject};
  out.category = cat.name;
  out.triples.clear();

  std::vector<int> order(cat.relations.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  rng.shuffle(order);
  // Anchor relation first so chain extension is always well-typed.
  if (auto it = std::find(order.begin(), order.end(), 0); it != order.end())
    std::iter_swap(order.begin(), it);

  auto pick_new = [&](const Pool& pool, std::string& label) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      const std::string& cand = pool[rng.below(pool.size())];
      if (cand.empty()) throw std::runtime_error("datagen: empty label in pool");
      if (used.insert(cand).second) {
        label = cand;
        return true;
      }
    }
    return false;
  };

  for (int t = 0; t < size; ++t) {
    const RelationSpec& rel = cat.relations[order[t % order.size()]];
    std::string obj;
    if (!pick_new(*rel.objects, obj)) return false;
    out.triples.push_back({subject, rel.name, obj});
  }
  const bool chain = size >= 2 && cat.chain_objects && rng.below(10) < 3;
  if (chain) {
    std::string obj;
    if (!pick_new(*cat.chain_objects, obj)) return false;
    out.triples.back() = {out.triples.front().object, cat.chain_relation, obj};
  }
  return true;
}

void write_split_file(const std::string& path, const std::string& category,
                      const std::vector<Entry>& entries) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<benchmark>\n  <entries>\n";
  int eid = 0;
  for (const Entry& e : entries) {
    if (e.category != category) continue;
    out << "    <entry category=\"" << e.category << "\" eid=\"Id" << ++eid
        << "\" size=\"" << e.triples.size() << "\">\n"
        << "      <modifiedtripleset>\n";
    for (const Triple& t : e.triples)
      out << "        <mtriple>" << t.subject << " | " << t.relation << " | "
          << t.object << "</mtriple>\n";
    out << "      </modifiedtripleset>\n    </entry>\n";
  }
  out << "  </entries>\n</benchmark>\n";
}

std::set<char> split_charset(const std::vector<Entry>& entries) {
  std::set<char> chars;
  for (const Entry& e : entries) {
    KnowledgeGraph g = semcom::graph_from_triples(e.triples, "datagen");
    for (char ch : semcom::serialize_for_baseline(g)) chars.insert(ch);
  }
  return chars;
}

bool in_code_alphabet(char ch) {
  return (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') ||
         (ch >= '0' && ch <= '6') || ch == ' ' || ch == '|' || ch == '\n' ||
         ch == '_';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the bundled WebNLG-style sample corpus"};
  std::string out_dir = "data/webnlg-sample";
  std::uint64_t seed = 2025;
  int n_train = 2400, n_dev = 300, n_test = 800;
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--train", n_train, "Training entries");
  app.add_option("--dev", n_dev, "Validation entries");
  app.add_option("--test", n_test, "Test entries");
  CLI11_PARSE(app, argc, argv);

  Rng rng(seed);
  const Corpus corpus = build_corpus(rng);

  std::set<std::string> identities;
  auto generate_split = [&](int count) {
    std::vector<Entry> out;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count) {
      if (++attempts > count * 40)
        throw std::runtime_error("datagen: could not fill split, raise pool sizes");
      const Category& cat =
          corpus.categories[out.size() % corpus.categories.size()];
      Entry e;
      if (!generate_entry(rng, cat, e)) continue;
      KnowledgeGraph g = semcom::graph_from_triples(e.triples, "datagen");
      if (!identities.insert(semcom::graph_identity(g)).second) continue;
      out.push_back(std::move(e));
    }
    return out;
  };

  const std::vector<Entry> train = generate_split(n_train);
  const std::vector<Entry> dev = generate_split(n_dev);
  const std::vector<Entry> test = generate_split(n_test);

  // Corpus invariants: code-alphabet labels and train-covering charset.
  const std::set<char> train_chars = split_charset(train);
  for (char ch : train_chars)
    if (!in_code_alphabet(ch))
      throw std::runtime_error(std::string("datagen: character '") + ch +
                               "' outside the 6-bit alphabet");
  for (const auto* other : {&dev, &test})
    for (char ch : split_charset(*other))
      if (!train_chars.count(ch))
        throw std::runtime_error("datagen: dev/test character missing from train");

  namespace fs = std::filesystem;
  for (const char* sub : {"train", "dev", "test"})
    fs::create_directories(fs::path(out_dir) / sub);
  for (const auto& cat : corpus.categories) {
    write_split_file(out_dir + "/train/webnlg_train_" + cat.name + ".xml",
                     cat.name, train);
    write_split_file(out_dir + "/dev/webnlg_dev_" + cat.name + ".xml", cat.name,
                     dev);
    write_split_file(out_dir + "/test/webnlg_test_" + cat.name + ".xml",
                     cat.name, test);
  }

  // Report the statistics the bit-accounting experiments depend on.
  auto stats = [](const std::vector<Entry>& entries, const char* name) {
    double chars = 0.0, nodes = 0.0, triples = 0.0;
    for (const Entry& e : entries) {
      KnowledgeGraph g = semcom::graph_from_triples(e.triples, "datagen");
      chars += static_cast<double>(semcom::serialize_for_baseline(g).size());
      nodes += g.num_nodes();
      triples += static_cast<double>(e.triples.size());
    }
    const double n = static_cast<double>(entries.size());
    std::cout << name << ": entries=" << entries.size()
              << " mean_triples=" << triples / n << " mean_nodes=" << nodes / n
              << " mean_chars=" << chars / n
              << " chars_per_node=" << chars / nodes << "\n";
  };
  stats(train, "train");
  stats(dev, "dev");
  stats(test, "test");
  return 0;
}
