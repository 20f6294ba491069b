/**
 * @file config.cpp
 */
#include "semcom/eval/config.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace semcom::eval {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError("config: " + where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("config: unknown key '" + where + "." + it.key() + "'");
}

template <typename T>
T take(const json& j, const std::string& where, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config: bad value for '" + where + "." + key + "': " + e.what());
  }
}

}  // namespace

train::SystemConfig ExperimentConfig::system_config() const {
  train::SystemConfig s;
  s.encoder = encoder;
  s.channel = channel;
  s.decoder = decoder;
  s.mine = mine;
  s.init_seed = init_seed;
  return s;
}

nlohmann::json ExperimentConfig::to_json() const {
  json j;
  j["dataset"] = {{"dir", dataset.dir},
                  {"embedder", dataset.embedder},
                  {"cache", dataset.cache},
                  {"max_train_graphs", dataset.max_train_graphs},
                  {"max_eval_graphs", dataset.max_eval_graphs}};
  j["encoder"] = {{"variant", encoders::variant_name(encoder.variant)},
                  {"d_z", encoder.d_z},
                  {"layers", encoder.num_gnn_layers},
                  {"hidden", encoder.hidden},
                  {"reverse_edges", encoder.reverse_edges}};
  j["channel"] = {{"snr_db", channel.snr_db},
                  {"noiseless", channel.noiseless},
                  {"k", channel.k},
                  {"hidden", channel.hidden},
                  {"seed", channel.seed}};
  j["decoder"] = {{"node_hidden", decoder.node_hidden},
                  {"rel_heads", decoder.rel_heads},
                  {"rel_ff_hidden", decoder.rel_ff_hidden}};
  j["mine"] = {{"hidden", mine.hidden}, {"ema_decay", mine.ema_decay}};
  j["train"] = {{"alpha", train.alpha},
                {"batch_size", train.batch_size},
                {"lr_e2e", train.lr_e2e},
                {"lr_mine", train.lr_mine},
                {"epochs", train.epochs},
                {"seed", train.seed},
                {"weight_none_class", train.weight_none_class}};
  j["eval"] = {{"bits_per_symbol", eval.bits_per_symbol},
               {"draw_seed", eval.draw_seed},
               {"batch_size", eval.batch_size},
               {"split", eval.split}};
  j["run_dir"] = run_dir;
  j["init_seed"] = init_seed;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  check_keys(j, "", {"dataset", "encoder", "channel", "decoder", "mine", "train",
                     "eval", "run_dir", "init_seed"});
  ExperimentConfig c;
  if (j.contains("dataset")) {
    const json& d = j.at("dataset");
    check_keys(d, "dataset",
               {"dir", "embedder", "cache", "max_train_graphs", "max_eval_graphs"});
    c.dataset.dir = take<std::string>(d, "dataset", "dir", c.dataset.dir);
    c.dataset.embedder = take<std::string>(d, "dataset", "embedder", c.dataset.embedder);
    c.dataset.cache = take<std::string>(d, "dataset", "cache", c.dataset.cache);
    c.dataset.max_train_graphs =
        take<int>(d, "dataset", "max_train_graphs", c.dataset.max_train_graphs);
    c.dataset.max_eval_graphs =
        take<int>(d, "dataset", "max_eval_graphs", c.dataset.max_eval_graphs);
  }
  if (j.contains("encoder")) {
    const json& d = j.at("encoder");
    check_keys(d, "encoder", {"variant", "d_z", "layers", "hidden", "reverse_edges"});
    try {
      c.encoder.variant = encoders::parse_variant(
          take<std::string>(d, "encoder", "variant", "llm_gnn"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    c.encoder.d_z = take<int>(d, "encoder", "d_z", c.encoder.d_z);
    c.encoder.num_gnn_layers = take<int>(d, "encoder", "layers", c.encoder.num_gnn_layers);
    c.encoder.hidden = take<int>(d, "encoder", "hidden", c.encoder.hidden);
    c.encoder.reverse_edges =
        take<bool>(d, "encoder", "reverse_edges", c.encoder.reverse_edges);
    if (c.encoder.d_z < 1 || c.encoder.num_gnn_layers < 1 || c.encoder.hidden < 1)
      throw ConfigError("config: encoder dimensions must be positive");
  }
  if (j.contains("channel")) {
    const json& d = j.at("channel");
    check_keys(d, "channel", {"snr_db", "noiseless", "k", "hidden", "seed"});
    c.channel.snr_db = take<double>(d, "channel", "snr_db", c.channel.snr_db);
    c.channel.noiseless = take<bool>(d, "channel", "noiseless", c.channel.noiseless);
    c.channel.k = take<int>(d, "channel", "k", c.channel.k);
    c.channel.hidden = take<int>(d, "channel", "hidden", c.channel.hidden);
    c.channel.seed = take<std::uint64_t>(d, "channel", "seed", c.channel.seed);
    if (c.channel.k < 1) throw ConfigError("config: channel.k must be >= 1");
  }
  if (j.contains("decoder")) {
    const json& d = j.at("decoder");
    check_keys(d, "decoder", {"node_hidden", "rel_heads", "rel_ff_hidden"});
    c.decoder.node_hidden = take<int>(d, "decoder", "node_hidden", c.decoder.node_hidden);
    c.decoder.rel_heads = take<int>(d, "decoder", "rel_heads", c.decoder.rel_heads);
    c.decoder.rel_ff_hidden =
        take<int>(d, "decoder", "rel_ff_hidden", c.decoder.rel_ff_hidden);
  }
  if (j.contains("mine")) {
    const json& d = j.at("mine");
    check_keys(d, "mine", {"hidden", "ema_decay"});
    c.mine.hidden = take<int>(d, "mine", "hidden", c.mine.hidden);
    c.mine.ema_decay = take<double>(d, "mine", "ema_decay", c.mine.ema_decay);
    if (c.mine.ema_decay <= 0.0 || c.mine.ema_decay >= 1.0)
      throw ConfigError("config: mine.ema_decay must be in (0, 1)");
  }
  if (j.contains("train")) {
    const json& d = j.at("train");
    check_keys(d, "train",
               {"alpha", "batch_size", "lr_e2e", "lr_mine", "epochs", "seed",
                "weight_none_class"});
    c.train.alpha = take<double>(d, "train", "alpha", c.train.alpha);
    c.train.batch_size = take<int>(d, "train", "batch_size", c.train.batch_size);
    c.train.lr_e2e = take<double>(d, "train", "lr_e2e", c.train.lr_e2e);
    c.train.lr_mine = take<double>(d, "train", "lr_mine", c.train.lr_mine);
    c.train.epochs = take<int>(d, "train", "epochs", c.train.epochs);
    c.train.seed = take<std::uint64_t>(d, "train", "seed", c.train.seed);
    c.train.weight_none_class =
        take<bool>(d, "train", "weight_none_class", c.train.weight_none_class);
    if (c.train.alpha < 0.0) throw ConfigError("config: train.alpha must be >= 0");
    if (c.train.batch_size < 1) throw ConfigError("config: train.batch_size must be >= 1");
    if (c.train.epochs < 0) throw ConfigError("config: train.epochs must be >= 0");
  }
  if (j.contains("eval")) {
    const json& d = j.at("eval");
    check_keys(d, "eval", {"bits_per_symbol", "draw_seed", "batch_size", "split"});
    c.eval.bits_per_symbol = take<int>(d, "eval", "bits_per_symbol", c.eval.bits_per_symbol);
    c.eval.draw_seed = take<std::uint64_t>(d, "eval", "draw_seed", c.eval.draw_seed);
    c.eval.batch_size = take<int>(d, "eval", "batch_size", c.eval.batch_size);
    c.eval.split = take<std::string>(d, "eval", "split", c.eval.split);
    if (c.eval.bits_per_symbol < 1)
      throw ConfigError("config: eval.bits_per_symbol must be >= 1");
    if (c.eval.batch_size < 1) throw ConfigError("config: eval.batch_size must be >= 1");
    if (c.eval.split != "train" && c.eval.split != "validation" && c.eval.split != "test")
      throw ConfigError("config: eval.split must be train, validation or test");
  }
  c.run_dir = take<std::string>(j, "", "run_dir", c.run_dir);
  c.init_seed = take<std::uint64_t>(j, "", "init_seed", c.init_seed);
  return c;
}

void apply_override(nlohmann::json& j, const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("config: override must look like section.key=value: " + spec);
  const std::string path = spec.substr(0, eq);
  const std::string value = spec.substr(eq + 1);

  json* node = &j;
  std::size_t pos = 0;
  while (true) {
    const std::size_t dot = path.find('.', pos);
    const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
    if (key.empty()) throw ConfigError("config: empty key in override: " + spec);
    if (dot == std::string::npos) {
      json parsed = json::parse(value, nullptr, false);
      (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
      return;
    }
    node = &(*node)[key];
    pos = dot + 1;
  }
}

ExperimentConfig ExperimentConfig::load(const std::string& path,
                                        const std::vector<std::string>& overrides) {
  json j = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config: invalid JSON in " + path);
  }
  for (const std::string& o : overrides) apply_override(j, o);
  return from_json(j);
}

void ExperimentConfig::save(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ConfigError("config: cannot write " + path);
  out << to_json().dump(2) << '\n';
}

}  // namespace semcom::eval
