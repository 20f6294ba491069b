/**
 * @file checkpoint.cpp
 */
#include "semcom/train/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace semcom::train {

namespace {

using nlohmann::json;

json shape_list(const nn::ParamSet& ps) {
  json arr = json::array();
  for (const nn::Parameter* p : ps.all())
    arr.push_back({{"name", p->name}, {"rows", p->value.rows}, {"cols", p->value.cols}});
  return arr;
}

void write_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

json read_header(std::istream& in, const std::string& path) {
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kCheckpointMagic, 8) != 0)
    throw std::runtime_error("checkpoint: bad magic in " + path);
  const std::uint64_t len = read_u64(in);
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) throw std::runtime_error("checkpoint: truncated header in " + path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw std::runtime_error("checkpoint: corrupt header JSON in " + path);
  return j;
}

void read_params_section(std::istream& in, const json& shapes, nn::ParamSet& ps,
                         const std::string& path) {
  for (const json& entry : shapes) {
    const std::string name = entry.at("name").get<std::string>();
    const int rows = entry.at("rows").get<int>();
    const int cols = entry.at("cols").get<int>();
    if (!ps.has(name))
      throw std::runtime_error("checkpoint: parameter '" + name +
                               "' not present in this model (" + path + ")");
    nn::Parameter& p = ps.get(name);
    if (p.value.rows != rows || p.value.cols != cols)
      throw std::runtime_error("checkpoint: shape mismatch for '" + name + "' in " + path);
    in.read(reinterpret_cast<char*>(p.value.data()),
            static_cast<std::streamsize>(p.value.size() * sizeof(double)));
    if (!in) throw std::runtime_error("checkpoint: truncated data in " + path);
  }
}

}  // namespace

void save_checkpoint(const std::string& path, const SemanticSystem& system,
                     const json& config_json, const std::string& vocab_digest) {
  json header;
  header["config"] = config_json;
  header["vocab_digest"] = vocab_digest;
  header["params"] = shape_list(system.params());
  header["mine_params"] = shape_list(system.mine_params());
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
  out.write(kCheckpointMagic, 8);
  write_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const nn::Parameter* p : system.params().all())
    out.write(reinterpret_cast<const char*>(p->value.data()),
              static_cast<std::streamsize>(p->value.size() * sizeof(double)));
  for (const nn::Parameter* p : system.mine_params().all())
    out.write(reinterpret_cast<const char*>(p->value.data()),
              static_cast<std::streamsize>(p->value.size() * sizeof(double)));
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

std::string read_checkpoint_vocab_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  return read_header(in, path).at("vocab_digest").get<std::string>();
}

json read_checkpoint_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  return read_header(in, path).at("config");
}

void load_checkpoint(const std::string& path, SemanticSystem& system,
                     const std::string& expected_vocab_digest) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  const json header = read_header(in, path);
  const std::string digest = header.at("vocab_digest").get<std::string>();
  if (digest != expected_vocab_digest)
    throw std::runtime_error(
        "checkpoint: vocabulary mismatch (checkpoint " + digest.substr(0, 12) +
        "..., current " + expected_vocab_digest.substr(0, 12) + "...) in " + path);
  read_params_section(in, header.at("params"), system.params(), path);
  read_params_section(in, header.at("mine_params"), system.mine_params(), path);
}

}  // namespace semcom::train
