/**
 * @file checkpoint.hpp
 * @brief Versioned binary model checkpoints.
 *
 * Layout: 8-byte magic "SEMCKPT1", a little-endian u64 header length, a JSON
 * header (experiment config snapshot, vocabulary digest, named parameter
 * shapes), then every parameter's raw doubles in header order. Loading
 * verifies the vocabulary digest so a model is never paired with a different
 * label space than it was trained on.
 */
#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "semcom/train/training.hpp"

namespace semcom::train {

inline constexpr char kCheckpointMagic[9] = "SEMCKPT1";

void save_checkpoint(const std::string& path, const SemanticSystem& system,
                     const nlohmann::json& config_json,
                     const std::string& vocab_digest);

// Reads only the JSON header (config snapshot plus digest).
std::string read_checkpoint_vocab_digest(const std::string& path);
nlohmann::json read_checkpoint_config(const std::string& path);

// Fills the system's parameters in place. Throws when the magic, vocabulary
// digest, parameter names or shapes do not match.
void load_checkpoint(const std::string& path, SemanticSystem& system,
                     const std::string& expected_vocab_digest);

}  // namespace semcom::train
