/// SHA-256 digests (OpenSSL-backed); used for cache keys and manifest binding.
#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace semcom {

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(const std::string& data);
std::string sha256_hex(const std::string& data);
std::string to_hex(const Sha256Digest& d);

}  // namespace semcom
