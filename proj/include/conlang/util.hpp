#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace conlang {

// SHA-256 of the input bytes, as lowercase hex.
std::string sha256_hex(std::string_view data);

// FNV-1a, used for deterministic non-cryptographic mixing only.
constexpr uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

constexpr uint64_t splitmix64(uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::string trim(std::string_view s);
std::vector<std::string> split_lines(std::string_view text);
std::string to_hex_u64(uint64_t v);

// Writes content to path atomically (temp file in the same directory, then rename).
void atomic_write_file(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

}  // namespace conlang
