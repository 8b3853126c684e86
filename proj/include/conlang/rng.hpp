#pragma once

#include <cstdint>
#include <string>

#include "conlang/util.hpp"

namespace conlang {

/// Deterministic random stream. The draw sequence is a pure function of
/// (seed, stream_label), so distinct labels give independent streams and
/// results are stable across platforms and runs.
class SeededRng {
  public:
    SeededRng(uint64_t seed, std::string stream_label)
        : label_(std::move(stream_label)), state_(seed ^ fnv1a64(label_)) {
        // burn-in so nearby seeds decorrelate
        splitmix64(state_);
        splitmix64(state_);
    }

    uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform integer in [lo, hi], rejection-sampled (exact distribution).
    int uniform_int(int lo, int hi) {
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return lo + static_cast<int>(v % span);
    }

    const std::string& stream_label() const { return label_; }

  private:
    std::string label_;
    uint64_t state_;
};

}  // namespace conlang
