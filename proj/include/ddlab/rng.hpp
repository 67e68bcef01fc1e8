#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace ddlab {

// Philox4x32-10 counter-based generator. Streams are addressed by
// (seed, chunk index, path index), so any parallel schedule that assigns
// the same path the same address reproduces the same draws bit for bit.
class Philox4x32 {
  public:
    Philox4x32(uint64_t seed, uint32_t chunk, uint32_t path)
        : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
          ctr_{0, 0, path, chunk} {}

    std::array<uint32_t, 4> next_block() {
        std::array<uint32_t, 4> x = ctr_;
        std::array<uint32_t, 2> k = key_;
        for (int round = 0; round < 10; ++round) {
            uint64_t p0 = static_cast<uint64_t>(kMul0) * x[0];
            uint64_t p1 = static_cast<uint64_t>(kMul1) * x[2];
            x = {static_cast<uint32_t>(p1 >> 32) ^ x[1] ^ k[0],
                 static_cast<uint32_t>(p1),
                 static_cast<uint32_t>(p0 >> 32) ^ x[3] ^ k[1],
                 static_cast<uint32_t>(p0)};
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        if (++ctr_[0] == 0) ++ctr_[1]; // 64-bit draw counter
        return x;
    }

  private:
    static constexpr uint32_t kMul0 = 0xD2511F53u;
    static constexpr uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

    std::array<uint32_t, 2> key_;
    std::array<uint32_t, 4> ctr_;
};

// Double-precision draws on top of one Philox stream.
class PathRng {
  public:
    PathRng(uint64_t seed, uint32_t chunk, uint32_t path)
        : gen_(seed, chunk, path) {}

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        uint64_t u = next_u64();
        return static_cast<double>(u >> 11) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double r = std::sqrt(-2.0 * std::log1p(-uniform()));
        double t = 2.0 * 3.141592653589793238462643383279502884 * uniform();
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

  private:
    uint64_t next_u64() {
        if (idx_ >= 4) {
            block_ = gen_.next_block();
            idx_ = 0;
        }
        uint64_t lo = block_[idx_++];
        uint64_t hi = block_[idx_++];
        return (hi << 32) | lo;
    }

    Philox4x32 gen_;
    std::array<uint32_t, 4> block_{};
    int idx_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace ddlab
