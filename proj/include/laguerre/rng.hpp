#pragma once

#include <array>
#include <cstdint>

namespace laguerre {

// Philox4x32-10 (Salmon et al. 2011) as a pure function of (counter, key).
std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr, std::array<uint32_t, 2> key);

// Standard normals for one simulated path. The stream is a pure function of
// (master seed, path index): block b of path p is philox({b, p}, seed), each
// block yields two 53-bit uniforms and, by Box-Muller, two normals (cos branch
// first). Draws are consumed strictly in order.
class NormalStream {
public:
    NormalStream(uint64_t seed, uint64_t path);

    double next();
    void fill(double* out, int n) {
        for (int i = 0; i < n; ++i) out[i] = next();
    }
    uint64_t blocks_used() const { return block_; }

private:
    std::array<uint32_t, 2> key_;
    uint64_t path_;
    uint64_t block_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace laguerre
