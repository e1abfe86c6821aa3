#include "laguerre/rng.hpp"

#include <cmath>

namespace laguerre {

namespace {

constexpr uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
constexpr uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
    const uint64_t p = uint64_t(a) * uint64_t(b);
    hi = uint32_t(p >> 32);
    lo = uint32_t(p);
}

// (0, 1]
inline double to_unit(uint32_t hi, uint32_t lo) {
    const uint64_t x = (uint64_t(hi) << 32 | lo) >> 11;
    return (double(x) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> c, std::array<uint32_t, 2> k) {
    for (int r = 0; r < 10; ++r) {
        uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kM0, c[0], hi0, lo0);
        mulhilo(kM1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += kW0;
        k[1] += kW1;
    }
    return c;
}

NormalStream::NormalStream(uint64_t seed, uint64_t path)
    : key_{uint32_t(seed), uint32_t(seed >> 32)}, path_(path) {}

double NormalStream::next() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const auto r = philox4x32({uint32_t(block_), uint32_t(block_ >> 32), uint32_t(path_), uint32_t(path_ >> 32)}, key_);
    ++block_;
    const double u1 = to_unit(r[0], r[1]), u2 = to_unit(r[2], r[3]);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double th = 6.283185307179586476925 * u2;
    cached_ = rad * std::sin(th);
    has_cached_ = true;
    return rad * std::cos(th);
}

}  // namespace laguerre
