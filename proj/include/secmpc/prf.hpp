#pragma once

#include <cstdint>
#include <string_view>

namespace secmpc {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u32 = std::uint32_t;
using u8 = std::uint8_t;

inline u64 mix64(u64 z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Keyed counter-mode generator. Not cryptographic; used as the engine's
// seeded PRF so runs are reproducible across deployment modes.
struct Prf {
    u64 k0 = 0;
    u64 k1 = 0;

    u64 at(u64 ctr) const { return mix64(mix64(ctr ^ k0) + k1); }
};

// Domain-separated key derivation: master seed + label (+ salt).
inline u64 derive_key(u64 master, std::string_view label, u64 salt = 0) {
    u64 h = 0xcbf29ce484222325ull;
    for (char c : label) {
        h ^= static_cast<u8>(c);
        h *= 0x100000001b3ull;
    }
    return mix64(mix64(master ^ h) + salt);
}

inline Prf derive_prf(u64 master, std::string_view label, u64 salt = 0) {
    u64 k = derive_key(master, label, salt);
    return Prf{k, mix64(k)};
}

struct PrfStream {
    Prf prf;
    u64 ctr = 0;

    explicit PrfStream(Prf p) : prf(p) {}
    PrfStream(u64 master, std::string_view label, u64 salt = 0) : prf(derive_prf(master, label, salt)) {}

    u64 next() { return prf.at(ctr++); }

    // Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double next_range(double lo, double hi) { return lo + (hi - lo) * next_unit(); }
};

} // namespace secmpc
