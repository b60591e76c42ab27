#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "secmpc/errors.hpp"
#include "secmpc/prf.hpp"

namespace secmpc {

// Fixed-point parameters over Z_{2^l}: l-bit ring, f fractional bits.
struct FixedCfg {
    unsigned l = 64;
    unsigned f = 16;

    void validate() const {
        if (l < 8 || l > 64)
            throw EncodingError("ring width l must be in [8, 64], got " + std::to_string(l));
        if (f >= l || 2 * f > l)
            throw EncodingError("fractional bits f must satisfy f < l and f <= l/2");
    }

    u64 mask() const { return l == 64 ? ~0ull : ((1ull << l) - 1ull); }
    u64 one() const { return 1ull << f; }
    bool operator==(const FixedCfg&) const = default;
};

inline u64 ring_add(const FixedCfg& cfg, u64 a, u64 b) { return (a + b) & cfg.mask(); }
inline u64 ring_sub(const FixedCfg& cfg, u64 a, u64 b) { return (a - b) & cfg.mask(); }
inline u64 ring_mul(const FixedCfg& cfg, u64 a, u64 b) { return (a * b) & cfg.mask(); }
inline u64 ring_neg(const FixedCfg& cfg, u64 a) { return (-a) & cfg.mask(); }

inline i64 to_signed(const FixedCfg& cfg, u64 x) {
    if (cfg.l == 64) return static_cast<i64>(x);
    u64 sign_bit = 1ull << (cfg.l - 1);
    if (x & sign_bit) return static_cast<i64>(x | ~cfg.mask());
    return static_cast<i64>(x & cfg.mask());
}

inline u64 from_signed(const FixedCfg& cfg, i64 x) { return static_cast<u64>(x) & cfg.mask(); }

// round(x * 2^frac) reduced mod 2^l, two's complement for negative x.
// Rounding is half-away-from-zero so the error is symmetric for odd functions.
inline u64 encode_fixed_at(double x, const FixedCfg& cfg, unsigned frac) {
    double scaled = x * std::ldexp(1.0, static_cast<int>(frac));
    double limit = std::ldexp(1.0, static_cast<int>(cfg.l - 1));
    double rounded = std::round(scaled);
    if (!(std::fabs(rounded) < limit))
        throw EncodingError("fixed-point encoding overflow: " + std::to_string(x) + " at " +
                            std::to_string(frac) + " fractional bits in a " + std::to_string(cfg.l) +
                            "-bit ring");
    return from_signed(cfg, static_cast<i64>(rounded));
}

inline u64 encode_fixed(double x, const FixedCfg& cfg) { return encode_fixed_at(x, cfg, cfg.f); }

inline double decode_fixed_at(u64 e, const FixedCfg& cfg, unsigned frac) {
    return std::ldexp(static_cast<double>(to_signed(cfg, e)), -static_cast<int>(frac));
}

inline double decode_fixed(u64 e, const FixedCfg& cfg) { return decode_fixed_at(e, cfg, cfg.f); }

// Sign-preserving right shift by `fbits` with round-to-nearest. Applied by each
// party locally to its own share after a fixed-point product; the share-sum wrap
// produces a large error only with probability ~|value|/2^l.
inline u64 trunc_val(const FixedCfg& cfg, u64 e, unsigned fbits) {
    if (fbits == 0) return e & cfg.mask();
    i64 s = to_signed(cfg, e);
    s += i64{1} << (fbits - 1);
    return from_signed(cfg, s >> fbits);
}

inline u64 uniform_ring(const FixedCfg& cfg, PrfStream& rng) { return rng.next() & cfg.mask(); }

} // namespace secmpc
