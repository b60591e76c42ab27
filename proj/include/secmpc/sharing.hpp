#pragma once

#include <utility>
#include <vector>

#include "secmpc/ring.hpp"
#include "secmpc/tensor.hpp"

namespace secmpc {

enum class Party : int { S0 = 0, S1 = 1 };

inline int idx(Party p) { return static_cast<int>(p); }
inline Party other(Party p) { return p == Party::S0 ? Party::S1 : Party::S0; }

// One party's additive share of a tensor of ring elements. `frac` tracks the
// fixed-point scale the values currently live at (kernels temporarily work at
// cfg.f + guard bits).
struct ArithShareTensor {
    Party party = Party::S0;
    FixedCfg cfg;
    Shape shape;
    unsigned frac = 16;
    std::vector<u64> data;

    ArithShareTensor() = default;
    ArithShareTensor(Party p, FixedCfg c, Shape s, unsigned fr)
        : party(p), cfg(c), shape(std::move(s)), frac(fr), data(shape.numel(), 0) {}

    std::size_t numel() const { return data.size(); }
};

// XOR share of per-element bit words (width bits per element).
struct BoolShareTensor {
    Party party = Party::S0;
    FixedCfg cfg;
    Shape shape;
    unsigned width = 64;
    std::vector<u64> data;

    std::size_t numel() const { return data.size(); }
};

using SharePair = std::pair<ArithShareTensor, ArithShareTensor>;

SharePair share_raw(const RingTensor& x, const FixedCfg& cfg, PrfStream& rng, unsigned frac = 0);
SharePair share_tensor(const DoubleTensor& x, const FixedCfg& cfg, PrfStream& rng);
SharePair share_scalar(double x, const FixedCfg& cfg, PrfStream& rng);

RingTensor reconstruct_raw(const ArithShareTensor& s0, const ArithShareTensor& s1);
DoubleTensor reconstruct(const ArithShareTensor& s0, const ArithShareTensor& s1);

std::pair<BoolShareTensor, BoolShareTensor> share_bool(const RingTensor& x, const FixedCfg& cfg,
                                                       PrfStream& rng);
RingTensor reconstruct_bool(const BoolShareTensor& s0, const BoolShareTensor& s1);

// Share-local linear algebra (zero communication).
ArithShareTensor local_add(const ArithShareTensor& a, const ArithShareTensor& b);
ArithShareTensor local_sub(const ArithShareTensor& a, const ArithShareTensor& b);
ArithShareTensor local_neg(const ArithShareTensor& a);

// Public constant added by S0 only.
ArithShareTensor add_const(const ArithShareTensor& a, double c);
ArithShareTensor add_const_raw(const ArithShareTensor& a, u64 v);
// c - x with the constant contributed by S0.
ArithShareTensor sub_from_const(const ArithShareTensor& a, double c);

// Both parties scale their shares.
ArithShareTensor scale_int(const ArithShareTensor& a, i64 k);
// Multiply by a public real encoded at `cfrac` fractional bits, then truncate
// by `cfrac`; preserves the share's own scale.
ArithShareTensor scale_real(const ArithShareTensor& a, double c);
ArithShareTensor scale_real_at(const ArithShareTensor& a, double c, unsigned cfrac);

// Exact rescale between fixed-point scales: up-shift is lossless, down-shift
// truncates share-locally.
ArithShareTensor lift(const ArithShareTensor& a, unsigned extra_frac);
ArithShareTensor drop(const ArithShareTensor& a, unsigned extra_frac);

ArithShareTensor slice(const ArithShareTensor& a, std::size_t offset, std::size_t count);
ArithShareTensor concat(const ArithShareTensor& a, const ArithShareTensor& b);

void check_compatible(const ArithShareTensor& a, const ArithShareTensor& b);

} // namespace secmpc
