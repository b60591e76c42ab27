#pragma once

#include <array>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "secmpc/ring.hpp"
#include "secmpc/sharing.hpp"
#include "secmpc/tensor.hpp"

namespace secmpc {

// One party's additive shares of a Beaver triple (a, b, c = a*b mod 2^l).
struct BeaverShare {
    u64 a, b, c;
};

// (a, a^2) correlation; a single opening suffices for squaring.
struct SquareShare {
    u64 a, aa;
};

// XOR shares of bits (a, b, c = a AND b).
struct BoolTripleShare {
    u8 a, b, c;
};

// Random bit shared both boolean (XOR) and arithmetically.
struct DaBitShare {
    u8 rb;
    u64 ra;
};

// Sine triple in the internal angle domain: t uniform mod 2^(5+f)
// (theta in [0,32) covers one period of sin(pi*x/10) after the 1.6x rescale),
// u = sin(2*pi*t/2^(5+f)), v = cos(...) shared over the full ring.
struct SineTripleShare {
    u64 t, u, v;
};

struct MatTripleShare {
    std::size_t m, k, n;
    std::vector<u64> a, b, c; // (m*k), (k*n), (m*n)
};

struct MatDims {
    std::size_t m, k, n;
    bool operator==(const MatDims&) const = default;
};

// Randomness consumption counts; doubles as the budget a dry run declares.
struct Budget {
    u64 beaver = 0;
    u64 square = 0;
    u64 bool_triple = 0;
    u64 dabit = 0;
    u64 sine = 0;
    std::vector<MatDims> mats;

    std::vector<u8> serialize() const;
    static Budget deserialize(std::span<const u8> bytes);
    bool operator==(const Budget&) const = default;
};

// One party's pre-generated pool contents as delivered by the dealer process.
struct PoolData {
    std::vector<BeaverShare> beaver;
    std::vector<SquareShare> square;
    std::vector<u8> bools; // packed a | b<<1 | c<<2
    std::vector<DaBitShare> dabits;
    std::vector<SineTripleShare> sines;
    std::vector<MatTripleShare> mats;

    std::vector<u8> serialize() const;
    static PoolData deserialize(std::span<const u8> bytes);
};

// Dealer-side generation: both parties' shares of correlation `index` of each
// kind are a pure function of (master seed, ring config, kind, index), so the
// in-process simulation and the TCP dealer produce identical pools.
namespace dealer_gen {
std::pair<BeaverShare, BeaverShare> beaver_at(u64 master, const FixedCfg& cfg, u64 index);
std::pair<SquareShare, SquareShare> square_at(u64 master, const FixedCfg& cfg, u64 index);
std::pair<BoolTripleShare, BoolTripleShare> bool_at(u64 master, const FixedCfg& cfg, u64 index);
std::pair<DaBitShare, DaBitShare> dabit_at(u64 master, const FixedCfg& cfg, u64 index);
std::pair<SineTripleShare, SineTripleShare> sine_at(u64 master, const FixedCfg& cfg, u64 index);
// Sine triple with a forced plaintext t (theta domain), for tests.
std::pair<SineTripleShare, SineTripleShare> sine_forced(u64 master, const FixedCfg& cfg, u64 index,
                                                        u64 t_theta);
std::pair<MatTripleShare, MatTripleShare> mat_at(u64 master, const FixedCfg& cfg, MatDims dims,
                                                 u64 index);
} // namespace dealer_gen

PoolData generate_pool(u64 master, const FixedCfg& cfg, const Budget& budget, Party party);

// A party's view of its correlated-randomness supply. OnDemand computes shares
// from the seeded PRF as they are consumed (simulation / dry run); Pooled
// serves a pre-delivered pool and hard-errors on exhaustion or re-use.
class CorrelatedSource {
public:
    CorrelatedSource(u64 master, FixedCfg cfg, Party party)
        : master_(master), cfg_(cfg), party_(party) {}

    BeaverShare next_beaver();
    SquareShare next_square();
    BoolTripleShare next_bool();
    DaBitShare next_dabit();
    SineTripleShare next_sine();
    MatTripleShare next_mat(std::size_t m, std::size_t k, std::size_t n);

    void force_next_sine_t(u64 t_theta) { forced_sine_t_ = t_theta; }

    const Budget& consumed() const { return consumed_; }
    Party party() const { return party_; }
    u64 master_seed() const { return master_; }

    // Switch to pooled mode with the given budget; shares come from the same
    // derivation, so contents match an on-demand run. Re-consuming an index
    // (via rewind) is a hard error.
    void load_pool(const Budget& budget);
    // Pooled mode backed by dealer-delivered contents.
    void load_delivered(const Budget& budget, PoolData data);
    bool pooled() const { return pooled_; }
    void rewind_for_reuse_check();
    Budget pool_remaining() const;

private:
    void check_take(std::vector<bool>& taken, u64 index, u64 limit, const char* kind);

    u64 master_;
    FixedCfg cfg_;
    Party party_;
    Budget consumed_{};

    bool pooled_ = false;
    Budget pool_budget_{};
    std::optional<PoolData> delivered_;
    std::vector<bool> taken_beaver_, taken_square_, taken_bool_, taken_dabit_, taken_sine_;
    std::vector<bool> taken_mat_;
    std::optional<u64> forced_sine_t_;
};

} // namespace secmpc
