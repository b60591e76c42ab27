#pragma once

#include <memory>
#include <span>

#include "secmpc/channel.hpp"
#include "secmpc/comm.hpp"
#include "secmpc/correlated.hpp"
#include "secmpc/ring.hpp"
#include "secmpc/sharing.hpp"

namespace secmpc {

// A live two-party protocol session: one party's channel to its peer, its
// correlated-randomness supply, and the round/bit meter. Both parties run the
// identical protocol program; all intra-step parallelism is message batching.
class Session {
public:
    Session(Party party, FixedCfg cfg, Channel* chan, CorrelatedSource* src)
        : party_(party), cfg_(cfg), chan_(chan), src_(src) {
        cfg.validate();
    }

    Party party() const { return party_; }
    const FixedCfg& cfg() const { return cfg_; }
    CommStats& meter() { return meter_; }
    const CommStats& meter() const { return meter_; }
    CorrelatedSource& randomness() { return *src_; }

    // Simultaneous bidirectional exchange of l-bit ring elements; one round,
    // 2 * n * l payload bits on the meter.
    std::vector<u64> exchange(std::span<const u64> payload);

    // Exchange of values already reduced below 2^bits_per_elt, packed tightly.
    std::vector<u64> exchange_packed(std::span<const u64> payload, unsigned bits_per_elt);

    // Exchange of values reduced modulo modulus * 2^frac_bits; transmits
    // ceil(log2(modulus * 2^frac_bits)) bits per element per direction.
    std::vector<u64> exchange_reduced(std::span<const u64> payload, u64 modulus, unsigned frac_bits);

    MeterScope scope(std::string tag) { return MeterScope(meter_, std::move(tag)); }

private:
    std::vector<u64> do_exchange(std::span<const u64> payload, unsigned bits_per_elt, u8 type);

    Party party_;
    FixedCfg cfg_;
    Channel* chan_;
    CorrelatedSource* src_;
    CommStats meter_;
};

unsigned bits_for_modulus(u64 modulus, unsigned frac_bits);

std::vector<u8> pack_bits(std::span<const u64> vals, unsigned bits_per_elt);
std::vector<u64> unpack_bits(std::span<const u8> bytes, std::size_t count, unsigned bits_per_elt);

// Open a shared tensor to both parties (one exchange; metered like any round).
inline RingTensor open_raw(Session& s, const ArithShareTensor& a) {
    auto peer = s.exchange(a.data);
    RingTensor out(a.shape);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = ring_add(a.cfg, a.data[i], peer[i]);
    return out;
}

inline DoubleTensor open_tensor(Session& s, const ArithShareTensor& a) {
    RingTensor raw = open_raw(s, a);
    DoubleTensor out(raw.shape);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = decode_fixed_at(raw.data[i], a.cfg, a.frac);
    return out;
}

} // namespace secmpc
