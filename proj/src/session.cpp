#include "secmpc/session.hpp"

#include <bit>

namespace secmpc {

unsigned bits_for_modulus(u64 modulus, unsigned frac_bits) {
    if (modulus == 0) throw ProtocolError("zero modulus");
    unsigned total_l = frac_bits;
    u64 m = modulus;
    // ceil(log2(modulus * 2^frac)): width of (modulus-1) if power of two else width of modulus
    unsigned w = std::bit_width(m - 1);
    if ((m & (m - 1)) != 0) w = std::bit_width(m);
    return total_l + w;
}

std::vector<u8> pack_bits(std::span<const u64> vals, unsigned bits_per_elt) {
    std::vector<u8> out((vals.size() * bits_per_elt + 7) / 8, 0);
    std::size_t bitpos = 0;
    for (u64 v : vals) {
        for (unsigned b = 0; b < bits_per_elt; ++b, ++bitpos) {
            if ((v >> b) & 1ull) out[bitpos / 8] |= static_cast<u8>(1u << (bitpos % 8));
        }
    }
    return out;
}

std::vector<u64> unpack_bits(std::span<const u8> bytes, std::size_t count, unsigned bits_per_elt) {
    std::vector<u64> out(count, 0);
    std::size_t bitpos = 0;
    for (std::size_t i = 0; i < count; ++i) {
        u64 v = 0;
        for (unsigned b = 0; b < bits_per_elt; ++b, ++bitpos) {
            if (bitpos / 8 >= bytes.size()) throw ProtocolError("packed payload shorter than expected");
            if ((bytes[bitpos / 8] >> (bitpos % 8)) & 1u) v |= 1ull << b;
        }
        out[i] = v;
    }
    return out;
}

std::vector<u64> Session::do_exchange(std::span<const u64> payload, unsigned bits_per_elt, u8 type) {
    if (payload.empty()) throw ProtocolError("zero-length exchange");
    auto bytes = pack_bits(payload, bits_per_elt);
    Frame peer = chan_->duplex(type, bytes);
    if (peer.type != type) throw ProtocolError("protocol step mismatch: unexpected message type");
    if (peer.payload.size() != bytes.size())
        throw ProtocolError("protocol step mismatch: payload length " +
                            std::to_string(peer.payload.size()) + " vs " + std::to_string(bytes.size()));
    meter_.add_round(2ull * payload.size() * bits_per_elt);
    // Header plus byte-padding slack, both directions.
    meter_.add_framing_bytes(2 * (frame::kHeaderBytes + bytes.size()) -
                             (2ull * payload.size() * bits_per_elt + 7) / 8 * 2);
    return unpack_bits(peer.payload, payload.size(), bits_per_elt);
}

std::vector<u64> Session::exchange(std::span<const u64> payload) {
    return do_exchange(payload, cfg_.l, frame::kElems);
}

std::vector<u64> Session::exchange_packed(std::span<const u64> payload, unsigned bits_per_elt) {
    if (bits_per_elt == 0 || bits_per_elt > 64) throw ProtocolError("bad packed width");
    u64 lim_mask = bits_per_elt == 64 ? ~0ull : ((1ull << bits_per_elt) - 1);
    for (u64 v : payload)
        if ((v & ~lim_mask) != 0) throw ProtocolError("unreduced packed payload");
    return do_exchange(payload, bits_per_elt, frame::kPacked);
}

std::vector<u64> Session::exchange_reduced(std::span<const u64> payload, u64 modulus,
                                           unsigned frac_bits) {
    unsigned w = bits_for_modulus(modulus, frac_bits);
    u64 bound = (modulus << frac_bits);
    for (u64 v : payload)
        if (v >= bound) throw ProtocolError("unreduced payload for modulus exchange");
    return do_exchange(payload, w, frame::kPacked);
}

} // namespace secmpc
