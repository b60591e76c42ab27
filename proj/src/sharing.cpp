#include "secmpc/sharing.hpp"

namespace secmpc {

void check_compatible(const ArithShareTensor& a, const ArithShareTensor& b) {
    if (a.shape != b.shape)
        throw ReconstructError("share shape mismatch: " + a.shape.str() + " vs " + b.shape.str());
    if (!(a.cfg == b.cfg)) throw ReconstructError("share ring config mismatch");
    if (a.frac != b.frac) throw ReconstructError("share fixed-point scale mismatch");
}

SharePair share_raw(const RingTensor& x, const FixedCfg& cfg, PrfStream& rng, unsigned frac) {
    ArithShareTensor s0(Party::S0, cfg, x.shape, frac);
    ArithShareTensor s1(Party::S1, cfg, x.shape, frac);
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        u64 r = uniform_ring(cfg, rng);
        s0.data[i] = r;
        s1.data[i] = ring_sub(cfg, x.data[i], r);
    }
    return {std::move(s0), std::move(s1)};
}

SharePair share_tensor(const DoubleTensor& x, const FixedCfg& cfg, PrfStream& rng) {
    RingTensor enc(x.shape);
    for (std::size_t i = 0; i < x.data.size(); ++i) enc.data[i] = encode_fixed(x.data[i], cfg);
    return share_raw(enc, cfg, rng, cfg.f);
}

SharePair share_scalar(double x, const FixedCfg& cfg, PrfStream& rng) {
    DoubleTensor t(Shape{1});
    t.data[0] = x;
    return share_tensor(t, cfg, rng);
}

RingTensor reconstruct_raw(const ArithShareTensor& s0, const ArithShareTensor& s1) {
    if (s0.party == s1.party) throw ReconstructError("reconstruction needs shares from distinct parties");
    check_compatible(s0, s1);
    RingTensor out(s0.shape);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = ring_add(s0.cfg, s0.data[i], s1.data[i]);
    return out;
}

DoubleTensor reconstruct(const ArithShareTensor& s0, const ArithShareTensor& s1) {
    RingTensor raw = reconstruct_raw(s0, s1);
    DoubleTensor out(raw.shape);
    for (std::size_t i = 0; i < raw.data.size(); ++i)
        out.data[i] = decode_fixed_at(raw.data[i], s0.cfg, s0.frac);
    return out;
}

std::pair<BoolShareTensor, BoolShareTensor> share_bool(const RingTensor& x, const FixedCfg& cfg,
                                                       PrfStream& rng) {
    BoolShareTensor s0{Party::S0, cfg, x.shape, cfg.l, std::vector<u64>(x.data.size())};
    BoolShareTensor s1{Party::S1, cfg, x.shape, cfg.l, std::vector<u64>(x.data.size())};
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        u64 r = uniform_ring(cfg, rng);
        s0.data[i] = r;
        s1.data[i] = (x.data[i] ^ r) & cfg.mask();
    }
    return {std::move(s0), std::move(s1)};
}

RingTensor reconstruct_bool(const BoolShareTensor& s0, const BoolShareTensor& s1) {
    if (s0.party == s1.party) throw ReconstructError("reconstruction needs shares from distinct parties");
    if (s0.shape != s1.shape) throw ReconstructError("boolean share shape mismatch");
    RingTensor out(s0.shape);
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = (s0.data[i] ^ s1.data[i]) & s0.cfg.mask();
    return out;
}

ArithShareTensor local_add(const ArithShareTensor& a, const ArithShareTensor& b) {
    check_compatible(a, b);
    ArithShareTensor out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = ring_add(a.cfg, a.data[i], b.data[i]);
    return out;
}

ArithShareTensor local_sub(const ArithShareTensor& a, const ArithShareTensor& b) {
    check_compatible(a, b);
    ArithShareTensor out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = ring_sub(a.cfg, a.data[i], b.data[i]);
    return out;
}

ArithShareTensor local_neg(const ArithShareTensor& a) {
    ArithShareTensor out = a;
    for (auto& v : out.data) v = ring_neg(a.cfg, v);
    return out;
}

ArithShareTensor add_const_raw(const ArithShareTensor& a, u64 v) {
    ArithShareTensor out = a;
    if (a.party == Party::S0)
        for (auto& e : out.data) e = ring_add(a.cfg, e, v);
    return out;
}

ArithShareTensor add_const(const ArithShareTensor& a, double c) {
    return add_const_raw(a, encode_fixed_at(c, a.cfg, a.frac));
}

ArithShareTensor sub_from_const(const ArithShareTensor& a, double c) {
    ArithShareTensor out = local_neg(a);
    return add_const(out, c);
}

ArithShareTensor scale_int(const ArithShareTensor& a, i64 k) {
    ArithShareTensor out = a;
    u64 kk = from_signed(a.cfg, k);
    for (auto& v : out.data) v = ring_mul(a.cfg, v, kk);
    return out;
}

ArithShareTensor scale_real_at(const ArithShareTensor& a, double c, unsigned cfrac) {
    u64 ci = encode_fixed_at(c, a.cfg, cfrac);
    ArithShareTensor out = a;
    for (auto& v : out.data) v = trunc_val(a.cfg, ring_mul(a.cfg, v, ci), cfrac);
    return out;
}

ArithShareTensor scale_real(const ArithShareTensor& a, double c) {
    return scale_real_at(a, c, a.cfg.f);
}

ArithShareTensor lift(const ArithShareTensor& a, unsigned extra_frac) {
    if (extra_frac == 0) return a;
    ArithShareTensor out = a;
    out.frac = a.frac + extra_frac;
    for (auto& v : out.data) v = (v << extra_frac) & a.cfg.mask();
    return out;
}

ArithShareTensor drop(const ArithShareTensor& a, unsigned extra_frac) {
    if (extra_frac == 0) return a;
    if (extra_frac > a.frac) throw EncodingError("cannot drop below zero fractional bits");
    ArithShareTensor out = a;
    out.frac = a.frac - extra_frac;
    for (auto& v : out.data) v = trunc_val(a.cfg, v, extra_frac);
    return out;
}

ArithShareTensor slice(const ArithShareTensor& a, std::size_t offset, std::size_t count) {
    if (offset + count > a.numel()) throw ReconstructError("share slice out of range");
    ArithShareTensor out(a.party, a.cfg, vec_shape(count), a.frac);
    std::copy(a.data.begin() + offset, a.data.begin() + offset + count, out.data.begin());
    return out;
}

ArithShareTensor concat(const ArithShareTensor& a, const ArithShareTensor& b) {
    if (!(a.cfg == b.cfg) || a.frac != b.frac || a.party != b.party)
        throw ReconstructError("concat of incompatible shares");
    ArithShareTensor out(a.party, a.cfg, vec_shape(a.numel() + b.numel()), a.frac);
    std::copy(a.data.begin(), a.data.end(), out.data.begin());
    std::copy(b.data.begin(), b.data.end(), out.data.begin() + a.numel());
    return out;
}

} // namespace secmpc
