#include "secmpc/correlated.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

namespace secmpc {

std::vector<u8> Budget::serialize() const {
    std::vector<u8> out;
    auto put = [&](u64 v) {
        for (int i = 0; i < 8; ++i) out.push_back(static_cast<u8>((v >> (8 * i)) & 0xFF));
    };
    put(beaver);
    put(square);
    put(bool_triple);
    put(dabit);
    put(sine);
    put(mats.size());
    for (const auto& d : mats) {
        put(d.m);
        put(d.k);
        put(d.n);
    }
    return out;
}

Budget Budget::deserialize(std::span<const u8> bytes) {
    std::size_t off = 0;
    auto get = [&]() -> u64 {
        if (off + 8 > bytes.size()) throw FormatError("truncated budget message");
        u64 v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<u64>(bytes[off + i]) << (8 * i);
        off += 8;
        return v;
    };
    Budget b;
    b.beaver = get();
    b.square = get();
    b.bool_triple = get();
    b.dabit = get();
    b.sine = get();
    u64 nm = get();
    for (u64 i = 0; i < nm; ++i) {
        MatDims d{};
        d.m = get();
        d.k = get();
        d.n = get();
        b.mats.push_back(d);
    }
    return b;
}

namespace dealer_gen {

std::pair<BeaverShare, BeaverShare> beaver_at(u64 master, const FixedCfg& cfg, u64 index) {
    Prf pa = derive_prf(master, "beaver.a"), pb = derive_prf(master, "beaver.b");
    Prf pa0 = derive_prf(master, "beaver.a0"), pb0 = derive_prf(master, "beaver.b0");
    Prf pc0 = derive_prf(master, "beaver.c0");
    u64 a = pa.at(index) & cfg.mask(), b = pb.at(index) & cfg.mask();
    u64 c = ring_mul(cfg, a, b);
    u64 a0 = pa0.at(index) & cfg.mask(), b0 = pb0.at(index) & cfg.mask(), c0 = pc0.at(index) & cfg.mask();
    return {BeaverShare{a0, b0, c0},
            BeaverShare{ring_sub(cfg, a, a0), ring_sub(cfg, b, b0), ring_sub(cfg, c, c0)}};
}

std::pair<SquareShare, SquareShare> square_at(u64 master, const FixedCfg& cfg, u64 index) {
    Prf pa = derive_prf(master, "square.a");
    Prf pa0 = derive_prf(master, "square.a0"), ps0 = derive_prf(master, "square.s0");
    u64 a = pa.at(index) & cfg.mask();
    u64 s = ring_mul(cfg, a, a);
    u64 a0 = pa0.at(index) & cfg.mask(), s0 = ps0.at(index) & cfg.mask();
    return {SquareShare{a0, s0}, SquareShare{ring_sub(cfg, a, a0), ring_sub(cfg, s, s0)}};
}

std::pair<BoolTripleShare, BoolTripleShare> bool_at(u64 master, const FixedCfg& cfg, u64 index) {
    (void)cfg;
    // Word-batched: one PRF word covers 64 triples per component.
    u64 word = index / 64;
    unsigned bit = static_cast<unsigned>(index % 64);
    auto bit_of = [&](const char* label) -> u8 {
        return static_cast<u8>((derive_prf(master, label).at(word) >> bit) & 1u);
    };
    u8 a = bit_of("bool.a"), b = bit_of("bool.b");
    u8 c = a & b;
    u8 a0 = bit_of("bool.a0"), b0 = bit_of("bool.b0"), c0 = bit_of("bool.c0");
    return {BoolTripleShare{a0, b0, c0},
            BoolTripleShare{static_cast<u8>(a ^ a0), static_cast<u8>(b ^ b0), static_cast<u8>(c ^ c0)}};
}

std::pair<DaBitShare, DaBitShare> dabit_at(u64 master, const FixedCfg& cfg, u64 index) {
    u64 word = index / 64;
    unsigned bit = static_cast<unsigned>(index % 64);
    u8 r = static_cast<u8>((derive_prf(master, "dabit.r").at(word) >> bit) & 1u);
    u8 rb0 = static_cast<u8>((derive_prf(master, "dabit.rb0").at(word) >> bit) & 1u);
    u64 ra0 = derive_prf(master, "dabit.ra0").at(index) & cfg.mask();
    return {DaBitShare{rb0, ra0},
            DaBitShare{static_cast<u8>(r ^ rb0), ring_sub(cfg, static_cast<u64>(r), ra0)}};
}

static std::pair<SineTripleShare, SineTripleShare> sine_from_t(u64 master, const FixedCfg& cfg,
                                                               u64 index, u64 t) {
    u64 dom = 1ull << (5 + cfg.f); // theta period 32 at f fractional bits
    // Offline phase of the sine protocol: S0's shares and S1's t-share come
    // from the keyed PRF; S1's u/v shares are dealer-computed corrections.
    double angle = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(dom);
    u64 u = encode_fixed(std::sin(angle), cfg);
    u64 v = encode_fixed(std::cos(angle), cfg);
    u64 t0 = derive_prf(master, "sine.t0").at(index) & (dom - 1);
    u64 u0 = derive_prf(master, "sine.u0").at(index) & cfg.mask();
    u64 v0 = derive_prf(master, "sine.v0").at(index) & cfg.mask();
    return {SineTripleShare{t0, u0, v0},
            SineTripleShare{(t - t0) & (dom - 1), ring_sub(cfg, u, u0), ring_sub(cfg, v, v0)}};
}

std::pair<SineTripleShare, SineTripleShare> sine_at(u64 master, const FixedCfg& cfg, u64 index) {
    u64 dom = 1ull << (5 + cfg.f);
    u64 t = derive_prf(master, "sine.t").at(index) & (dom - 1);
    return sine_from_t(master, cfg, index, t);
}

std::pair<SineTripleShare, SineTripleShare> sine_forced(u64 master, const FixedCfg& cfg, u64 index,
                                                        u64 t_theta) {
    return sine_from_t(master, cfg, index, t_theta & ((1ull << (5 + cfg.f)) - 1));
}

std::pair<MatTripleShare, MatTripleShare> mat_at(u64 master, const FixedCfg& cfg, MatDims dims,
                                                 u64 index) {
    u64 salt = mix64(mix64(dims.m * 0x9E37u + dims.k) * 0x85EBu + dims.n) + index * 0xC2B2ull;
    auto fill = [&](const char* label, std::size_t n) {
        PrfStream s(master, label, salt);
        std::vector<u64> v(n);
        for (auto& e : v) e = s.next() & cfg.mask();
        return v;
    };
    auto A = fill("mat.a", dims.m * dims.k);
    auto B = fill("mat.b", dims.k * dims.n);
    std::vector<u64> C(dims.m * dims.n, 0);
    for (std::size_t i = 0; i < dims.m; ++i)
        for (std::size_t l = 0; l < dims.k; ++l) {
            u64 av = A[i * dims.k + l];
            for (std::size_t j = 0; j < dims.n; ++j) C[i * dims.n + j] += av * B[l * dims.n + j];
        }
    for (auto& e : C) e &= cfg.mask();
    auto A0 = fill("mat.a0", A.size()), B0 = fill("mat.b0", B.size()), C0 = fill("mat.c0", C.size());
    MatTripleShare s0{dims.m, dims.k, dims.n, A0, B0, C0};
    MatTripleShare s1{dims.m, dims.k, dims.n, std::vector<u64>(A.size()), std::vector<u64>(B.size()),
                      std::vector<u64>(C.size())};
    for (std::size_t i = 0; i < A.size(); ++i) s1.a[i] = ring_sub(cfg, A[i], A0[i]);
    for (std::size_t i = 0; i < B.size(); ++i) s1.b[i] = ring_sub(cfg, B[i], B0[i]);
    for (std::size_t i = 0; i < C.size(); ++i) s1.c[i] = ring_sub(cfg, C[i], C0[i]);
    return {std::move(s0), std::move(s1)};
}

} // namespace dealer_gen

namespace {

struct ByteWriter {
    std::vector<u8> out;
    void u(u64 v) {
        for (int i = 0; i < 8; ++i) out.push_back(static_cast<u8>((v >> (8 * i)) & 0xFF));
    }
    void b(u8 v) { out.push_back(v); }
};

struct ByteReader {
    std::span<const u8> in;
    std::size_t off = 0;
    u64 u() {
        if (off + 8 > in.size()) throw FormatError("truncated pool payload");
        u64 v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<u64>(in[off + i]) << (8 * i);
        off += 8;
        return v;
    }
    u8 b() {
        if (off >= in.size()) throw FormatError("truncated pool payload");
        return in[off++];
    }
};

} // namespace

std::vector<u8> PoolData::serialize() const {
    ByteWriter w;
    w.u(beaver.size());
    for (const auto& t : beaver) {
        w.u(t.a);
        w.u(t.b);
        w.u(t.c);
    }
    w.u(square.size());
    for (const auto& t : square) {
        w.u(t.a);
        w.u(t.aa);
    }
    w.u(bools.size());
    for (u8 t : bools) w.b(t);
    w.u(dabits.size());
    for (const auto& t : dabits) {
        w.b(t.rb);
        w.u(t.ra);
    }
    w.u(sines.size());
    for (const auto& t : sines) {
        w.u(t.t);
        w.u(t.u);
        w.u(t.v);
    }
    w.u(mats.size());
    for (const auto& m : mats) {
        w.u(m.m);
        w.u(m.k);
        w.u(m.n);
        for (u64 v : m.a) w.u(v);
        for (u64 v : m.b) w.u(v);
        for (u64 v : m.c) w.u(v);
    }
    return std::move(w.out);
}

PoolData PoolData::deserialize(std::span<const u8> bytes) {
    ByteReader r{bytes};
    PoolData p;
    p.beaver.resize(r.u());
    for (auto& t : p.beaver) {
        t.a = r.u();
        t.b = r.u();
        t.c = r.u();
    }
    p.square.resize(r.u());
    for (auto& t : p.square) {
        t.a = r.u();
        t.aa = r.u();
    }
    p.bools.resize(r.u());
    for (auto& t : p.bools) t = r.b();
    p.dabits.resize(r.u());
    for (auto& t : p.dabits) {
        t.rb = r.b();
        t.ra = r.u();
    }
    p.sines.resize(r.u());
    for (auto& t : p.sines) {
        t.t = r.u();
        t.u = r.u();
        t.v = r.u();
    }
    p.mats.resize(r.u());
    for (auto& m : p.mats) {
        m.m = r.u();
        m.k = r.u();
        m.n = r.u();
        m.a.resize(m.m * m.k);
        m.b.resize(m.k * m.n);
        m.c.resize(m.m * m.n);
        for (auto& v : m.a) v = r.u();
        for (auto& v : m.b) v = r.u();
        for (auto& v : m.c) v = r.u();
    }
    return p;
}

PoolData generate_pool(u64 master, const FixedCfg& cfg, const Budget& budget, Party party) {
    PoolData p;
    auto pick = [&](auto pair) { return party == Party::S0 ? pair.first : pair.second; };
    for (u64 i = 0; i < budget.beaver; ++i) p.beaver.push_back(pick(dealer_gen::beaver_at(master, cfg, i)));
    for (u64 i = 0; i < budget.square; ++i) p.square.push_back(pick(dealer_gen::square_at(master, cfg, i)));
    for (u64 i = 0; i < budget.bool_triple; ++i) {
        BoolTripleShare t = pick(dealer_gen::bool_at(master, cfg, i));
        p.bools.push_back(static_cast<u8>(t.a | (t.b << 1) | (t.c << 2)));
    }
    for (u64 i = 0; i < budget.dabit; ++i) p.dabits.push_back(pick(dealer_gen::dabit_at(master, cfg, i)));
    for (u64 i = 0; i < budget.sine; ++i) p.sines.push_back(pick(dealer_gen::sine_at(master, cfg, i)));
    for (u64 i = 0; i < budget.mats.size(); ++i)
        p.mats.push_back(pick(dealer_gen::mat_at(master, cfg, budget.mats[i], i)));
    return p;
}

void CorrelatedSource::check_take(std::vector<bool>& taken, u64 index, u64 limit, const char* kind) {
    if (!pooled_) return;
    if (index >= limit)
        throw PoolError(std::string("randomness pool exhausted: ") + kind + " (budget " +
                        std::to_string(limit) + ")");
    if (taken[index])
        throw PoolError(std::string("correlated randomness re-use detected: ") + kind + " index " +
                        std::to_string(index));
    taken[index] = true;
}

BeaverShare CorrelatedSource::next_beaver() {
    u64 i = consumed_.beaver++;
    check_take(taken_beaver_, i, pool_budget_.beaver, "beaver");
    if (delivered_) return delivered_->beaver[i];
    auto [s0, s1] = dealer_gen::beaver_at(master_, cfg_, i);
    return party_ == Party::S0 ? s0 : s1;
}

SquareShare CorrelatedSource::next_square() {
    u64 i = consumed_.square++;
    check_take(taken_square_, i, pool_budget_.square, "square");
    if (delivered_) return delivered_->square[i];
    auto [s0, s1] = dealer_gen::square_at(master_, cfg_, i);
    return party_ == Party::S0 ? s0 : s1;
}

BoolTripleShare CorrelatedSource::next_bool() {
    u64 i = consumed_.bool_triple++;
    check_take(taken_bool_, i, pool_budget_.bool_triple, "bool triple");
    if (delivered_) {
        u8 t = delivered_->bools[i];
        return BoolTripleShare{static_cast<u8>(t & 1), static_cast<u8>((t >> 1) & 1),
                               static_cast<u8>((t >> 2) & 1)};
    }
    auto [s0, s1] = dealer_gen::bool_at(master_, cfg_, i);
    return party_ == Party::S0 ? s0 : s1;
}

DaBitShare CorrelatedSource::next_dabit() {
    u64 i = consumed_.dabit++;
    check_take(taken_dabit_, i, pool_budget_.dabit, "dabit");
    if (delivered_) return delivered_->dabits[i];
    auto [s0, s1] = dealer_gen::dabit_at(master_, cfg_, i);
    return party_ == Party::S0 ? s0 : s1;
}

SineTripleShare CorrelatedSource::next_sine() {
    u64 i = consumed_.sine++;
    check_take(taken_sine_, i, pool_budget_.sine, "sine triple");
    if (forced_sine_t_) {
        u64 t = *forced_sine_t_;
        forced_sine_t_.reset();
        auto [s0, s1] = dealer_gen::sine_forced(master_, cfg_, i, t);
        return party_ == Party::S0 ? s0 : s1;
    }
    if (delivered_) return delivered_->sines[i];
    auto [s0, s1] = dealer_gen::sine_at(master_, cfg_, i);
    return party_ == Party::S0 ? s0 : s1;
}

MatTripleShare CorrelatedSource::next_mat(std::size_t m, std::size_t k, std::size_t n) {
    u64 i = consumed_.mats.size();
    consumed_.mats.push_back({m, k, n});
    if (pooled_) {
        if (i >= pool_budget_.mats.size() || !(pool_budget_.mats[i] == MatDims{m, k, n}))
            throw PoolError("matrix triple pool exhausted or dims mismatch");
        if (taken_mat_[i]) throw PoolError("matrix triple re-use detected");
        taken_mat_[i] = true;
    }
    if (delivered_) return delivered_->mats[i];
    auto [s0, s1] = dealer_gen::mat_at(master_, cfg_, {m, k, n}, i);
    return party_ == Party::S0 ? std::move(s0) : std::move(s1);
}

void CorrelatedSource::load_pool(const Budget& budget) {
    pooled_ = true;
    pool_budget_ = budget;
    taken_beaver_.assign(budget.beaver, false);
    taken_square_.assign(budget.square, false);
    taken_bool_.assign(budget.bool_triple, false);
    taken_dabit_.assign(budget.dabit, false);
    taken_sine_.assign(budget.sine, false);
    taken_mat_.assign(budget.mats.size(), false);
    consumed_ = {};
}

void CorrelatedSource::load_delivered(const Budget& budget, PoolData data) {
    if (data.beaver.size() != budget.beaver || data.square.size() != budget.square ||
        data.bools.size() != budget.bool_triple || data.dabits.size() != budget.dabit ||
        data.sines.size() != budget.sine || data.mats.size() != budget.mats.size())
        throw PoolError("delivered pool does not match budget");
    load_pool(budget);
    delivered_ = std::move(data);
}

void CorrelatedSource::rewind_for_reuse_check() {
    consumed_.beaver = consumed_.beaver > 0 ? consumed_.beaver - 1 : 0;
}

Budget CorrelatedSource::pool_remaining() const {
    if (!pooled_) return {};
    Budget r;
    r.beaver = pool_budget_.beaver - consumed_.beaver;
    r.square = pool_budget_.square - consumed_.square;
    r.bool_triple = pool_budget_.bool_triple - consumed_.bool_triple;
    r.dabit = pool_budget_.dabit - consumed_.dabit;
    r.sine = pool_budget_.sine - consumed_.sine;
    return r;
}

} // namespace secmpc
