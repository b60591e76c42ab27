#include "secmpc/nonlinear.hpp"

#include <cmath>
#include <numbers>

namespace secmpc {

ArithShareTensor sum_elems(const ArithShareTensor& a) {
    ArithShareTensor out(a.party, a.cfg, Shape{1}, a.frac);
    u64 acc = 0;
    for (u64 v : a.data) acc += v;
    out.data[0] = acc & a.cfg.mask();
    return out;
}

ArithShareTensor div_pow2(const ArithShareTensor& a, unsigned k) {
    ArithShareTensor out = a;
    for (auto& v : out.data) v = trunc_val(a.cfg, v, k);
    return out;
}

// ---------------- comparison circuit ----------------

namespace {

// XOR-shared bit lane over a batch of elements, one byte per element.
using Lane = std::vector<u8>;

struct GateBatch {
    std::vector<const Lane*> xs, ys;
    std::vector<Lane*> outs;

    void add(const Lane& x, const Lane& y, Lane& out) {
        xs.push_back(&x);
        ys.push_back(&y);
        outs.push_back(&out);
    }
};

// One communication round of AND gates: open d = x^a, e = y^b for every gate,
// then z = j*(d&e) ^ d&y ^ e&x ^ c.
void run_and_round(Session& s, GateBatch& batch, std::size_t n) {
    std::size_t gates = batch.xs.size();
    std::vector<u64> opening(gates * n);
    std::vector<BoolTripleShare> trips(gates * n);
    for (std::size_t g = 0; g < gates; ++g) {
        const Lane& x = *batch.xs[g];
        const Lane& y = *batch.ys[g];
        for (std::size_t e = 0; e < n; ++e) {
            BoolTripleShare t = s.randomness().next_bool();
            trips[g * n + e] = t;
            u64 d = (x[e] ^ t.a) & 1u;
            u64 ee = (y[e] ^ t.b) & 1u;
            opening[g * n + e] = d | (ee << 1);
        }
    }
    std::vector<u64> peer = s.exchange_packed(opening, 2);
    bool j1 = s.party() == Party::S1;
    for (std::size_t g = 0; g < gates; ++g) {
        const Lane& x = *batch.xs[g];
        const Lane& y = *batch.ys[g];
        Lane& z = *batch.outs[g];
        z.assign(n, 0);
        for (std::size_t e = 0; e < n; ++e) {
            u64 mine = opening[g * n + e], theirs = peer[g * n + e];
            u8 d = static_cast<u8>((mine ^ theirs) & 1u);
            u8 ee = static_cast<u8>(((mine ^ theirs) >> 1) & 1u);
            const BoolTripleShare& t = trips[g * n + e];
            u8 v = static_cast<u8>((d & y[e]) ^ (ee & x[e]) ^ t.c);
            if (j1) v ^= static_cast<u8>(d & ee);
            z[e] = v & 1u;
        }
    }
}

Lane lane_xor(const Lane& a, const Lane& b) {
    Lane out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

// Binary addition of the two parties' arithmetic shares under XOR sharing:
// party j's operand bits are its own share, so its XOR-share of operand A (B)
// is the bit itself for j=0 (j=1) and zero otherwise. Returns all sum-bit
// lanes. Kogge-Stone with the leaf generate/propagate fused into the first
// prefix layer: log2(l) AND rounds total.
std::vector<Lane> binary_add_shares(Session& s, const std::vector<u64>& own_share) {
    const unsigned l = s.cfg().l;
    const std::size_t n = own_share.size();
    const bool is0 = s.party() == Party::S0;

    std::vector<Lane> A(l, Lane(n, 0)), B(l, Lane(n, 0));
    for (unsigned i = 0; i < l; ++i) {
        Lane& mine = is0 ? A[i] : B[i];
        for (std::size_t e = 0; e < n; ++e) mine[e] = static_cast<u8>((own_share[e] >> i) & 1u);
    }

    // Original propagate lanes (free) kept for the sum bits.
    std::vector<Lane> P0(l);
    for (unsigned i = 0; i < l; ++i) P0[i] = lane_xor(A[i], B[i]);

    // Fused first layer: windows of span 2 ending at each position.
    // G[i] = A_i B_i ^ (A_i A_{i-1}) & B_{i-1} ^ A_{i-1} & (B_i B_{i-1})
    // P[i] = A_i A_{i-1} ^ A_i & B_{i-1} ^ A_{i-1} & B_i ^ B_i B_{i-1}
    // where same-operand products are party-local lanes.
    std::vector<Lane> G(l), P(l);
    std::vector<Lane> aa(l, Lane(n, 0)), bb(l, Lane(n, 0));
    for (unsigned i = 1; i < l; ++i) {
        if (is0)
            for (std::size_t e = 0; e < n; ++e) aa[i][e] = static_cast<u8>(A[i][e] & A[i - 1][e]);
        else
            for (std::size_t e = 0; e < n; ++e) bb[i][e] = static_cast<u8>(B[i][e] & B[i - 1][e]);
    }
    std::vector<Lane> t1(l), t2(l), t3(l), p1(l), p2(l);
    {
        GateBatch batch;
        batch.add(A[0], B[0], G[0]);
        for (unsigned i = 1; i < l; ++i) {
            batch.add(A[i], B[i], t1[i]);
            batch.add(aa[i], B[i - 1], t2[i]);
            batch.add(A[i - 1], bb[i], t3[i]);
            batch.add(A[i], B[i - 1], p1[i]);
            batch.add(A[i - 1], B[i], p2[i]);
        }
        run_and_round(s, batch, n);
    }
    P[0] = P0[0];
    for (unsigned i = 1; i < l; ++i) {
        G[i] = lane_xor(lane_xor(t1[i], t2[i]), t3[i]);
        P[i] = lane_xor(lane_xor(p1[i], p2[i]), lane_xor(aa[i], bb[i]));
    }

    // Remaining prefix layers, spans 2, 4, ..., l/2.
    for (unsigned d = 2; d < l; d *= 2) {
        std::vector<Lane> pg(l), pp(l);
        GateBatch batch;
        for (unsigned i = d; i < l; ++i) {
            batch.add(P[i], G[i - d], pg[i]);
            batch.add(P[i], P[i - d], pp[i]);
        }
        run_and_round(s, batch, n);
        for (unsigned i = l; i-- > d;) {
            G[i] = lane_xor(G[i], pg[i]);
            P[i] = pp[i];
        }
    }

    // s_0 = P0_0; s_i = P0_i ^ carry_i with carry_i = G[i-1] over [0..i-1].
    std::vector<Lane> sum(l);
    sum[0] = P0[0];
    for (unsigned i = 1; i < l; ++i) sum[i] = lane_xor(P0[i], G[i - 1]);
    return sum;
}

// daBit conversion of an XOR-shared bit lane to arithmetic shares (scale 0).
ArithShareTensor bit_to_arith(Session& s, const Lane& bits, const Shape& shape) {
    const FixedCfg& cfg = s.cfg();
    std::size_t n = bits.size();
    std::vector<u64> opening(n);
    std::vector<DaBitShare> dab(n);
    for (std::size_t e = 0; e < n; ++e) {
        dab[e] = s.randomness().next_dabit();
        opening[e] = (bits[e] ^ dab[e].rb) & 1u;
    }
    std::vector<u64> peer = s.exchange_packed(opening, 1);
    ArithShareTensor out(s.party(), cfg, shape, 0);
    for (std::size_t e = 0; e < n; ++e) {
        u64 m = (opening[e] ^ peer[e]) & 1u;
        // b = m + r - 2 m r, with public m contributed by S0
        u64 v = ring_mul(cfg, ring_sub(cfg, 1, 2 * m), dab[e].ra);
        if (s.party() == Party::S0) v = ring_add(cfg, v, m);
        out.data[e] = v;
    }
    return out;
}

ArithShareTensor sign_bit_indicator(Session& s, const ArithShareTensor& z) {
    auto sum = binary_add_shares(s, z.data);
    return bit_to_arith(s, sum[s.cfg().l - 1], z.shape);
}

} // namespace

ArithShareTensor slt(Session& s, const ArithShareTensor& x, const ArithShareTensor& y) {
    return sign_bit_indicator(s, local_sub(x, y));
}

ArithShareTensor slt_const(Session& s, const ArithShareTensor& x, double c) {
    ArithShareTensor z = x;
    if (s.party() == Party::S0) {
        u64 ce = encode_fixed_at(c, x.cfg, x.frac);
        for (auto& v : z.data) v = ring_sub(x.cfg, v, ce);
    }
    return sign_bit_indicator(s, z);
}

BoolShareTensor a2b(Session& s, const ArithShareTensor& x) {
    auto sum = binary_add_shares(s, x.data);
    BoolShareTensor out{s.party(), x.cfg, x.shape, x.cfg.l, std::vector<u64>(x.numel(), 0)};
    for (unsigned i = 0; i < x.cfg.l; ++i)
        for (std::size_t e = 0; e < x.numel(); ++e)
            out.data[e] |= static_cast<u64>(sum[i][e] & 1u) << i;
    return out;
}

ArithShareTensor smax(Session& s, const ArithShareTensor& x) {
    if (x.numel() == 0) throw ProtocolError("smax of empty vector");
    ArithShareTensor cur = x;
    while (cur.numel() > 1) {
        std::size_t pairs = cur.numel() / 2;
        ArithShareTensor a(s.party(), cur.cfg, vec_shape(pairs), cur.frac);
        ArithShareTensor b(s.party(), cur.cfg, vec_shape(pairs), cur.frac);
        for (std::size_t i = 0; i < pairs; ++i) {
            a.data[i] = cur.data[2 * i];
            b.data[i] = cur.data[2 * i + 1];
        }
        // max(a,b) = b + (a-b) * 1{b < a}
        ArithShareTensor ind = slt(s, b, a);
        ArithShareTensor diff = local_sub(a, b);
        ArithShareTensor sel = smul_raw(s, diff, ind);
        ArithShareTensor next(s.party(), cur.cfg, vec_shape(pairs + cur.numel() % 2), cur.frac);
        for (std::size_t i = 0; i < pairs; ++i)
            next.data[i] = ring_add(cur.cfg, b.data[i], sel.data[i]);
        if (cur.numel() % 2) next.data[pairs] = cur.data[cur.numel() - 1];
        cur = std::move(next);
    }
    return cur;
}

ArithShareTensor sexp(Session& s, const ArithShareTensor& x, unsigned guard_bits) {
    // Fractional-bit schedule. Intermediates reach e^(|x|/2^(8-k)) at step k,
    // and a share-local truncation of a raw value V wraps with probability
    // V/2^l, so each step's scale keeps its worst-case raw square near 2^46
    // for |x| <= 16: fine guards early (values near 1), tapering to f-3 for
    // the final squaring where values are large and relative error is slack.
    static constexpr int kGuard[8] = {6, 6, 6, 6, 5, 4, 3, -3};
    int g0 = std::min<int>(guard_bits, kGuard[0]);
    ArithShareTensor y = lift(x, static_cast<unsigned>(g0));
    y = add_const(div_pow2(y, 8), 1.0);
    int cur = g0;
    for (int k = 0; k < 8; ++k) {
        int want = std::min<int>(std::min<int>(guard_bits, kGuard[k]), cur);
        if (cur > want) {
            y = drop(y, static_cast<unsigned>(cur - want));
            cur = want;
        }
        y = ssquare(s, y);
    }
    if (cur >= 0) return drop(y, static_cast<unsigned>(cur));
    return lift(y, static_cast<unsigned>(-cur));
}

ArithShareTensor ssin_period20(Session& s, const ArithShareTensor& x) {
    const FixedCfg& cfg = s.cfg();
    // Rescale the argument so the period becomes 32: sin(pi*x/10) = sin(2*pi*theta/32),
    // theta = 1.6*x. The opening modulus 32*2^f is then exact under ring wraps.
    ArithShareTensor theta = scale_real(x, 1.6);
    const u64 dom = 1ull << (5 + cfg.f);
    std::size_t n = x.numel();

    std::vector<SineTripleShare> trips(n);
    std::vector<u64> w(n);
    std::vector<u64> us(n), vs(n);
    for (std::size_t i = 0; i < n; ++i) {
        trips[i] = s.randomness().next_sine();
        w[i] = (theta.data[i] - trips[i].t) & (dom - 1);
        us[i] = trips[i].u;
        vs[i] = trips[i].v;
    }
    std::vector<u64> peer = s.exchange_reduced(w, 32, cfg.f);

    ArithShareTensor out(s.party(), cfg, x.shape, cfg.f);
    for (std::size_t i = 0; i < n; ++i) {
        u64 delta = (w[i] + peer[i]) & (dom - 1);
        double ang = 2.0 * std::numbers::pi * static_cast<double>(delta) / static_cast<double>(dom);
        // sin(theta) = sin(delta)cos(t) + cos(delta)sin(t)
        u64 pc = encode_fixed(std::sin(ang), cfg);
        u64 qc = encode_fixed(std::cos(ang), cfg);
        u64 a = trunc_val(cfg, ring_mul(cfg, vs[i], pc), cfg.f);
        u64 b = trunc_val(cfg, ring_mul(cfg, us[i], qc), cfg.f);
        out.data[i] = ring_add(cfg, a, b);
    }
    return out;
}

ArithShareTensor srecip_newton(Session& s, const ArithShareTensor& x, unsigned iters,
                               unsigned guard_bits) {
    // y0 = 3 e^(1/2 - x) + 0.003. Newton contracts, so only the last step's
    // noise matters; the small guard keeps y*m raw values wrap-safe for
    // quotients up to 2^6.
    ArithShareTensor e = sexp(s, sub_from_const(x, 0.5));
    ArithShareTensor y = add_const(scale_real(e, 3.0), 0.003);
    ArithShareTensor Y = lift(y, guard_bits);
    ArithShareTensor X = lift(x, guard_bits);
    for (unsigned i = 0; i < iters; ++i) {
        ArithShareTensor xy = smul(s, X, Y);
        Y = smul(s, Y, sub_from_const(xy, 2.0));
    }
    return drop(Y, guard_bits);
}

ArithShareTensor srsqrt_newton(Session& s, const ArithShareTensor& x, unsigned iters,
                               unsigned guard_bits) {
    // y0 = 2.2 e^(-(x/2 + 0.2)) + 0.198046875
    ArithShareTensor arg = local_neg(add_const(div_pow2(x, 1), 0.2));
    ArithShareTensor e = sexp(s, arg);
    ArithShareTensor y = add_const(scale_real(e, 2.2), 0.198046875);
    ArithShareTensor Y = lift(y, guard_bits);
    ArithShareTensor X = lift(x, guard_bits);
    for (unsigned i = 0; i < iters; ++i) {
        ArithShareTensor y2 = ssquare(s, Y);
        ArithShareTensor xy2 = smul(s, X, y2);
        Y = smul(s, Y, div_pow2(sub_from_const(xy2, 3.0), 1));
    }
    return drop(Y, guard_bits);
}

ArithShareTensor ssqrt_newton(Session& s, const ArithShareTensor& x, unsigned iters,
                              unsigned guard_bits) {
    ArithShareTensor r = srsqrt_newton(s, x, iters, guard_bits);
    return smul(s, x, r);
}

namespace {

// Deflate by the quantized 1/eta and lift to frac+g in one step: multiply by
// round(2^(frac+g)/eta) and truncate by frac. The same constant serves the
// numerator and denominator lines, so their ratio is exact.
ArithShareTensor deflate_lift(const ArithShareTensor& a, double eta, unsigned g) {
    double c = 1.0 / eta;
    u64 ci = encode_fixed_at(c, a.cfg, a.frac + g);
    ArithShareTensor out = a;
    out.frac = a.frac + g;
    for (auto& v : out.data) v = trunc_val(a.cfg, ring_mul(a.cfg, v, ci), a.frac);
    return out;
}

} // namespace

ArithShareTensor gs_div(Session& s, const ArithShareTensor& p, const ArithShareTensor& q,
                        const GoldschmidtParams& params) {
    if (!(q.numel() == 1 || q.shape == p.shape))
        throw ProtocolError("gs_div denominator must be scalar or match numerator shape");
    unsigned g = params.guard_bits;
    ArithShareTensor P = deflate_lift(p, params.eta, g);
    ArithShareTensor Qs = deflate_lift(q, params.eta, g);
    bool bc = q.numel() == 1 && p.numel() != 1;
    for (unsigned i = 0; i < params.t; ++i) {
        ArithShareTensor m = sub_from_const(Qs, 2.0);
        ArithShareTensor mp = bc ? broadcast(m, p.numel()) : m;
        mp.shape = P.shape;
        auto zz = smul_batch(s, {{&P, &mp}, {&Qs, &m}});
        P = std::move(zz[0]);
        Qs = std::move(zz[1]);
    }
    return drop(P, g);
}

ArithShareTensor gs_rsqrt(Session& s, const ArithShareTensor& q, const GoldschmidtParams& params) {
    unsigned g = params.guard_bits;
    // The iteration is run on e = 1 - q: near the upper deflation edge the
    // direct q-line squeezes q1 = q0((3-q0)/2)^2 down to ~1e-4, which keeps
    // only a few significant bits at any wrap-safe scale, while e stays O(1)
    // along the whole trajectory. Algebraically identical:
    //   m = (3 - q)/2 = 1 + e/2,  q' = q m^2  <=>  e' = e^2 (3 + e)/4,
    //   p' = p m = p + p e/2,
    // with the same square + two merged multiplies per iteration.
    ArithShareTensor Qs = deflate_lift(q, params.eta, g);
    ArithShareTensor E = sub_from_const(Qs, 1.0);
    ArithShareTensor P(s.party(), q.cfg, q.shape, q.frac + g);
    P = add_const(P, 1.0);
    for (unsigned i = 0; i < params.t; ++i) {
        ArithShareTensor e2 = ssquare(s, E);
        ArithShareTensor eh = div_pow2(E, 1);
        ArithShareTensor f4 = div_pow2(add_const(E, 3.0), 2);
        auto zz = smul_batch(s, {{&e2, &f4}, {&P, &eh}});
        E = std::move(zz[0]);
        P = local_add(P, zz[1]);
    }
    return drop(P, g);
}

double gs_div_ref(double p, double q, unsigned t) {
    for (unsigned i = 0; i < t; ++i) {
        double m = 2.0 - q;
        p *= m;
        q *= m;
    }
    return p;
}

double gs_rsqrt_ref(double q, unsigned t) {
    double p = 1.0;
    for (unsigned i = 0; i < t; ++i) {
        double m = (3.0 - q) / 2.0;
        q = q * m * m;
        p *= m;
    }
    return p;
}

double sexp_ref(double x) {
    double v = 1.0 + x / 256.0;
    for (int i = 0; i < 8; ++i) v *= v;
    return v;
}

double srecip_ref(double x, unsigned iters) {
    double y = 3.0 * std::exp(0.5 - x) + 0.003;
    for (unsigned i = 0; i < iters; ++i) y = y * (2.0 - x * y);
    return y;
}

double srsqrt_ref(double x, unsigned iters) {
    double y = 2.2 * std::exp(-(x / 2.0 + 0.2)) + 0.198046875;
    for (unsigned i = 0; i < iters; ++i) y = 0.5 * y * (3.0 - x * y * y);
    return y;
}

} // namespace secmpc
