#include "secmpc/linear.hpp"

namespace secmpc {

namespace {

struct MulPlan {
    std::size_t offset; // element offset in the fused opening
    std::size_t n;
    unsigned out_frac;
};

} // namespace

std::vector<ArithShareTensor> smul_batch(Session& s,
                                         const std::vector<std::pair<const ArithShareTensor*,
                                                                     const ArithShareTensor*>>& args,
                                         bool rescale) {
    const FixedCfg& cfg = s.cfg();
    std::vector<MulPlan> plans;
    std::vector<u64> opening;
    std::vector<BeaverShare> triples;
    bool j1 = s.party() == Party::S1;

    for (const auto& [px, py] : args) {
        const auto& x = *px;
        const auto& y = *py;
        if (x.shape != y.shape)
            throw ProtocolError("smul shape mismatch: " + x.shape.str() + " vs " + y.shape.str());
        if (rescale && x.frac != y.frac) throw ProtocolError("smul operand scale mismatch");
        plans.push_back({opening.size(), x.numel(), rescale ? x.frac : x.frac + y.frac});
        for (std::size_t i = 0; i < x.numel(); ++i) {
            BeaverShare t = s.randomness().next_beaver();
            triples.push_back(t);
            opening.push_back(ring_sub(cfg, x.data[i], t.a)); // [d]_j
            opening.push_back(ring_sub(cfg, y.data[i], t.b)); // [e]_j
        }
    }

    std::vector<u64> peer = s.exchange(opening);

    std::vector<ArithShareTensor> out;
    out.reserve(args.size());
    std::size_t t_ix = 0;
    for (std::size_t a = 0; a < args.size(); ++a) {
        const auto& x = *args[a].first;
        const auto& y = *args[a].second;
        ArithShareTensor z(s.party(), cfg, x.shape, plans[a].out_frac);
        for (std::size_t i = 0; i < x.numel(); ++i, ++t_ix) {
            std::size_t base = plans[a].offset + 2 * i;
            u64 d = ring_add(cfg, opening[base], peer[base]);
            u64 e = ring_add(cfg, opening[base + 1], peer[base + 1]);
            const BeaverShare& t = triples[t_ix];
            // [uv]_j = -j*d*e + [u]_j*e + d*[v]_j + [c]_j
            u64 v = ring_add(cfg, ring_mul(cfg, x.data[i], e), ring_mul(cfg, d, y.data[i]));
            v = ring_add(cfg, v, t.c);
            if (j1) v = ring_sub(cfg, v, ring_mul(cfg, d, e));
            if (rescale) v = trunc_val(cfg, v, x.frac);
            z.data[i] = v;
        }
        out.push_back(std::move(z));
    }
    return out;
}

ArithShareTensor smul_raw(Session& s, const ArithShareTensor& x, const ArithShareTensor& y) {
    return std::move(smul_batch(s, {{&x, &y}}, false)[0]);
}

ArithShareTensor smul(Session& s, const ArithShareTensor& x, const ArithShareTensor& y) {
    return std::move(smul_batch(s, {{&x, &y}}, true)[0]);
}

static ArithShareTensor ssquare_impl(Session& s, const ArithShareTensor& x, bool rescale) {
    const FixedCfg& cfg = s.cfg();
    std::vector<u64> opening(x.numel());
    std::vector<SquareShare> pairs(x.numel());
    for (std::size_t i = 0; i < x.numel(); ++i) {
        pairs[i] = s.randomness().next_square();
        opening[i] = ring_sub(cfg, x.data[i], pairs[i].a);
    }
    std::vector<u64> peer = s.exchange(opening);
    ArithShareTensor z(s.party(), cfg, x.shape, rescale ? x.frac : 2 * x.frac);
    bool j1 = s.party() == Party::S1;
    for (std::size_t i = 0; i < x.numel(); ++i) {
        u64 d = ring_add(cfg, opening[i], peer[i]);
        // x^2 = a^2 + 2*d*a + d^2 with d = x - a public
        u64 v = ring_add(cfg, pairs[i].aa, ring_mul(cfg, 2 * d, pairs[i].a));
        if (j1) v = ring_add(cfg, v, ring_mul(cfg, d, d));
        if (rescale) v = trunc_val(cfg, v, x.frac);
        z.data[i] = v;
    }
    return z;
}

ArithShareTensor ssquare_raw(Session& s, const ArithShareTensor& x) { return ssquare_impl(s, x, false); }
ArithShareTensor ssquare(Session& s, const ArithShareTensor& x) { return ssquare_impl(s, x, true); }

ArithShareTensor smatmul(Session& s, const ArithShareTensor& x, const ArithShareTensor& y) {
    const FixedCfg& cfg = s.cfg();
    if (x.shape.rank() != 2 || y.shape.rank() != 2 || x.shape.dims[1] != y.shape.dims[0])
        throw ProtocolError("smatmul dim mismatch: " + x.shape.str() + " * " + y.shape.str());
    if (x.frac != y.frac) throw ProtocolError("smatmul operand scale mismatch");
    std::size_t m = x.shape.dims[0], k = x.shape.dims[1], n = y.shape.dims[1];

    MatTripleShare t = s.randomness().next_mat(m, k, n);
    std::vector<u64> opening(m * k + k * n);
    for (std::size_t i = 0; i < m * k; ++i) opening[i] = ring_sub(cfg, x.data[i], t.a[i]);
    for (std::size_t i = 0; i < k * n; ++i) opening[m * k + i] = ring_sub(cfg, y.data[i], t.b[i]);

    std::vector<u64> peer = s.exchange(opening);
    std::vector<u64> D(m * k), E(k * n);
    for (std::size_t i = 0; i < m * k; ++i) D[i] = ring_add(cfg, opening[i], peer[i]);
    for (std::size_t i = 0; i < k * n; ++i) E[i] = ring_add(cfg, opening[m * k + i], peer[m * k + i]);

    auto matmul_acc = [&](const std::vector<u64>& A, const std::vector<u64>& B, std::vector<u64>& C,
                          bool negate) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t l = 0; l < k; ++l) {
                u64 av = A[i * k + l];
                if (av == 0) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    u64 p = av * B[l * n + j];
                    C[i * n + j] += negate ? -p : p;
                }
            }
    };

    std::vector<u64> acc(m * n, 0);
    // [Z]_j = -j*D*E + [X]_j*E + D*[Y]_j + [C]_j
    matmul_acc(x.data, E, acc, false);
    matmul_acc(D, y.data, acc, false);
    for (std::size_t i = 0; i < m * n; ++i) acc[i] += t.c[i];
    if (s.party() == Party::S1) matmul_acc(D, E, acc, true);

    ArithShareTensor z(s.party(), cfg, mat_shape(m, n), x.frac);
    for (std::size_t i = 0; i < m * n; ++i) z.data[i] = trunc_val(cfg, acc[i] & cfg.mask(), x.frac);
    return z;
}

ArithShareTensor broadcast(const ArithShareTensor& scalar, std::size_t n) {
    if (scalar.numel() != 1) throw ProtocolError("broadcast expects a scalar share");
    ArithShareTensor out(scalar.party, scalar.cfg, vec_shape(n), scalar.frac);
    for (auto& v : out.data) v = scalar.data[0];
    return out;
}

} // namespace secmpc
