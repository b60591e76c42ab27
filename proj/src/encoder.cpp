#include "secmpc/encoder.hpp"

#include <cmath>

#include "secmpc/approx.hpp"

namespace secmpc {

namespace {

DoubleTensor matmul(const DoubleTensor& a, const DoubleTensor& b) {
    std::size_t m = a.shape.dims[0], k = a.shape.dims[1], n = b.shape.dims[1];
    DoubleTensor c(mat_shape(m, n));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            double av = a.data[i * k + l];
            for (std::size_t j = 0; j < n; ++j) c.data[i * n + j] += av * b.data[l * n + j];
        }
    return c;
}

DoubleTensor transpose(const DoubleTensor& a) {
    std::size_t m = a.shape.dims[0], n = a.shape.dims[1];
    DoubleTensor t(mat_shape(n, m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) t.data[j * m + i] = a.data[i * n + j];
    return t;
}

ArithShareTensor transpose_share(const ArithShareTensor& a) {
    std::size_t m = a.shape.dims[0], n = a.shape.dims[1];
    ArithShareTensor t(a.party, a.cfg, mat_shape(n, m), a.frac);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) t.data[j * m + i] = a.data[i * n + j];
    return t;
}

} // namespace

EncoderWeights EncoderWeights::random(std::size_t d, std::size_t h, std::size_t s, std::size_t ffn,
                                      u64 seed) {
    EncoderWeights w;
    w.d = d;
    w.h = h;
    w.s = s;
    w.ffn = ffn;
    if (d % h != 0) throw FormatError("model width must be divisible by head count");
    PrfStream rng(seed, "encoder.weights");
    double a_proj = 1.0 / std::sqrt(static_cast<double>(d));
    double a_down = 1.0 / std::sqrt(static_cast<double>(ffn));
    auto mat = [&](std::size_t r, std::size_t c, double amp) {
        DoubleTensor t(mat_shape(r, c));
        for (auto& v : t.data) v = rng.next_range(-amp, amp);
        return t;
    };
    for (std::size_t i = 0; i < h; ++i) {
        w.wq.push_back(mat(d, d / h, a_proj));
        w.wk.push_back(mat(d, d / h, a_proj));
        w.wv.push_back(mat(d, d / h, a_proj));
    }
    w.wo = mat(d, d, a_proj);
    w.w1 = mat(d, ffn, a_proj);
    w.w2 = mat(ffn, d, a_down);
    w.b1.resize(ffn);
    for (auto& v : w.b1) v = rng.next_range(-0.1, 0.1);
    w.b2.resize(d);
    for (auto& v : w.b2) v = rng.next_range(-0.1, 0.1);
    w.gamma1.resize(d);
    w.beta1.resize(d);
    w.gamma2.resize(d);
    w.beta2.resize(d);
    for (auto& v : w.gamma1) v = 1.0 + rng.next_range(-0.1, 0.1);
    for (auto& v : w.beta1) v = rng.next_range(-0.1, 0.1);
    for (auto& v : w.gamma2) v = 1.0 + rng.next_range(-0.1, 0.1);
    for (auto& v : w.beta2) v = rng.next_range(-0.1, 0.1);
    return w;
}

std::map<std::string, DoubleTensor> EncoderWeights::to_tensors() const {
    std::map<std::string, DoubleTensor> out;
    DoubleTensor dims(vec_shape(4));
    dims.data = {static_cast<double>(d), static_cast<double>(h), static_cast<double>(s),
                 static_cast<double>(ffn)};
    out.emplace("dims", dims);
    for (std::size_t i = 0; i < h; ++i) {
        out.emplace("wq" + std::to_string(i), wq[i]);
        out.emplace("wk" + std::to_string(i), wk[i]);
        out.emplace("wv" + std::to_string(i), wv[i]);
    }
    out.emplace("wo", wo);
    out.emplace("w1", w1);
    out.emplace("w2", w2);
    auto vec = [](const std::vector<double>& v) { return DoubleTensor(vec_shape(v.size()), v); };
    out.emplace("b1", vec(b1));
    out.emplace("b2", vec(b2));
    out.emplace("gamma1", vec(gamma1));
    out.emplace("beta1", vec(beta1));
    out.emplace("gamma2", vec(gamma2));
    out.emplace("beta2", vec(beta2));
    return out;
}

EncoderWeights EncoderWeights::from_tensors(const std::map<std::string, DoubleTensor>& t) {
    EncoderWeights w;
    const auto& dims = t.at("dims").data;
    w.d = static_cast<std::size_t>(dims[0]);
    w.h = static_cast<std::size_t>(dims[1]);
    w.s = static_cast<std::size_t>(dims[2]);
    w.ffn = static_cast<std::size_t>(dims[3]);
    for (std::size_t i = 0; i < w.h; ++i) {
        w.wq.push_back(t.at("wq" + std::to_string(i)));
        w.wk.push_back(t.at("wk" + std::to_string(i)));
        w.wv.push_back(t.at("wv" + std::to_string(i)));
    }
    w.wo = t.at("wo");
    w.w1 = t.at("w1");
    w.w2 = t.at("w2");
    w.b1 = t.at("b1").data;
    w.b2 = t.at("b2").data;
    w.gamma1 = t.at("gamma1").data;
    w.beta1 = t.at("beta1").data;
    w.gamma2 = t.at("gamma2").data;
    w.beta2 = t.at("beta2").data;
    return w;
}

KernelConfig demo_kernel_config() {
    KernelConfig cfg;
    cfg.eta_layernorm = 20.0; // toy-scale mean-variance regime
    cfg.guard_bits = 2;       // bulk kernels: minimize truncation-wrap odds
    return cfg;
}

DoubleTensor encoder_layer_plain(const DoubleTensor& x, const EncoderWeights& w,
                                 const KernelConfig& cfg) {
    if (x.shape.dims != std::vector<std::size_t>{w.s, w.d})
        throw FormatError("encoder input shape " + x.shape.str() + " does not match weights");
    std::size_t s = w.s, d = w.d, dh = w.head_dim();
    double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    DoubleTensor ctx(mat_shape(s, d));
    for (std::size_t hd = 0; hd < w.h; ++hd) {
        DoubleTensor q = matmul(x, w.wq[hd]), k = matmul(x, w.wk[hd]), v = matmul(x, w.wv[hd]);
        DoubleTensor sc = matmul(q, transpose(k));
        for (auto& e : sc.data) e *= scale;
        for (std::size_t r = 0; r < s; ++r) {
            std::vector<double> row(sc.data.begin() + r * s, sc.data.begin() + (r + 1) * s);
            std::vector<double> att = approx::two_quad_ref(row, cfg.softmax_c);
            for (std::size_t j = 0; j < dh; ++j) {
                double acc = 0;
                for (std::size_t c = 0; c < s; ++c) acc += att[c] * v.data[c * dh + j];
                ctx.data[r * d + hd * dh + j] = acc;
            }
        }
    }
    DoubleTensor attn_out = matmul(ctx, w.wo);

    DoubleTensor l1(mat_shape(s, d));
    for (std::size_t r = 0; r < s; ++r) {
        std::vector<double> row(d);
        for (std::size_t c = 0; c < d; ++c) row[c] = x.data[r * d + c] + attn_out.data[r * d + c];
        auto norm = approx::layernorm_ref(row, w.gamma1, w.beta1, cfg.variance_mode, cfg.epsilon);
        for (std::size_t c = 0; c < d; ++c) l1.data[r * d + c] = norm[c];
    }

    DoubleTensor h1 = matmul(l1, w.w1);
    for (std::size_t r = 0; r < s; ++r)
        for (std::size_t c = 0; c < w.ffn; ++c)
            h1.data[r * w.ffn + c] = approx::gelu_ref(h1.data[r * w.ffn + c] + w.b1[c]);
    DoubleTensor h2 = matmul(h1, w.w2);

    DoubleTensor out(mat_shape(s, d));
    for (std::size_t r = 0; r < s; ++r) {
        std::vector<double> row(d);
        for (std::size_t c = 0; c < d; ++c) row[c] = l1.data[r * d + c] + h2.data[r * d + c] + w.b2[c];
        auto norm = approx::layernorm_ref(row, w.gamma2, w.beta2, cfg.variance_mode, cfg.epsilon);
        for (std::size_t c = 0; c < d; ++c) out.data[r * d + c] = norm[c];
    }
    return out;
}

std::pair<EncoderShares, EncoderShares> share_encoder_inputs(const DoubleTensor& x,
                                                             const EncoderWeights& w,
                                                             const FixedCfg& cfg, PrfStream& rng) {
    EncoderShares a, b;
    auto split = [&](const DoubleTensor& t, ArithShareTensor& s0, ArithShareTensor& s1) {
        auto [p0, p1] = share_tensor(t, cfg, rng);
        s0 = std::move(p0);
        s1 = std::move(p1);
    };
    split(x, a.x, b.x);
    a.wq.resize(w.h);
    a.wk.resize(w.h);
    a.wv.resize(w.h);
    b.wq.resize(w.h);
    b.wk.resize(w.h);
    b.wv.resize(w.h);
    for (std::size_t i = 0; i < w.h; ++i) {
        split(w.wq[i], a.wq[i], b.wq[i]);
        split(w.wk[i], a.wk[i], b.wk[i]);
        split(w.wv[i], a.wv[i], b.wv[i]);
    }
    split(w.wo, a.wo, b.wo);
    split(w.w1, a.w1, b.w1);
    split(w.w2, a.w2, b.w2);
    split(DoubleTensor(vec_shape(w.b1.size()), w.b1), a.b1, b.b1);
    split(DoubleTensor(vec_shape(w.b2.size()), w.b2), a.b2, b.b2);
    return {std::move(a), std::move(b)};
}

ArithShareTensor encoder_layer_mpc(Session& s, const EncoderShares& sh, const EncoderWeights& w,
                                   const KernelConfig& cfg) {
    std::size_t seq = w.s, d = w.d, dh = w.head_dim();
    double scale = 1.0 / std::sqrt(static_cast<double>(dh));

    // Attention scores for all heads stacked into (h*s, s) so every row shares
    // the softmax rounds.
    ArithShareTensor scores(s.party(), s.cfg(), mat_shape(w.h * seq, seq), s.cfg().f);
    std::vector<ArithShareTensor> vs;
    {
        auto sc = s.scope("matmul");
        for (std::size_t hd = 0; hd < w.h; ++hd) {
            ArithShareTensor q = smatmul(s, sh.x, sh.wq[hd]);
            ArithShareTensor k = smatmul(s, sh.x, sh.wk[hd]);
            vs.push_back(smatmul(s, sh.x, sh.wv[hd]));
            ArithShareTensor sc_h = smatmul(s, q, transpose_share(k));
            sc_h = scale_real(sc_h, scale);
            std::copy(sc_h.data.begin(), sc_h.data.end(), scores.data.begin() + hd * seq * seq);
        }
    }

    ArithShareTensor attn;
    {
        auto sc = s.scope("softmax_2quad");
        attn = ssoftmax_2quad_rows(s, scores, cfg);
    }

    ArithShareTensor ctx(s.party(), s.cfg(), mat_shape(seq, d), s.cfg().f);
    {
        auto sc = s.scope("matmul");
        for (std::size_t hd = 0; hd < w.h; ++hd) {
            ArithShareTensor a_h(s.party(), s.cfg(), mat_shape(seq, seq), attn.frac);
            std::copy(attn.data.begin() + hd * seq * seq, attn.data.begin() + (hd + 1) * seq * seq,
                      a_h.data.begin());
            ArithShareTensor c_h = smatmul(s, a_h, vs[hd]);
            for (std::size_t r = 0; r < seq; ++r)
                for (std::size_t j = 0; j < dh; ++j)
                    ctx.data[r * d + hd * dh + j] = c_h.data[r * dh + j];
        }
    }

    ArithShareTensor attn_out;
    {
        auto sc = s.scope("matmul");
        attn_out = smatmul(s, ctx, sh.wo);
    }
    ArithShareTensor r1 = local_add(sh.x, attn_out);

    ArithShareTensor l1;
    {
        auto sc = s.scope("layernorm");
        l1 = slayernorm_rows(s, r1, w.gamma1, w.beta1, cfg);
    }

    ArithShareTensor h1;
    {
        auto sc = s.scope("matmul");
        h1 = smatmul(s, l1, sh.w1);
    }
    // bias broadcast across rows
    for (std::size_t r = 0; r < seq; ++r)
        for (std::size_t c = 0; c < w.ffn; ++c)
            h1.data[r * w.ffn + c] = ring_add(s.cfg(), h1.data[r * w.ffn + c], sh.b1.data[c]);

    ArithShareTensor g;
    {
        auto sc = s.scope("gelu");
        g = sgelu(s, h1, cfg);
    }

    ArithShareTensor h2;
    {
        auto sc = s.scope("matmul");
        h2 = smatmul(s, g, sh.w2);
    }
    for (std::size_t r = 0; r < seq; ++r)
        for (std::size_t c = 0; c < d; ++c)
            h2.data[r * d + c] = ring_add(s.cfg(), h2.data[r * d + c], sh.b2.data[c]);

    ArithShareTensor r2 = local_add(l1, h2);
    auto sc = s.scope("layernorm");
    return slayernorm_rows(s, r2, w.gamma2, w.beta2, cfg);
}

} // namespace secmpc
