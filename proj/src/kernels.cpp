#include "secmpc/kernels.hpp"

#include <cmath>

namespace secmpc {

namespace {

// Odd polynomial f(x) = c7 x^7 + c5 x^5 + c3 x^3 + c1 x via one squaring and
// a multiply chain for the odd powers.
ArithShareTensor erf_backend_poly7(Session& s, const ArithShareTensor& xhat) {
    const double* c = erf_coeffs::kPoly7;
    ArithShareTensor x2 = ssquare(s, xhat);
    ArithShareTensor x3 = smul(s, xhat, x2);
    ArithShareTensor x5 = smul(s, x2, x3);
    ArithShareTensor x7 = smul(s, x2, x5);
    ArithShareTensor f = scale_real(x7, c[0]);
    f = local_add(f, scale_real(x5, c[1]));
    f = local_add(f, scale_real(x3, c[2]));
    f = local_add(f, scale_real(xhat, c[3]));
    return f;
}

// Seven-term sine series, all harmonics opened in one round. The k-th
// harmonic argument k*xhat is a free integer scaling of the shares.
ArithShareTensor erf_backend_fourier7(Session& s, const ArithShareTensor& xhat) {
    std::size_t n = xhat.numel();
    ArithShareTensor args(s.party(), xhat.cfg, vec_shape(7 * n), xhat.frac);
    for (int k = 1; k <= 7; ++k) {
        ArithShareTensor h = scale_int(xhat, k);
        std::copy(h.data.begin(), h.data.end(), args.data.begin() + (k - 1) * n);
    }
    ArithShareTensor sins = ssin_period20(s, args);
    ArithShareTensor f(s.party(), xhat.cfg, xhat.shape, xhat.frac);
    for (int k = 1; k <= 7; ++k) {
        ArithShareTensor part = scale_real(slice(sins, (k - 1) * n, n), erf_coeffs::kFourier7[k - 1]);
        for (std::size_t i = 0; i < n; ++i) f.data[i] = ring_add(f.cfg, f.data[i], part.data[i]);
    }
    return f;
}

} // namespace

ArithShareTensor serf(Session& s, const ArithShareTensor& xhat, const ArithShareTensor& cmp,
                      const KernelConfig& cfg) {
    cfg.validate();
    const double a = erf_coeffs::kThreshold;
    std::size_t n = xhat.numel();

    // Both segment comparisons share one round group: z0 = 1{cmp < -a},
    // c1 = 1{cmp < a}; z1 = c1 - z0 is the middle-segment indicator,
    // z2 = 1 - c1 the saturated one.
    ArithShareTensor both = concat(cmp, cmp);
    ArithShareTensor thr(s.party(), cmp.cfg, vec_shape(2 * n), cmp.frac);
    if (s.party() == Party::S0) {
        u64 lo = encode_fixed_at(-a, cmp.cfg, cmp.frac), hi = encode_fixed_at(a, cmp.cfg, cmp.frac);
        for (std::size_t i = 0; i < n; ++i) {
            thr.data[i] = lo;
            thr.data[n + i] = hi;
        }
    }
    ArithShareTensor inds = slt(s, both, thr);
    ArithShareTensor z0 = slice(inds, 0, n);
    ArithShareTensor c1 = slice(inds, n, n);
    ArithShareTensor z1 = local_sub(c1, z0);
    z1.shape = xhat.shape;

    ArithShareTensor f = cfg.erf_backend == ErfBackend::Poly7 ? erf_backend_poly7(s, xhat)
                                                              : erf_backend_fourier7(s, xhat);

    // erf = z2 - z0 + z1 * f with z2 = 1 - c1; the indicator product is a raw
    // multiply so the selection is exact.
    ArithShareTensor sel = smul_raw(s, z1, f);
    ArithShareTensor outer = lift(local_sub(sub_from_const(c1, 1.0), z0), xhat.frac);
    outer.shape = xhat.shape;
    return local_add(outer, sel);
}

ArithShareTensor sgelu(Session& s, const ArithShareTensor& x, const KernelConfig& cfg) {
    ArithShareTensor xhat = scale_real(x, 1.0 / std::sqrt(2.0));
    const ArithShareTensor& cmp = cfg.threshold_mode == ThresholdMode::OnErfArgument ? xhat : x;
    ArithShareTensor e = serf(s, xhat, cmp, cfg);
    ArithShareTensor yprime = add_const(e, 1.0);
    return smul(s, div_pow2(x, 1), yprime);
}

namespace {

ArithShareTensor layernorm_core(Session& s, const ArithShareTensor& x, std::size_t rows,
                                std::size_t n, const KernelConfig& cfg,
                                ArithShareTensor* centered_out) {
    const FixedCfg& rc = s.cfg();
    // Mean and centered values are share-local.
    ArithShareTensor centered(s.party(), rc, x.shape, x.frac);
    for (std::size_t r = 0; r < rows; ++r) {
        u64 acc = 0;
        for (std::size_t i = 0; i < n; ++i) acc += x.data[r * n + i];
        ArithShareTensor mu(s.party(), rc, Shape{1}, x.frac);
        mu.data[0] = acc & rc.mask();
        mu = scale_real(mu, 1.0 / static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            centered.data[r * n + i] = ring_sub(rc, x.data[r * n + i], mu.data[0]);
    }

    ArithShareTensor sq = ssquare(s, centered);
    ArithShareTensor q0(s.party(), rc, vec_shape(rows), x.frac);
    for (std::size_t r = 0; r < rows; ++r) {
        u64 acc = 0;
        for (std::size_t i = 0; i < n; ++i) acc += sq.data[r * n + i];
        q0.data[r] = acc & rc.mask();
    }
    if (cfg.variance_mode == VarianceMode::Mean)
        q0 = scale_real(q0, 1.0 / static_cast<double>(n));
    q0 = add_const(q0, cfg.epsilon);

    ArithShareTensor pt = gs_rsqrt(s, q0, GoldschmidtParams{cfg.t_rsqrt, cfg.eta_layernorm, 0.001,
                                                            2.99, cfg.guard_bits});
    *centered_out = std::move(centered);
    return pt;
}

ArithShareTensor layernorm_finish(Session& s, const ArithShareTensor& centered,
                                  const ArithShareTensor& pt, std::size_t rows, std::size_t n,
                                  const std::vector<double>& gamma, const std::vector<double>& beta,
                                  const KernelConfig& cfg) {
    ArithShareTensor ptb(s.party(), s.cfg(), centered.shape, pt.frac);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t i = 0; i < n; ++i) ptb.data[r * n + i] = pt.data[r];
    ArithShareTensor y = smul(s, centered, ptb);
    y = scale_real(y, 1.0 / std::sqrt(cfg.eta_layernorm));
    auto at = [&](const std::vector<double>& v, std::size_t i) {
        return v.size() == 1 ? v[0] : v.at(i);
    };
    ArithShareTensor out(s.party(), s.cfg(), centered.shape, y.frac);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t ix = r * n + i;
            u64 ge = encode_fixed_at(at(gamma, i), s.cfg(), y.frac);
            u64 v = trunc_val(s.cfg(), ring_mul(s.cfg(), y.data[ix], ge), y.frac);
            if (s.party() == Party::S0)
                v = ring_add(s.cfg(), v, encode_fixed_at(at(beta, i), s.cfg(), y.frac));
            out.data[ix] = v;
        }
    return out;
}

} // namespace

ArithShareTensor slayernorm(Session& s, const ArithShareTensor& x, const std::vector<double>& gamma,
                            const std::vector<double>& beta, const KernelConfig& cfg) {
    cfg.validate();
    ArithShareTensor centered;
    ArithShareTensor pt = layernorm_core(s, x, 1, x.numel(), cfg, &centered);
    return layernorm_finish(s, centered, pt, 1, x.numel(), gamma, beta, cfg);
}

ArithShareTensor slayernorm_rows(Session& s, const ArithShareTensor& x,
                                 const std::vector<double>& gamma, const std::vector<double>& beta,
                                 const KernelConfig& cfg) {
    cfg.validate();
    if (x.shape.rank() != 2) throw ProtocolError("slayernorm_rows expects a matrix");
    std::size_t rows = x.shape.dims[0], n = x.shape.dims[1];
    ArithShareTensor centered;
    ArithShareTensor pt = layernorm_core(s, x, rows, n, cfg, &centered);
    return layernorm_finish(s, centered, pt, rows, n, gamma, beta, cfg);
}

ArithShareTensor slayernorm_shared(Session& s, const ArithShareTensor& x,
                                   const ArithShareTensor& gamma, const ArithShareTensor& beta,
                                   const KernelConfig& cfg) {
    cfg.validate();
    ArithShareTensor centered;
    ArithShareTensor pt = layernorm_core(s, x, 1, x.numel(), cfg, &centered);
    ArithShareTensor ptb = broadcast(pt, centered.numel());
    ptb.shape = centered.shape;
    ArithShareTensor y = smul(s, centered, ptb);
    y = scale_real(y, 1.0 / std::sqrt(cfg.eta_layernorm));
    return local_add(smul(s, y, gamma), beta);
}

ArithShareTensor ssoftmax_2quad(Session& s, const ArithShareTensor& x, const KernelConfig& cfg) {
    cfg.validate();
    ArithShareTensor xc = add_const(x, cfg.softmax_c);
    ArithShareTensor p = ssquare(s, xc);
    ArithShareTensor q = sum_elems(p);
    return gs_div(s, p, q,
                  GoldschmidtParams{cfg.t_div, cfg.eta_softmax, 0.001, 1.999, cfg.guard_bits});
}

ArithShareTensor ssoftmax_2quad_rows(Session& s, const ArithShareTensor& x, const KernelConfig& cfg) {
    cfg.validate();
    if (x.shape.rank() != 2) throw ProtocolError("ssoftmax_2quad_rows expects a matrix");
    std::size_t rows = x.shape.dims[0], n = x.shape.dims[1];
    ArithShareTensor xc = add_const(x, cfg.softmax_c);
    ArithShareTensor p = ssquare(s, xc);
    // Per-row denominators, expanded to p's shape so rows share the division rounds.
    ArithShareTensor q(s.party(), s.cfg(), x.shape, x.frac);
    for (std::size_t r = 0; r < rows; ++r) {
        u64 acc = 0;
        for (std::size_t i = 0; i < n; ++i) acc += p.data[r * n + i];
        for (std::size_t i = 0; i < n; ++i) q.data[r * n + i] = acc & s.cfg().mask();
    }
    return gs_div(s, p, q,
                  GoldschmidtParams{cfg.t_div, cfg.eta_softmax, 0.001, 1.999, cfg.guard_bits});
}

ArithShareTensor ssoftmax_exact(Session& s, const ArithShareTensor& x, const KernelConfig& cfg) {
    cfg.validate();
    ArithShareTensor tau = smax(s, x);
    ArithShareTensor shifted = local_sub(x, broadcast(tau, x.numel()));
    shifted.shape = x.shape;
    ArithShareTensor e = sexp(s, shifted, cfg.guard_bits);
    ArithShareTensor total = sum_elems(e);
    ArithShareTensor r = srecip_newton(s, total, 10, cfg.guard_bits);
    ArithShareTensor rb = broadcast(r, x.numel());
    rb.shape = x.shape;
    return smul(s, e, rb);
}

std::string to_string(ErfBackend b) { return b == ErfBackend::Poly7 ? "poly7" : "fourier7"; }
std::string to_string(ThresholdMode m) {
    return m == ThresholdMode::OnErfArgument ? "on_erf_argument" : "verbatim_alg1";
}
std::string to_string(VarianceMode m) { return m == VarianceMode::Mean ? "mean" : "paper_sum"; }

} // namespace secmpc
