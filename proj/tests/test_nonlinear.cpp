#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "secmpc/duo.hpp"
#include "secmpc/nonlinear.hpp"

using namespace secmpc;

namespace {
const FixedCfg kCfg{64, 16};

ArithShareTensor mine(Session& s, const SharePair& p) {
    return s.party() == Party::S0 ? p.first : p.second;
}
} // namespace

TEST_CASE("comparison basics") {
    auto run_lt = [&](double x, double c) {
        auto res = run_duo(kCfg, 1, [&](Session& s) {
            PrfStream rng(static_cast<u64>(x * 1000 + c * 7 + 5000), "nl.lt");
            ArithShareTensor xs = mine(s, share_scalar(x, kCfg, rng));
            return slt_const(s, xs, c);
        });
        return reconstruct(res.r0, res.r1).data[0];
    };
    CHECK(run_lt(-2.0, -1.7) == 1.0);
    CHECK(run_lt(-1.5, -1.7) == 0.0);
    CHECK(run_lt(1.7, 1.7) == 0.0); // strict at equality
    CHECK(run_lt(1.699, 1.7) == 1.0);
}

TEST_CASE("comparison rounds: log2(l) + 1") {
    auto res = run_duo(kCfg, 2, [&](Session& s) {
        PrfStream rng(2, "nl.ltrounds");
        ArithShareTensor xs = mine(s, share_scalar(0.5, kCfg, rng));
        return slt_const(s, xs, 1.0);
    });
    CHECK(res.stats0.total().rounds == 7);
    MESSAGE("lt volume at l=64: ", res.stats0.total().bits, " bits");

    FixedCfg c16{16, 4};
    auto res16 = run_duo(c16, 2, [&](Session& s) {
        PrfStream rng(2, "nl.ltrounds16");
        ArithShareTensor xs = mine(s, share_scalar(0.5, c16, rng));
        return slt_const(s, xs, 1.0);
    });
    CHECK(res16.stats0.total().rounds == 5);
}

TEST_CASE("comparison exhaustive at l=16") {
    // all 2^16 values of z = x - c, via c = 0 and x sweeping the whole ring
    FixedCfg c16{16, 4};
    const std::size_t n = 1 << 16;
    auto res = run_duo(c16, 3, [&](Session& s) {
        PrfStream rng(3, "nl.ltexhaustive");
        RingTensor all(vec_shape(n));
        for (std::size_t i = 0; i < n; ++i) all.data[i] = i;
        ArithShareTensor xs = mine(s, share_raw(all, c16, rng, 0));
        ArithShareTensor zero(s.party(), c16, vec_shape(n), 0);
        return slt(s, xs, zero);
    });
    RingTensor got = reconstruct_raw(res.r0, res.r1);
    for (std::size_t i = 0; i < n; ++i) {
        u64 want = to_signed(c16, i) < 0 ? 1 : 0;
        REQUIRE(got.data[i] == want);
    }
}

TEST_CASE("comparison randomized at l=64, share-share") {
    const std::size_t n = 3000;
    PrfStream vals(4, "nl.ltrand");
    DoubleTensor x(vec_shape(n)), y(vec_shape(n));
    for (std::size_t i = 0; i < n; ++i) {
        x.data[i] = decode_fixed(encode_fixed(vals.next_range(-1000, 1000), kCfg), kCfg);
        y.data[i] = decode_fixed(encode_fixed(vals.next_range(-1000, 1000), kCfg), kCfg);
    }
    auto res = run_duo(kCfg, 4, [&](Session& s) {
        PrfStream rng(44, "nl.ltrand.sh");
        ArithShareTensor xs = mine(s, share_tensor(x, kCfg, rng));
        ArithShareTensor ys = mine(s, share_tensor(y, kCfg, rng));
        return slt(s, xs, ys);
    });
    RingTensor got = reconstruct_raw(res.r0, res.r1);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(got.data[i] == (x.data[i] < y.data[i] ? 1u : 0u));
}

TEST_CASE("a2b bit decomposition reconstructs the ring value") {
    const std::size_t n = 500;
    PrfStream xr(5, "nl.a2b.values");
    RingTensor x(vec_shape(n));
    for (auto& v : x.data) v = xr.next();
    auto res = run_duo(kCfg, 5, [&](Session& s) {
        PrfStream rng(5, "nl.a2b");
        auto pair = share_raw(x, kCfg, rng, 0);
        return a2b(s, mine(s, pair));
    });
    RingTensor bits = reconstruct_bool(res.r0, res.r1);
    CHECK(bits.data == x.data);
}

TEST_CASE("tree-reduction maximum") {
    auto res = run_duo(kCfg, 6, [&](Session& s) {
        PrfStream rng(6, "nl.max");
        DoubleTensor x(vec_shape(4), {1, 5, 3, 2});
        return smax(s, mine(s, share_tensor(x, kCfg, rng)));
    });
    CHECK(reconstruct(res.r0, res.r1).data[0] == doctest::Approx(5.0));
    CHECK(res.stats0.total().rounds == 2 * 8); // ceil(log2 4) layers, 7+1 rounds each

    auto resc = run_duo(kCfg, 7, [&](Session& s) {
        PrfStream rng(7, "nl.maxconst");
        DoubleTensor x(vec_shape(5), {2.5, 2.5, 2.5, 2.5, 2.5});
        return smax(s, mine(s, share_tensor(x, kCfg, rng)));
    });
    CHECK(reconstruct(resc.r0, resc.r1).data[0] == doctest::Approx(2.5));
}

TEST_CASE("maximum is ring-exact on random vectors") {
    PrfStream vals(8, "nl.maxrand");
    for (int t = 0; t < 1000; ++t) {
        DoubleTensor x(vec_shape(8));
        for (auto& v : x.data) v = decode_fixed(encode_fixed(vals.next_range(-50, 50), kCfg), kCfg);
        auto res = run_duo(kCfg, 800 + t, [&](Session& s) {
            PrfStream rng(8000 + t, "nl.maxrand.sh");
            return smax(s, mine(s, share_tensor(x, kCfg, rng)));
        });
        double want = *std::max_element(x.data.begin(), x.data.end());
        REQUIRE(reconstruct(res.r0, res.r1).data[0] == want); // exact in the ring
    }
}

TEST_CASE("empty max is an error") {
    CHECK_THROWS_AS(run_duo(kCfg, 9,
                            [&](Session& s) {
                                ArithShareTensor empty(s.party(), kCfg, vec_shape(0), kCfg.f);
                                return smax(s, empty);
                            }),
                    ProtocolError);
}

TEST_CASE("repeated-squaring exponential") {
    auto res = run_duo(kCfg, 10, [&](Session& s) {
        PrfStream rng(10, "nl.exp0");
        return sexp(s, mine(s, share_scalar(0.0, kCfg, rng)));
    });
    CHECK(reconstruct(res.r0, res.r1).data[0] == doctest::Approx(1.0).epsilon(1e-4));

    auto res1 = run_duo(kCfg, 11, [&](Session& s) {
        PrfStream rng(11, "nl.exp1");
        return sexp(s, mine(s, share_scalar(1.0, kCfg, rng)));
    });
    // (1 + 1/256)^256 = 2.71299..., deliberately not e
    CHECK(std::fabs(reconstruct(res1.r0, res1.r1).data[0] - 2.71299) <= 1e-3);
    CHECK(res1.stats0.total().rounds == 8);
    CHECK(res1.stats0.total().bits == 1024);
}

TEST_CASE("exponential tracks its plaintext oracle on [-16, 16]") {
    const std::size_t n = 1000;
    PrfStream vals(12, "nl.exprand");
    DoubleTensor x(vec_shape(n));
    for (auto& v : x.data) v = vals.next_range(-16, 16);
    auto res = run_duo(kCfg, 12, [&](Session& s) {
        PrfStream rng(120, "nl.exprand.sh");
        return sexp(s, mine(s, share_tensor(x, kCfg, rng)));
    });
    DoubleTensor got = reconstruct(res.r0, res.r1);
    for (std::size_t i = 0; i < n; ++i) {
        double want = sexp_ref(x.data[i]);
        REQUIRE(std::fabs(got.data[i] - want) <= 1e-3 * std::max(1.0, want));
    }
}

TEST_CASE("sine: quarter period and cost") {
    auto res = run_duo(kCfg, 13, [&](Session& s) {
        PrfStream rng(13, "nl.sin5");
        return ssin_period20(s, mine(s, share_scalar(5.0, kCfg, rng)));
    });
    CHECK(std::fabs(reconstruct(res.r0, res.r1).data[0] - 1.0) <= std::ldexp(1.0, -13));
    CHECK(res.stats0.total().rounds == 1);
    CHECK(res.stats0.total().bits == 42);
}

TEST_CASE("sine periodicity under +20") {
    PrfStream vals(14, "nl.sinper");
    for (int t = 0; t < 200; ++t) {
        double x = vals.next_range(-10, 10);
        auto res = run_duo(kCfg, 1400 + t, [&](Session& s) {
            PrfStream rng(14000 + t, "nl.sinper.sh");
            ArithShareTensor a = mine(s, share_scalar(x, kCfg, rng));
            ArithShareTensor b = mine(s, share_scalar(x + 20.0, kCfg, rng));
            ArithShareTensor both = concat(a, b);
            ArithShareTensor y = ssin_period20(s, both);
            return local_sub(slice(y, 0, 1), slice(y, 1, 1));
        });
        REQUIRE(std::fabs(reconstruct(res.r0, res.r1).data[0]) <= std::ldexp(1.0, -12));
    }
}

TEST_CASE("sine accuracy against the plaintext oracle") {
    const std::size_t n = 10000;
    PrfStream vals(15, "nl.sinrand");
    DoubleTensor x(vec_shape(n));
    for (auto& v : x.data) v = vals.next_range(-10, 10);
    auto res = run_duo(kCfg, 15, [&](Session& s) {
        PrfStream rng(150, "nl.sinrand.sh");
        return ssin_period20(s, mine(s, share_tensor(x, kCfg, rng)));
    });
    DoubleTensor got = reconstruct(res.r0, res.r1);
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst,
                         std::fabs(got.data[i] - std::sin(std::numbers::pi * x.data[i] / 10.0)));
    CHECK(worst <= std::ldexp(1.0, -12));
    CHECK(res.stats0.total().rounds == 1); // all elements share the opening round
    CHECK(res.stats0.total().bits == 42 * n);
}

TEST_CASE("newton reciprocal") {
    auto run_recip = [&](double x, u64 seed) {
        auto res = run_duo(kCfg, seed, [&](Session& s) {
            PrfStream rng(seed, "nl.recip");
            return srecip_newton(s, mine(s, share_scalar(x, kCfg, rng)));
        });
        return reconstruct(res.r0, res.r1).data[0];
    };
    CHECK(std::fabs(run_recip(1.0, 16) - 1.0) <= 1e-3);
    CHECK(std::fabs(run_recip(2.0, 17) - 0.5) <= 1e-3);
    // y0 = 3 e^(-1.5) + 0.003 = 0.67237...
    CHECK(srecip_ref(2.0, 0) == doctest::Approx(0.672336).epsilon(1e-3));
    // x below the documented basin still matches the oracle itself
    CHECK(std::fabs(run_recip(0.01, 18) - srecip_ref(0.01)) <= 1e-3 * srecip_ref(0.01));
}

TEST_CASE("newton reciprocal across the basin") {
    PrfStream vals(19, "nl.reciprand");
    for (int t = 0; t < 1000; ++t) {
        double x = std::exp(vals.next_range(std::log(1.0 / 64), std::log(64.0)));
        auto res = run_duo(kCfg, 1900 + t, [&](Session& s) {
            PrfStream rng(19000 + t, "nl.reciprand.sh");
            return srecip_newton(s, mine(s, share_scalar(x, kCfg, rng)));
        });
        double want = srecip_ref(x);
        REQUIRE(std::fabs(reconstruct(res.r0, res.r1).data[0] - want) <=
                1e-3 * std::max(1.0, want));
    }
}

TEST_CASE("newton inverse square root and square root") {
    auto run_rsqrt = [&](double x, u64 seed) {
        auto res = run_duo(kCfg, seed, [&](Session& s) {
            PrfStream rng(seed, "nl.rsqrt");
            return srsqrt_newton(s, mine(s, share_scalar(x, kCfg, rng)));
        });
        return reconstruct(res.r0, res.r1).data[0];
    };
    CHECK(std::fabs(run_rsqrt(1.0, 20) - 1.0) <= 1e-2);
    CHECK(std::fabs(run_rsqrt(4.0, 21) - 0.5) <= 1e-2);

    auto res = run_duo(kCfg, 22, [&](Session& s) {
        PrfStream rng(22, "nl.sqrt");
        return ssqrt_newton(s, mine(s, share_scalar(0.25, kCfg, rng)));
    });
    CHECK(std::fabs(reconstruct(res.r0, res.r1).data[0] - 0.5) <= 1e-2);
}

TEST_CASE("goldschmidt division: fixed point of the iteration") {
    auto res = run_duo(kCfg, 23, [&](Session& s) {
        PrfStream rng(23, "nl.gsdiv1");
        ArithShareTensor p = mine(s, share_scalar(1.0, kCfg, rng));
        ArithShareTensor q = mine(s, share_scalar(1.0, kCfg, rng));
        return gs_div(s, p, q);
    });
    CHECK(std::fabs(reconstruct(res.r0, res.r1).data[0] - 1.0) <= 1e-4);
}

TEST_CASE("goldschmidt division: value and cost") {
    auto res = run_duo(kCfg, 24, [&](Session& s) {
        PrfStream rng(24, "nl.gsdiv2");
        ArithShareTensor p = mine(s, share_scalar(1.0, kCfg, rng));
        ArithShareTensor q = mine(s, share_scalar(0.5, kCfg, rng));
        return gs_div(s, p, q);
    });
    CHECK(std::fabs(reconstruct(res.r0, res.r1).data[0] - gs_div_ref(1.0, 0.5)) <= 1e-3);
    CHECK(std::fabs(reconstruct(res.r0, res.r1).data[0] - 2.0) <= 1e-3);
    CHECK(res.stats0.total().rounds == 13);
    CHECK(res.stats0.total().bits == 6656);
}

TEST_CASE("goldschmidt rsqrt: value and cost") {
    auto res1 = run_duo(kCfg, 25, [&](Session& s) {
        PrfStream rng(25, "nl.gsrsqrt1");
        return gs_rsqrt(s, mine(s, share_scalar(1.0, kCfg, rng)));
    });
    CHECK(std::fabs(reconstruct(res1.r0, res1.r1).data[0] - 1.0) <= 1e-3);

    auto res = run_duo(kCfg, 26, [&](Session& s) {
        PrfStream rng(26, "nl.gsrsqrt2");
        return gs_rsqrt(s, mine(s, share_scalar(0.25, kCfg, rng)));
    });
    CHECK(std::fabs(reconstruct(res.r0, res.r1).data[0] - gs_rsqrt_ref(0.25)) <= 1e-3);
    CHECK(std::fabs(reconstruct(res.r0, res.r1).data[0] - 2.0) <= 1e-3);
    CHECK(res.stats0.total().rounds == 22);
    CHECK(res.stats0.total().bits == 7040);
}

TEST_CASE("goldschmidt division ratio invariance in fixed point") {
    // p_i / q_i is conserved: after convergence q_t = 1, so p_t = p0/q0
    PrfStream vals(27, "nl.ratio");
    for (int t = 0; t < 50; ++t) {
        double q0 = vals.next_range(0.05, 1.95);
        double p0 = vals.next_range(0.1, 2.0);
        auto res = run_duo(kCfg, 2700 + t, [&](Session& s) {
            PrfStream rng(27000 + t, "nl.ratio.sh");
            ArithShareTensor p = mine(s, share_scalar(p0, kCfg, rng));
            ArithShareTensor q = mine(s, share_scalar(q0, kCfg, rng));
            return gs_div(s, p, q);
        });
        double got = reconstruct(res.r0, res.r1).data[0];
        REQUIRE(std::fabs(got - p0 / q0) <= 1e-3 * std::max(1.0, p0 / q0));
    }
}

TEST_CASE("goldschmidt convergence monotonicity on the plaintext oracle") {
    // |q_i - 1| never increases across iterations for q0 in the target intervals
    for (int i = 0; i <= 10000; ++i) {
        double q = 0.001 + (1.999 - 0.001) * i / 10000.0;
        double dist = std::fabs(1.0 - q);
        double qq = q;
        for (int it = 0; it < 13; ++it) {
            qq = qq * (2.0 - qq);
            double nd = std::fabs(1.0 - qq);
            REQUIRE(nd <= dist + 1e-15);
            dist = nd;
        }
    }
    for (int i = 0; i <= 10000; ++i) {
        double q = 0.001 + (2.99 - 0.001) * i / 10000.0;
        double dist = std::fabs(1.0 - q);
        double qq = q;
        for (int it = 0; it < 11; ++it) {
            double m = (3.0 - qq) / 2.0;
            qq = qq * m * m;
            double nd = std::fabs(1.0 - qq);
            REQUIRE(nd <= dist + 1e-15);
            dist = nd;
        }
    }
}

TEST_CASE("goldschmidt division on tensors with elementwise denominators") {
    const std::size_t n = 64;
    PrfStream vals(28, "nl.gsgrid");
    DoubleTensor p(vec_shape(n)), q(vec_shape(n));
    for (std::size_t i = 0; i < n; ++i) {
        p.data[i] = 1.0;
        q.data[i] = vals.next_range(0.01, 1.9);
    }
    auto res = run_duo(kCfg, 28, [&](Session& s) {
        PrfStream rng(280, "nl.gsgrid.sh");
        ArithShareTensor ps = mine(s, share_tensor(p, kCfg, rng));
        ArithShareTensor qs = mine(s, share_tensor(q, kCfg, rng));
        return gs_div(s, ps, qs);
    });
    DoubleTensor got = reconstruct(res.r0, res.r1);
    for (std::size_t i = 0; i < n; ++i) {
        double want = gs_div_ref(1.0, q.data[i]);
        REQUIRE(std::fabs(got.data[i] - want) <= 1e-3 * std::max(1.0, want));
    }
    CHECK(res.stats0.total().rounds == 13);
    CHECK(res.stats0.total().bits == 13 * 2 * n * 256);
}

TEST_CASE("deflation by eta preserves the ratio") {
    auto res = run_duo(kCfg, 29, [&](Session& s) {
        PrfStream rng(29, "nl.eta");
        ArithShareTensor p = mine(s, share_scalar(36.0, kCfg, rng));
        ArithShareTensor q = mine(s, share_scalar(61.0, kCfg, rng));
        return gs_div(s, p, q, div_params(5000.0));
    });
    CHECK(std::fabs(reconstruct(res.r0, res.r1).data[0] - 36.0 / 61.0) <= 1e-3);
}
