// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Tolerances and expected figures are pinned in code.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

#include "secmpc/approx.hpp"
#include "secmpc/duo.hpp"
#include "secmpc/encoder.hpp"
#include "secmpc/net.hpp"

using namespace secmpc;

namespace {

const FixedCfg kCfg{64, 16};
int g_failures = 0;

struct Criterion {
    std::string name;
    bool ok = true;
    std::ostringstream detail;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit Criterion(std::string n) : name(std::move(n)) {}

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [FAILED: " << what << "]";
        }
    }

    void note(const std::string& s) { detail << " " << s; }

    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    void finish() {
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " " << name << " —" << detail.str() << " ("
                  << std::fixed << seconds() << "s)\n"
                  << std::defaultfloat;
        if (!ok) ++g_failures;
    }
};

ArithShareTensor mine(Session& s, const SharePair& p) {
    return s.party() == Party::S0 ? p.first : p.second;
}

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

// ---- criterion 1: Fourier coefficients ----
void criterion_1() {
    Criterion c("criterion 1: Fourier sine-series coefficients (period 20, 7 terms)");
    const double want[7] = {1.25772,  -0.0299154, 0.382155, -0.0519123,
                            0.196033, -0.0624557, 0.118029};
    auto beta = approx::fourier_coeffs(20.0, 7);
    double worst = 0;
    for (int k = 0; k < 7; ++k) worst = std::max(worst, std::fabs(beta[k] - want[k]));
    c.note("max |beta - published| = " + fmt(worst, 3));
    c.expect(worst <= 1e-4, "coefficient outside 1e-4");
    c.expect(c.seconds() < 1.0, "runtime >= 1s");
    c.finish();
}

// ---- criterion 2: GeLU accuracy ----
void criterion_2() {
    Criterion c("criterion 2: GeLU accuracy (plaintext intervals + MPC backend parity)");
    struct Row {
        double lo, hi, bound;
    };
    for (auto backend : {ErfBackend::Poly7, ErfBackend::Fourier7}) {
        std::string bn = to_string(backend);
        for (Row r : {Row{-1, 1, 0.005}, Row{-5, 5, 0.01}, Row{-10, 10, 0.01}}) {
            auto st =
                approx::error_report(backend, ThresholdMode::OnErfArgument, r.lo, r.hi, 100000, 1);
            if (backend == ErfBackend::Poly7)
                c.note(bn + "[" + fmt(r.lo, 3) + "," + fmt(r.hi, 3) + "]=" + fmt(st.mean_abs_err, 2));
            c.expect(st.mean_abs_err <= r.bound,
                     bn + " mean err " + fmt(st.mean_abs_err) + " > " + fmt(r.bound));
        }
    }

    for (auto backend : {ErfBackend::Poly7, ErfBackend::Fourier7}) {
        KernelConfig kc;
        kc.erf_backend = backend;
        const std::size_t n = 1000;
        PrfStream vals(2, "acc.gelu");
        DoubleTensor x(vec_shape(n));
        for (auto& v : x.data) v = decode_fixed(encode_fixed(vals.next_range(-5, 5), kCfg), kCfg);
        auto res = run_duo(kCfg, 2, [&](Session& s) {
            PrfStream rng(22, "acc.gelu.sh");
            return sgelu(s, mine(s, share_tensor(x, kCfg, rng)), kc);
        });
        DoubleTensor out = reconstruct(res.r0, res.r1);
        double worst = 0;
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, std::fabs(out.data[i] - approx::gelu_segmented(
                                                                backend, kc.threshold_mode, x.data[i])));
        c.note("mpc-vs-" + to_string(backend) + " max " + fmt(worst, 3));
        c.expect(worst <= std::ldexp(1.0, -10), "MPC deviates from its backend beyond 2^-10");
    }
    c.expect(c.seconds() < 60.0, "runtime >= 1 min");
    c.finish();
}

// ---- criterion 3: primitive communication costs ----
void criterion_3() {
    Criterion c("criterion 3: primitive costs (Mul/Square/Sin/Exp exact, LT rounds)");
    auto cost_of = [&](auto&& op) {
        auto res = run_duo(kCfg, 3, [&](Session& s) {
            op(s);
            return 0;
        });
        if (res.stats0.total().rounds != res.stats1.total().rounds ||
            res.stats0.total().bits != res.stats1.total().bits)
            throw ProtocolError("party meters disagree");
        return res.stats0.total();
    };
    PrfStream seedr(3, "acc.prims");

    auto mul = cost_of([&](Session& s) {
        PrfStream rng(31, "acc.mul");
        smul(s, mine(s, share_scalar(3.0, kCfg, rng)), mine(s, share_scalar(4.0, kCfg, rng)));
    });
    c.expect(mul.rounds == 1 && mul.bits == 256,
             "Mul {" + std::to_string(mul.rounds) + "," + std::to_string(mul.bits) + "} != {1,256}");

    auto sq = cost_of([&](Session& s) {
        PrfStream rng(32, "acc.sq");
        ssquare(s, mine(s, share_scalar(-2.0, kCfg, rng)));
    });
    c.expect(sq.rounds == 1 && sq.bits == 128,
             "Square {" + std::to_string(sq.rounds) + "," + std::to_string(sq.bits) + "} != {1,128}");

    auto sin_c = cost_of([&](Session& s) {
        PrfStream rng(33, "acc.sin");
        ssin_period20(s, mine(s, share_scalar(2.0, kCfg, rng)));
    });
    c.expect(sin_c.rounds == 1 && sin_c.bits == 42,
             "Sin {" + std::to_string(sin_c.rounds) + "," + std::to_string(sin_c.bits) + "} != {1,42}");

    auto exp_c = cost_of([&](Session& s) {
        PrfStream rng(34, "acc.exp");
        sexp(s, mine(s, share_scalar(1.0, kCfg, rng)));
    });
    c.expect(exp_c.rounds == 8 && exp_c.bits == 1024,
             "Exp {" + std::to_string(exp_c.rounds) + "," + std::to_string(exp_c.bits) +
                 "} != {8,1024}");

    auto lt = cost_of([&](Session& s) {
        PrfStream rng(35, "acc.lt");
        slt_const(s, mine(s, share_scalar(0.5, kCfg, rng)), 1.0);
    });
    c.expect(lt.rounds == 7, "LT rounds " + std::to_string(lt.rounds) + " != 7");
    c.note("Mul{1,256} Square{1,128} Sin{1,42} Exp{8,1024} LT{7," + std::to_string(lt.bits) +
           " bits reported}");
    c.finish();
}

// ---- criterion 4: kernel communication costs ----
void criterion_4() {
    Criterion c("criterion 4: kernel costs (gs_div, gs_rsqrt, layernorm, softmax_2quad)");
    KernelConfig kc;

    auto div_res = run_duo(kCfg, 4, [&](Session& s) {
        PrfStream rng(41, "acc.div");
        return gs_div(s, mine(s, share_scalar(1.0, kCfg, rng)), mine(s, share_scalar(0.5, kCfg, rng)));
    });
    auto dc = div_res.stats0.total();
    c.expect(dc.rounds == 13 && dc.bits == 6656,
             "gs_div {" + std::to_string(dc.rounds) + "," + std::to_string(dc.bits) + "} != {13,6656}");

    auto rs_res = run_duo(kCfg, 4, [&](Session& s) {
        PrfStream rng(42, "acc.rsqrt");
        return gs_rsqrt(s, mine(s, share_scalar(0.25, kCfg, rng)));
    });
    auto rc = rs_res.stats0.total();
    c.expect(rc.rounds == 22 && rc.bits == 7040,
             "gs_rsqrt {" + std::to_string(rc.rounds) + "," + std::to_string(rc.bits) +
                 "} != {22,7040}");

    auto ln_res = run_duo(kCfg, 4, [&](Session& s) {
        PrfStream rng(43, "acc.ln");
        DoubleTensor x(vec_shape(1), {1.0});
        return slayernorm(s, mine(s, share_tensor(x, kCfg, rng)), {1.0}, {0.0}, kc);
    });
    auto lc = ln_res.stats0.total();
    c.expect(lc.rounds == 24 && lc.bits == 7424,
             "layernorm {" + std::to_string(lc.rounds) + "," + std::to_string(lc.bits) +
                 "} != {24,7424}");

    auto sm_res = run_duo(kCfg, 4, [&](Session& s) {
        PrfStream rng(44, "acc.sm");
        DoubleTensor x(vec_shape(1), {0.0});
        return ssoftmax_2quad(s, mine(s, share_tensor(x, kCfg, rng)), kc);
    });
    auto sc = sm_res.stats0.total();
    // Published total: 23 rounds / 6,784 bits. The same source's decomposition
    // (one square = 1 round/128 bits, 13 iterations of two merged multiplies =
    // 13 rounds/6,656 bits) only adds up to 14 rounds, which is what a
    // faithful implementation measures; the bits match exactly.
    c.note("softmax_2quad measured {" + std::to_string(sc.rounds) + "," + std::to_string(sc.bits) +
           "}, pinned {23,6784}");
    c.expect(sc.rounds == 23, "softmax_2quad rounds " + std::to_string(sc.rounds) +
                                  " != pinned 23 (decomposition supports 14)");
    c.expect(sc.bits == 6784, "softmax_2quad bits " + std::to_string(sc.bits) + " != 6784");
    c.finish();
}

// ---- criterion 5: Goldschmidt correctness on deflated grids ----
void criterion_5() {
    Criterion c("criterion 5: Goldschmidt grids vs plaintext oracles (1e-3 relative)");
    const std::size_t n = 10000;

    // grid points quantized to the protocol's fixed-point inputs, so the
    // oracle divides exactly what the protocol divides
    DoubleTensor p(vec_shape(n)), q(vec_shape(n));
    for (std::size_t i = 0; i < n; ++i) {
        p.data[i] = 1.0;
        double raw = 0.001 + (1.999 - 0.001) * static_cast<double>(i) / (n - 1);
        q.data[i] = decode_fixed(encode_fixed(raw, kCfg), kCfg);
    }
    auto res = run_duo(kCfg, 5, [&](Session& s) {
        PrfStream rng(51, "acc.divgrid");
        ArithShareTensor ps = mine(s, share_tensor(p, kCfg, rng));
        ArithShareTensor qs = mine(s, share_tensor(q, kCfg, rng));
        return gs_div(s, ps, qs, div_params(1.0, 13));
    });
    DoubleTensor got = reconstruct(res.r0, res.r1);
    double worst_div = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double want = gs_div_ref(1.0, q.data[i], 13);
        worst_div = std::max(worst_div, std::fabs(got.data[i] - want) / std::fabs(want));
    }
    c.note("div worst rel " + fmt(worst_div, 3));
    c.expect(worst_div <= 1e-3, "gs_div relative error " + fmt(worst_div) + " > 1e-3");

    DoubleTensor q2(vec_shape(n));
    for (std::size_t i = 0; i < n; ++i) {
        double raw = 0.001 + (2.99 - 0.001) * static_cast<double>(i) / (n - 1);
        q2.data[i] = decode_fixed(encode_fixed(raw, kCfg), kCfg);
    }
    auto res2 = run_duo(kCfg, 5, [&](Session& s) {
        PrfStream rng(52, "acc.rsqrtgrid");
        return gs_rsqrt(s, mine(s, share_tensor(q2, kCfg, rng)), rsqrt_params(1.0, 11));
    });
    DoubleTensor got2 = reconstruct(res2.r0, res2.r1);
    double worst_rs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double want = gs_rsqrt_ref(q2.data[i], 11);
        worst_rs = std::max(worst_rs, std::fabs(got2.data[i] - want) / std::fabs(want));
    }
    c.note("rsqrt worst rel " + fmt(worst_rs, 3));
    c.expect(worst_rs <= 1e-3, "gs_rsqrt relative error " + fmt(worst_rs) + " > 1e-3");
    c.expect(c.seconds() < 120.0, "runtime >= 2 min");
    c.finish();
}

// ---- criterion 6: protocol-vs-oracle equivalence ----
void criterion_6() {
    Criterion c("criterion 6: protocol-vs-plaintext-oracle equivalence");

    { // exhaustive comparison at l = 16
        FixedCfg c16{16, 4};
        const std::size_t n = 1 << 16;
        auto res = run_duo(c16, 6, [&](Session& s) {
            PrfStream rng(61, "acc.lt16");
            RingTensor all(vec_shape(n));
            for (std::size_t i = 0; i < n; ++i) all.data[i] = i;
            ArithShareTensor xs = mine(s, share_raw(all, c16, rng, 0));
            ArithShareTensor zero(s.party(), c16, vec_shape(n), 0);
            return slt(s, xs, zero);
        });
        RingTensor got = reconstruct_raw(res.r0, res.r1);
        std::size_t bad = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (got.data[i] != (to_signed(c16, i) < 0 ? 1u : 0u)) ++bad;
        c.note("lt exhaustive errors " + std::to_string(bad) + "/65536");
        c.expect(bad == 0, "exhaustive comparison mismatches");
    }

    { // tree max, exact
        PrfStream vals(62, "acc.max");
        std::size_t bad = 0;
        const int trials = 125; // 8-wide batches -> 1000 vectors
        for (int t = 0; t < trials; ++t) {
            const std::size_t rows = 8, w = 8;
            std::vector<DoubleTensor> xs(rows, DoubleTensor(vec_shape(w)));
            for (auto& x : xs)
                for (auto& v : x.data)
                    v = decode_fixed(encode_fixed(vals.next_range(-50, 50), kCfg), kCfg);
            for (std::size_t r = 0; r < rows; ++r) {
                auto res = run_duo(kCfg, 6200 + t * 8 + r, [&](Session& s) {
                    PrfStream rng(62000 + t * 8 + r, "acc.max.sh");
                    return smax(s, mine(s, share_tensor(xs[r], kCfg, rng)));
                });
                double want = *std::max_element(xs[r].data.begin(), xs[r].data.end());
                if (reconstruct(res.r0, res.r1).data[0] != want) ++bad;
            }
        }
        c.expect(bad == 0, "max mismatches: " + std::to_string(bad));
    }

    { // exponential vs repeated-squaring oracle
        const std::size_t n = 1000;
        PrfStream vals(63, "acc.exp");
        DoubleTensor x(vec_shape(n));
        for (auto& v : x.data) v = vals.next_range(-16, 8);
        auto res = run_duo(kCfg, 63, [&](Session& s) {
            PrfStream rng(630, "acc.exp.sh");
            return sexp(s, mine(s, share_tensor(x, kCfg, rng)));
        });
        DoubleTensor got = reconstruct(res.r0, res.r1);
        double worst = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double want = sexp_ref(x.data[i]);
            worst = std::max(worst, std::fabs(got.data[i] - want) / std::max(1.0, want));
        }
        c.note("exp worst " + fmt(worst, 3));
        c.expect(worst <= 1e-3, "exp deviates from oracle: " + fmt(worst));
    }

    { // reciprocal vs Newton oracle across the basin
        PrfStream vals(64, "acc.recip");
        double worst = 0;
        for (int t = 0; t < 1000; ++t) {
            double x = std::exp(vals.next_range(std::log(1.0 / 64), std::log(64.0)));
            auto res = run_duo(kCfg, 6400 + t, [&](Session& s) {
                PrfStream rng(64000 + t, "acc.recip.sh");
                return srecip_newton(s, mine(s, share_scalar(x, kCfg, rng)));
            });
            double want = srecip_ref(x);
            worst = std::max(worst,
                             std::fabs(reconstruct(res.r0, res.r1).data[0] - want) /
                                 std::max(1.0, want));
        }
        c.note("recip worst " + fmt(worst, 3));
        c.expect(worst <= 1e-3, "reciprocal deviates: " + fmt(worst));
    }

    { // sine vs plaintext sin(pi x / 10)
        const std::size_t n = 10000;
        PrfStream vals(65, "acc.sin");
        DoubleTensor x(vec_shape(n));
        for (auto& v : x.data) v = vals.next_range(-10, 10);
        auto res = run_duo(kCfg, 65, [&](Session& s) {
            PrfStream rng(650, "acc.sin.sh");
            return ssin_period20(s, mine(s, share_tensor(x, kCfg, rng)));
        });
        DoubleTensor got = reconstruct(res.r0, res.r1);
        double worst = 0;
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, std::fabs(got.data[i] -
                                              std::sin(std::numbers::pi * x.data[i] / 10.0)));
        c.note("sin worst " + fmt(worst, 3));
        c.expect(worst <= std::ldexp(1.0, -12), "sine deviates: " + fmt(worst));
    }

    { // segmented erf vs its plaintext backend, and vs erf on the segment
        const std::size_t n = 1000;
        PrfStream vals(66, "acc.erf");
        DoubleTensor x(vec_shape(n));
        for (auto& v : x.data) v = decode_fixed(encode_fixed(vals.next_range(-3, 3), kCfg), kCfg);
        KernelConfig kc;
        auto res = run_duo(kCfg, 66, [&](Session& s) {
            PrfStream rng(660, "acc.erf.sh");
            ArithShareTensor xh = mine(s, share_tensor(x, kCfg, rng));
            return serf(s, xh, xh, kc);
        });
        DoubleTensor got = reconstruct(res.r0, res.r1);
        double worst_backend = 0, worst_erf = 0;
        for (std::size_t i = 0; i < n; ++i) {
            worst_backend = std::max(
                worst_backend,
                std::fabs(got.data[i] - approx::erf_segmented(ErfBackend::Poly7, x.data[i])));
            if (std::fabs(x.data[i]) <= 1.65)
                worst_erf = std::max(worst_erf, std::fabs(got.data[i] - approx::erf_ref(x.data[i])));
        }
        c.note("erf-vs-backend " + fmt(worst_backend, 3));
        c.expect(worst_backend <= std::ldexp(1.0, -10), "erf deviates from backend");
        c.expect(worst_erf <= 0.01, "erf deviates from erf inside the segment");
    }
    c.finish();
}

// ---- criterion 7: encoder parity, in-process and three-process TCP ----
pid_t spawn_party(const std::vector<std::string>& args) {
    std::vector<char*> argv;
    static std::string bin = SECMPC_CLI_PATH;
    argv.push_back(bin.data());
    static std::vector<std::string> keep;
    keep = args;
    for (auto& a : keep) argv.push_back(a.data());
    argv.push_back(nullptr);
    pid_t pid = fork();
    if (pid == 0) {
        execv(bin.c_str(), argv.data());
        _exit(127);
    }
    return pid;
}

void criterion_7() {
    Criterion c("criterion 7: encoder parity across 20 seeds + TCP/in-process identity");
    double worst = 0;
    for (u64 seed = 1; seed <= 20; ++seed) {
        EncoderWeights w = EncoderWeights::random(16, 4, 8, 64, seed);
        PrfStream rng(seed, "infer.input");
        DoubleTensor x = random_tensor(mat_shape(8, 16), rng);
        KernelConfig kc = demo_kernel_config();
        DoubleTensor plain = encoder_layer_plain(x, w, kc);
        PrfStream share_rng(seed, "infer.shares");
        auto [sh0, sh1] = share_encoder_inputs(x, w, kCfg, share_rng);
        auto res = run_duo(kCfg, seed, [&](Session& s) {
            return encoder_layer_mpc(s, s.party() == Party::S0 ? sh0 : sh1, w, kc);
        });
        DoubleTensor out = reconstruct(res.r0, res.r1);
        for (std::size_t i = 0; i < out.numel(); ++i)
            worst = std::max(worst, std::fabs(out.data[i] - plain.data[i]));
    }
    c.note("20-seed max-abs " + fmt(worst, 3));
    c.expect(worst <= 1e-2, "encoder parity " + fmt(worst) + " > 1e-2");

    // TCP identity on seed 42: the opened output must be bit-identical to the
    // in-process run with the same seed.
    {
        EngineConfig cfg;
        cfg.seed = 42;
        EncoderWeights w = EncoderWeights::random(16, 4, 8, 64, 42);
        PrfStream rng(42, "infer.input");
        DoubleTensor x = random_tensor(mat_shape(8, 16), rng);
        DoubleTensor local = infer_inproc(cfg, w, x, nullptr);

        auto tmp = std::filesystem::temp_directory_path();
        std::string out_path = (tmp / "secmpc_acc_tcp_out.sft").string();
        std::string rep_path = (tmp / "secmpc_acc_tcp_rep.json").string();
        std::remove(out_path.c_str());

        pid_t dealer = spawn_party({"party", "--role", "dealer", "--listen-port", "29431",
                                    "--set", "seed=42"});
        usleep(300000);
        pid_t s0 = spawn_party({"party", "--role", "s0", "--program", "infer", "--listen-port",
                                "29432", "--dealer-port", "29431", "--set", "seed=42", "--out",
                                out_path, "--report", rep_path});
        usleep(200000);
        pid_t s1 = spawn_party({"party", "--role", "s1", "--program", "infer", "--peer-port",
                                "29432", "--dealer-port", "29431", "--set", "seed=42"});
        int st_d = -1, st_0 = -1, st_1 = -1;
        waitpid(dealer, &st_d, 0);
        waitpid(s0, &st_0, 0);
        waitpid(s1, &st_1, 0);
        bool exits_ok = WIFEXITED(st_d) && WEXITSTATUS(st_d) == 0 && WIFEXITED(st_0) &&
                        WEXITSTATUS(st_0) == 0 && WIFEXITED(st_1) && WEXITSTATUS(st_1) == 0;
        c.expect(exits_ok, "TCP processes exited nonzero");
        if (exits_ok) {
            DoubleTensor tcp_out = load_tensor(out_path);
            bool identical = tcp_out.shape == local.shape;
            for (std::size_t i = 0; identical && i < local.numel(); ++i) {
                u64 a, b;
                std::memcpy(&a, &local.data[i], 8);
                std::memcpy(&b, &tcp_out.data[i], 8);
                identical = (a == b);
            }
            c.note(std::string("tcp output ") + (identical ? "bit-identical" : "DIFFERS"));
            c.expect(identical, "TCP and in-process outputs differ");
        }
    }
    // the bench suites also meter identically across deployment modes
    {
        EngineConfig cfg;
        cfg.seed = 42;
        nlohmann::json local = bench_comparable(bench_suite_inproc(cfg, "primitives"));
        auto tmp = std::filesystem::temp_directory_path();
        std::string rep = (tmp / "secmpc_acc_tcp_bench.json").string();
        std::remove(rep.c_str());
        pid_t dealer = spawn_party({"party", "--role", "dealer", "--listen-port", "29434",
                                    "--set", "seed=42"});
        usleep(250000);
        pid_t s0 = spawn_party({"party", "--role", "s0", "--program", "bench-primitives",
                                "--listen-port", "29435", "--dealer-port", "29434", "--set",
                                "seed=42", "--out", rep});
        usleep(150000);
        pid_t s1 = spawn_party({"party", "--role", "s1", "--program", "bench-primitives",
                                "--peer-port", "29435", "--dealer-port", "29434", "--set",
                                "seed=42"});
        int st;
        waitpid(dealer, &st, 0);
        waitpid(s0, &st, 0);
        waitpid(s1, &st, 0);
        std::ifstream is(rep);
        c.expect(is.good(), "TCP bench report missing");
        if (is.good()) {
            nlohmann::json tcp = bench_comparable(nlohmann::json::parse(is));
            c.expect(tcp == local, "bench rounds/bits differ between TCP and in-process");
            if (tcp == local) c.note("bench meters identical across modes");
        }
    }
    c.expect(c.seconds() < 300.0, "runtime >= 5 min");
    c.finish();
}

// ---- criterion 8: sharing security smoke properties ----
void criterion_8() {
    Criterion c("criterion 8: sharing smoke properties (Rec-Shr, uniformity at alpha=0.001)");
    constexpr double kChi2Crit255 = 330.52;

    PrfStream rng(8, "acc.recshr");
    std::size_t checked = 0, bad = 0;
    for (int t = 0; t < 200; ++t) {
        DoubleTensor x(vec_shape(500));
        for (auto& v : x.data) v = rng.next_range(-1000, 1000);
        auto [s0, s1] = share_tensor(x, kCfg, rng);
        RingTensor back = reconstruct_raw(s0, s1);
        for (std::size_t i = 0; i < x.numel(); ++i, ++checked)
            if (back.data[i] != encode_fixed(x.data[i], kCfg)) ++bad;
    }
    c.expect(checked == 100000 && bad == 0, "Rec(Shr(x)) mismatches: " + std::to_string(bad));

    auto chi2_low8 = [](const std::vector<u64>& samples) {
        std::vector<double> bins(256, 0);
        for (u64 v : samples) bins[v & 0xFF] += 1;
        double expect = static_cast<double>(samples.size()) / 256.0;
        double chi2 = 0;
        for (double b : bins) chi2 += (b - expect) * (b - expect) / expect;
        return chi2;
    };

    std::vector<u64> marg;
    marg.reserve(100000);
    for (int i = 0; i < 100000; ++i) {
        auto [s0, s1] = share_scalar(3.25, kCfg, rng);
        marg.push_back(s0.data[0]);
    }
    double chi_m = chi2_low8(marg);
    c.note("share-marginal chi2 " + fmt(chi_m, 4));
    c.expect(chi_m < kChi2Crit255, "share marginal fails chi-square");

    // Beaver openings over fresh triples with a fixed secret
    const std::size_t n = 100000;
    auto res = run_duo(kCfg, 8, [&](Session& s) {
        PrfStream srng(80, "acc.beaver");
        DoubleTensor x(vec_shape(n), std::vector<double>(n, 1.0));
        ArithShareTensor xs = mine(s, share_tensor(x, kCfg, srng));
        std::vector<u64> ds(n);
        for (std::size_t i = 0; i < n; ++i)
            ds[i] = ring_sub(kCfg, xs.data[i], s.randomness().next_beaver().a);
        auto peer = s.exchange(ds);
        for (std::size_t i = 0; i < n; ++i) ds[i] = ring_add(kCfg, ds[i], peer[i]);
        return ds;
    });
    double chi_d = chi2_low8(res.r0);
    c.note("beaver-opening chi2 " + fmt(chi_d, 4));
    c.expect(chi_d < kChi2Crit255, "beaver openings fail chi-square");
    c.finish();
}

// ---- criterion 9: desk-scale substitution for the headline comparisons ----
void criterion_9() {
    Criterion c("criterion 9: 2quad-vs-exact softmax volume at n=128 (bits < 1/8)");
    KernelConfig kc;
    PrfStream vals(9, "acc.ratio");
    DoubleTensor x(vec_shape(128));
    for (auto& v : x.data) v = vals.next_range(-0.5, 0.5);
    auto res = run_duo(kCfg, 9, [&](Session& s) {
        PrfStream rng(90, "acc.ratio.sh");
        ArithShareTensor xs = mine(s, share_tensor(x, kCfg, rng));
        auto before = s.meter().total();
        ssoftmax_2quad(s, xs, kc);
        auto midp = s.meter().total();
        ssoftmax_exact(s, xs, kc);
        auto after = s.meter().total();
        return std::pair<CommCounters, CommCounters>{delta(before, midp), delta(midp, after)};
    });
    CommCounters q2 = res.r0.first, ex = res.r0.second;
    double bit_ratio = static_cast<double>(q2.bits) / static_cast<double>(ex.bits);
    double round_ratio = static_cast<double>(q2.rounds) / static_cast<double>(ex.rounds);
    c.note("2quad {" + std::to_string(q2.rounds) + "," + std::to_string(q2.bits) + "} exact {" +
           std::to_string(ex.rounds) + "," + std::to_string(ex.bits) + "} bit-ratio " +
           fmt(bit_ratio, 3) + " round-ratio " + fmt(round_ratio, 3));
    c.expect(q2.bits < ex.bits, "2quad not cheaper in bits at all");
    // Pinned threshold: one eighth of the exact baseline's volume. A
    // Table-1-faithful exact baseline (874..3456-bit comparisons) is not 8x
    // the 2quad volume; the measured ratio is reported above.
    c.expect(q2.bits * 8 < ex.bits, "bits ratio " + fmt(bit_ratio, 3) + " not below 1/8");
    c.finish();
}

} // namespace

int main() {
    std::cout << "secmpc acceptance suite (l=64, f=16)\n";
    try {
        criterion_1();
        criterion_2();
        criterion_3();
        criterion_4();
        criterion_5();
        criterion_6();
        criterion_7();
        criterion_8();
        criterion_9();
    } catch (const std::exception& e) {
        std::cerr << "acceptance aborted: " << e.what() << "\n";
        return 2;
    }
    std::cout << (g_failures == 0 ? "all criteria passed\n"
                                  : std::to_string(g_failures) + " criterion(s) failed\n");
    return g_failures == 0 ? 0 : 1;
}
