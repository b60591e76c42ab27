// Command-line entry points: run protocol parties over TCP, benchmark and
// accuracy suites, Fourier coefficient derivation, and the toy encoder demo.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "secmpc/approx.hpp"
#include "secmpc/bench.hpp"
#include "secmpc/duo.hpp"
#include "secmpc/net.hpp"

using namespace secmpc;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides; // key=value
    EngineConfig resolve() const {
        EngineConfig cfg;
        if (const char* env = std::getenv("SECMPC_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
        if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
        for (const auto& kv : overrides) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) throw FormatError("override must be key=value: " + kv);
            apply_config_kv(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        cfg.validate();
        return cfg;
    }
};

void add_common(CLI::App* app, CommonOpts& c, EngineConfig&, std::vector<std::string>& kv_sink) {
    app->add_option("--config", c.config_path, "key = value config file");
    app->add_option("--set", kv_sink, "config override key=value (repeatable)");
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream os(path);
    if (!os) throw FormatError("cannot open for writing: " + path);
    os << text;
}

int cmd_coeffs(double period, unsigned terms) {
    auto beta = approx::fourier_coeffs(period, terms);
    std::cout << "period " << period << ", " << terms << "-term sine series amplitudes:\n";
    std::cout << std::setprecision(6);
    for (unsigned k = 0; k < terms; ++k)
        std::cout << "  beta_" << (k + 1) << " = " << beta[k] << "\n";
    return 0;
}

int cmd_accuracy(const EngineConfig& cfg, const std::string& suite, std::size_t samples,
                 const std::string& out) {
    std::ostringstream csv;
    if (suite == "gelu" || suite == "all") {
        std::vector<std::tuple<std::string, double, double, approx::ErrorStats>> rows;
        for (auto backend : {ErfBackend::Poly7, ErfBackend::Fourier7}) {
            for (auto [lo, hi] : std::initializer_list<std::pair<double, double>>{
                     {-1, 1}, {-5, 5}, {-10, 10}}) {
                rows.emplace_back(to_string(backend), lo, hi,
                                  approx::error_report(backend, cfg.kernel.threshold_mode, lo, hi,
                                                       samples, cfg.seed));
            }
        }
        // MPC-vs-plaintext column: batched sgelu against its own backend.
        std::size_t n = 256;
        for (auto backend : {ErfBackend::Poly7, ErfBackend::Fourier7}) {
            KernelConfig kc = cfg.kernel;
            kc.erf_backend = backend;
            PrfStream rng(cfg.seed, "accuracy.mpc");
            DoubleTensor x(vec_shape(n));
            for (auto& v : x.data) v = rng.next_range(-5, 5);
            auto pair = share_tensor(x, cfg.ring, rng);
            auto res = run_duo(cfg.ring, cfg.seed, [&](Session& s) {
                return sgelu(s, s.party() == Party::S0 ? pair.first : pair.second, kc);
            });
            DoubleTensor got = reconstruct(res.r0, res.r1);
            approx::ErrorStats st;
            double sum = 0, sum2 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                double e = std::fabs(got.data[i] -
                                     approx::gelu_segmented(backend, kc.threshold_mode, x.data[i]));
                sum += e;
                sum2 += e * e;
                st.max_abs_err = std::max(st.max_abs_err, e);
            }
            st.mean_abs_err = sum / n;
            st.err_var = sum2 / n - st.mean_abs_err * st.mean_abs_err;
            rows.emplace_back(std::string("mpc_vs_backend_") + to_string(backend), -5, 5, st);
        }
        csv << approx::error_report_csv(rows);
    }
    if (suite == "periods" || suite == "all") {
        auto study = approx::period_study({10, 20, 30, 40}, 7);
        csv << approx::period_study_csv(study);
    }
    if (suite != "gelu" && suite != "periods" && suite != "all")
        throw FormatError("unknown accuracy suite: " + suite);
    std::ostringstream hdr;
    hdr << "# seed=" << cfg.seed << " l=" << cfg.ring.l << " f=" << cfg.ring.f << " erf_backend="
        << to_string(cfg.kernel.erf_backend) << " eta_ln=" << cfg.kernel.eta_layernorm
        << " eta_sm=" << cfg.kernel.eta_softmax << " t_rsqrt=" << cfg.kernel.t_rsqrt
        << " t_div=" << cfg.kernel.t_div << "\n";
    write_text(out, hdr.str() + csv.str());
    return 0;
}

int cmd_bench(const EngineConfig& cfg, const std::string& suite, const std::string& out) {
    json report = bench_suite_inproc(cfg, suite);
    write_text(out, report.dump(2) + "\n");
    return 0;
}

int cmd_infer(const EngineConfig& cfg, const std::string& weights, const std::string& input,
              const std::string& out, const std::string& report_path) {
    EncoderWeights w = weights.empty() ? EncoderWeights::random(16, 4, 8, 64, cfg.seed)
                                       : EncoderWeights::from_tensors(load_weights(weights));
    DoubleTensor x;
    if (!input.empty())
        x = load_tensor(input);
    else {
        PrfStream rng(cfg.seed, "infer.input");
        x = random_tensor(mat_shape(w.s, w.d), rng);
    }
    json report;
    DoubleTensor y = infer_inproc(cfg, w, x, &report);

    KernelConfig kc = demo_kernel_config();
    kc.erf_backend = cfg.kernel.erf_backend;
    DoubleTensor ref = encoder_layer_plain(x, w, kc);
    double max_dev = 0;
    for (std::size_t i = 0; i < y.numel(); ++i)
        max_dev = std::max(max_dev, std::fabs(y.data[i] - ref.data[i]));
    report["max_abs_dev_vs_plain"] = max_dev;

    if (!out.empty()) save_tensor(out, y);
    write_text(report_path, report.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"secmpc: two-party additive-sharing MPC engine"};
    app.require_subcommand(1);

    CommonOpts common;
    EngineConfig dummy;

    // party
    auto* party = app.add_subcommand("party", "run one protocol role over TCP");
    std::string role_s = "s0", program_s = "smoke";
    NetOptions nopt;
    party->add_option("--role", role_s, "s0 | s1 | dealer")->required();
    party->add_option("--program", program_s, "smoke | infer | bench-primitives | bench-kernels | bench-encoder");
    party->add_option("--listen-host", nopt.listen_host);
    party->add_option("--listen-port", nopt.listen_port);
    party->add_option("--peer-host", nopt.peer_host);
    party->add_option("--peer-port", nopt.peer_port);
    party->add_option("--dealer-host", nopt.dealer_host);
    party->add_option("--dealer-port", nopt.dealer_port);
    party->add_option("--weights", nopt.weights_manifest);
    party->add_option("--input", nopt.input_path);
    party->add_option("--out", nopt.out_path);
    party->add_option("--report", nopt.report_path);
    add_common(party, common, dummy, common.overrides);

    // bench
    auto* bench = app.add_subcommand("bench", "in-process benchmark suites");
    std::string bench_suite = "primitives", bench_out = "-";
    bench->add_option("suite", bench_suite, "primitives | kernels | encoder");
    bench->add_option("--out", bench_out);
    add_common(bench, common, dummy, common.overrides);

    // accuracy
    auto* acc = app.add_subcommand("accuracy", "accuracy report suites (CSV)");
    std::string acc_suite = "all", acc_out = "-";
    std::size_t acc_samples = 100000;
    acc->add_option("suite", acc_suite, "gelu | periods | all");
    acc->add_option("--samples", acc_samples);
    acc->add_option("--out", acc_out);
    add_common(acc, common, dummy, common.overrides);

    // coeffs
    auto* coeffs = app.add_subcommand("coeffs", "sine-series amplitudes for erf");
    double period = 20.0;
    unsigned terms = 7;
    coeffs->add_option("--period", period);
    coeffs->add_option("--terms", terms)->check(CLI::PositiveNumber);

    // infer
    auto* infer = app.add_subcommand("infer", "toy encoder-layer inference (in-process)");
    std::string in_weights, in_input, in_out, in_report = "-";
    infer->add_option("--weights", in_weights, "weights manifest path");
    infer->add_option("--input", in_input, "input tensor (.sft)");
    infer->add_option("--out", in_out, "output tensor path");
    infer->add_option("--report", in_report, "comm report json path");
    add_common(infer, common, dummy, common.overrides);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*coeffs) return cmd_coeffs(period, terms);
        EngineConfig cfg = common.resolve();
        if (*party) {
            nopt.role = parse_role(role_s);
            nopt.program = parse_program(program_s);
            nopt.cfg = cfg;
            return run_party(nopt);
        }
        if (*bench) return cmd_bench(cfg, bench_suite, bench_out);
        if (*acc) return cmd_accuracy(cfg, acc_suite, acc_samples, acc_out);
        if (*infer) return cmd_infer(cfg, in_weights, in_input, in_out, in_report);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
