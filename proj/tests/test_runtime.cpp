#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>

#include "secmpc/config.hpp"
#include "secmpc/duo.hpp"
#include "secmpc/encoder.hpp"
#include "secmpc/net.hpp"

using namespace secmpc;

namespace {
const FixedCfg kCfg{64, 16};
const std::string kDataDir = SECMPC_DATA_DIR;

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}
} // namespace

TEST_CASE("tensor file round-trip is bit exact") {
    PrfStream rng(1, "rt.io");
    DoubleTensor t(Shape{std::vector<std::size_t>{3, 4, 2}});
    for (auto& v : t.data) v = rng.next_range(-1e6, 1e6);
    t.data[0] = -0.0;
    t.data[1] = 1e-308;
    std::string path = tmp_path("secmpc_io_test.sft");
    save_tensor(path, t);
    DoubleTensor back = load_tensor(path);
    CHECK(back.shape == t.shape);
    for (std::size_t i = 0; i < t.numel(); ++i) {
        u64 a, b;
        std::memcpy(&a, &t.data[i], 8);
        std::memcpy(&b, &back.data[i], 8);
        REQUIRE(a == b);
    }
    std::remove(path.c_str());
}

TEST_CASE("rank-0 scalar tensor") {
    DoubleTensor t(Shape{});
    t.data = {42.5};
    auto bytes = tensor_to_bytes(t);
    DoubleTensor back = tensor_from_bytes(bytes);
    CHECK(back.shape.rank() == 0);
    CHECK(back.numel() == 1);
    CHECK(back.data[0] == 42.5);
}

TEST_CASE("format errors name the byte offset") {
    DoubleTensor t(vec_shape(4), {1, 2, 3, 4});
    auto bytes = tensor_to_bytes(t);

    auto truncated = bytes;
    truncated.resize(bytes.size() - 9);
    try {
        tensor_from_bytes(truncated);
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("offset") != std::string::npos);
    }

    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    try {
        tensor_from_bytes(bad_magic);
        FAIL("expected a format error");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("magic") != std::string::npos);
        CHECK(std::string(e.what()).find("offset 0") != std::string::npos);
    }

    auto bad_version = bytes;
    bad_version[4] = 9;
    CHECK_THROWS_AS(tensor_from_bytes(bad_version), FormatError);
}

TEST_CASE("weights manifest round-trip") {
    EncoderWeights w = EncoderWeights::random(16, 4, 8, 64, 42);
    auto dir = std::filesystem::temp_directory_path() / "secmpc_manifest_test";
    std::filesystem::create_directories(dir);
    std::string manifest = (dir / "weights.txt").string();
    save_weights(manifest, w.to_tensors());
    EncoderWeights back = EncoderWeights::from_tensors(load_weights(manifest));
    CHECK(back.d == w.d);
    CHECK(back.h == w.h);
    CHECK(back.wq[2].data == w.wq[2].data);
    CHECK(back.b1 == w.b1);
    CHECK(back.gamma2 == w.gamma2);
    std::filesystem::remove_all(dir);
}

TEST_CASE("plain encoder: zero propagation") {
    EncoderWeights w = EncoderWeights::random(16, 4, 8, 64, 7);
    for (auto& v : w.b1) v = 0;
    for (auto& v : w.b2) v = 0;
    for (auto& v : w.beta1) v = 0;
    for (auto& v : w.beta2) v = 0;
    for (auto& v : w.gamma1) v = 1;
    for (auto& v : w.gamma2) v = 1;
    DoubleTensor x(mat_shape(8, 16)); // zeros
    KernelConfig kc = demo_kernel_config();
    DoubleTensor out = encoder_layer_plain(x, w, kc);
    // value projection of zeros is zero, 2quad of constant scores is uniform,
    // the centered numerator is exactly zero through both norms
    for (double v : out.data) CHECK(std::fabs(v) <= 1e-9);
}

TEST_CASE("plain encoder: variance mode changes the output") {
    EncoderWeights w = EncoderWeights::random(16, 4, 8, 64, 42);
    PrfStream rng(42, "rt.vmode");
    DoubleTensor x = random_tensor(mat_shape(8, 16), rng);
    KernelConfig kc = demo_kernel_config();
    DoubleTensor a = encoder_layer_plain(x, w, kc);
    kc.variance_mode = VarianceMode::PaperSum;
    kc.eta_layernorm = 2000.0; // sum-variance regime
    DoubleTensor b = encoder_layer_plain(x, w, kc);
    double dev = 0;
    for (std::size_t i = 0; i < a.numel(); ++i) dev = std::max(dev, std::fabs(a.data[i] - b.data[i]));
    CHECK(dev > 0.01);
}

TEST_CASE("plain encoder golden output for seed 42") {
    EncoderWeights w = EncoderWeights::random(16, 4, 8, 64, 42);
    PrfStream rng(42, "infer.input");
    DoubleTensor x = random_tensor(mat_shape(8, 16), rng);
    DoubleTensor out = encoder_layer_plain(x, w, demo_kernel_config());

    std::string golden_path = kDataDir + "/encoder_golden_seed42.sft";
    if (!std::filesystem::exists(golden_path)) {
        // first verified run commits the golden tensor
        save_tensor(golden_path, out);
        MESSAGE("golden tensor written to ", golden_path);
    }
    DoubleTensor golden = load_tensor(golden_path);
    REQUIRE(golden.shape == out.shape);
    for (std::size_t i = 0; i < out.numel(); ++i)
        REQUIRE(out.data[i] == doctest::Approx(golden.data[i]).epsilon(1e-12));
}

TEST_CASE("mpc encoder matches the plaintext reference") {
    EncoderWeights w = EncoderWeights::random(16, 4, 8, 64, 42);
    PrfStream rng(42, "infer.input");
    DoubleTensor x = random_tensor(mat_shape(8, 16), rng);
    KernelConfig kc = demo_kernel_config();
    DoubleTensor plain = encoder_layer_plain(x, w, kc);

    PrfStream share_rng(42, "infer.shares");
    auto [sh0, sh1] = share_encoder_inputs(x, w, kCfg, share_rng);
    auto res = run_duo(kCfg, 42, [&](Session& s) {
        return encoder_layer_mpc(s, s.party() == Party::S0 ? sh0 : sh1, w, kc);
    });
    DoubleTensor out = reconstruct(res.r0, res.r1);
    double dev = 0;
    for (std::size_t i = 0; i < out.numel(); ++i)
        dev = std::max(dev, std::fabs(out.data[i] - plain.data[i]));
    MESSAGE("mpc/plain max deviation: ", dev);
    CHECK(dev <= 1e-2);

    // per-kernel attribution sums to the session total
    u64 tagged = 0;
    for (const char* tag : {"matmul", "softmax_2quad", "gelu", "layernorm"})
        tagged += res.stats0.tagged(tag).bits;
    CHECK(tagged == res.stats0.total().bits);
    // the softmax substitution leaves gelu as the dominant nonlinear cost
    CHECK(res.stats0.tagged("softmax_2quad").bits < res.stats0.tagged("gelu").bits);
    CHECK(res.stats0.tagged("softmax_2quad").rounds == 14);
    CHECK(res.stats0.tagged("layernorm").rounds == 48);
}

TEST_CASE("mpc encoder zero input stays near zero") {
    EncoderWeights w = EncoderWeights::random(16, 4, 8, 64, 11);
    for (auto& v : w.b1) v = 0;
    for (auto& v : w.b2) v = 0;
    for (auto& v : w.beta1) v = 0;
    for (auto& v : w.beta2) v = 0;
    for (auto& v : w.gamma1) v = 1;
    for (auto& v : w.gamma2) v = 1;
    DoubleTensor x(mat_shape(8, 16));
    KernelConfig kc = demo_kernel_config();
    PrfStream share_rng(11, "rt.zero.shares");
    auto [sh0, sh1] = share_encoder_inputs(x, w, kCfg, share_rng);
    auto res = run_duo(kCfg, 11, [&](Session& s) {
        return encoder_layer_mpc(s, s.party() == Party::S0 ? sh0 : sh1, w, kc);
    });
    DoubleTensor out = reconstruct(res.r0, res.r1);
    for (double v : out.data) CHECK(std::fabs(v) <= 1e-3);
}

TEST_CASE("in-process infer agrees with the plain reference and writes a report") {
    EngineConfig cfg;
    cfg.seed = 42;
    EncoderWeights w = EncoderWeights::random(16, 4, 8, 64, 42);
    PrfStream rng(42, "infer.input");
    DoubleTensor x = random_tensor(mat_shape(8, 16), rng);
    nlohmann::json report;
    DoubleTensor y = infer_inproc(cfg, w, x, &report);
    DoubleTensor plain = encoder_layer_plain(x, w, demo_kernel_config());
    double dev = 0;
    for (std::size_t i = 0; i < y.numel(); ++i)
        dev = std::max(dev, std::fabs(y.data[i] - plain.data[i]));
    CHECK(dev <= 1e-2);
    CHECK(report.contains("total"));
    CHECK(report["config"]["seed"] == "42");
}

TEST_CASE("three-process TCP smoke test") {
    auto spawn = [](const std::vector<std::string>& args) {
        static std::string bin = SECMPC_CLI_PATH;
        std::vector<char*> argv;
        argv.push_back(bin.data());
        auto keep = std::make_shared<std::vector<std::string>>(args);
        for (auto& a : *keep) argv.push_back(a.data());
        argv.push_back(nullptr);
        pid_t pid = fork();
        if (pid == 0) {
            execv(bin.c_str(), argv.data());
            _exit(127);
        }
        return pid;
    };
    auto wait_rc = [](pid_t pid) {
        int st = -1;
        waitpid(pid, &st, 0);
        return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    };

    // matched seeds: beaver-mul smoke self-check succeeds in all three roles
    pid_t d = spawn({"party", "--role", "dealer", "--listen-port", "29441", "--set", "seed=5"});
    usleep(250000);
    pid_t s0 = spawn({"party", "--role", "s0", "--program", "smoke", "--listen-port", "29442",
                      "--dealer-port", "29441", "--set", "seed=5"});
    usleep(150000);
    pid_t s1 = spawn({"party", "--role", "s1", "--program", "smoke", "--peer-port", "29442",
                      "--dealer-port", "29441", "--set", "seed=5"});
    CHECK(wait_rc(s1) == 0);
    CHECK(wait_rc(s0) == 0);
    CHECK(wait_rc(d) == 0);

    // dealer/party seed mismatch is detected and everything exits nonzero
    pid_t d2 = spawn({"party", "--role", "dealer", "--listen-port", "29443", "--set", "seed=5"});
    usleep(250000);
    pid_t s02 = spawn({"party", "--role", "s0", "--program", "smoke", "--listen-port", "29444",
                       "--dealer-port", "29443", "--set", "seed=6"});
    usleep(150000);
    pid_t s12 = spawn({"party", "--role", "s1", "--program", "smoke", "--peer-port", "29444",
                       "--dealer-port", "29443", "--set", "seed=6"});
    CHECK(wait_rc(s12) != 0);
    CHECK(wait_rc(s02) != 0);
    CHECK(wait_rc(d2) != 0);

    // unreachable peer address: connect error exit
    pid_t lone = spawn({"party", "--role", "s1", "--program", "smoke", "--peer-port", "29999",
                        "--dealer-port", "29998", "--set", "seed=5"});
    CHECK(wait_rc(lone) != 0);
}

TEST_CASE("config parsing, overrides, and echo") {
    std::string text = R"(
# engine config
l = 64
f = 16
erf_backend = fourier7
threshold_mode = verbatim_alg1
variance_mode = paper_sum
eta_layernorm = 123.5
eta_softmax = 777
t_rsqrt = 9
t_div = 11
softmax_c = 4.5
epsilon = 1e-4
seed = 99
)";
    EngineConfig cfg = parse_config_text(text);
    CHECK(cfg.kernel.erf_backend == ErfBackend::Fourier7);
    CHECK(cfg.kernel.threshold_mode == ThresholdMode::VerbatimAlg1);
    CHECK(cfg.kernel.variance_mode == VarianceMode::PaperSum);
    CHECK(cfg.kernel.eta_layernorm == 123.5);
    CHECK(cfg.kernel.t_rsqrt == 9);
    CHECK(cfg.seed == 99);

    apply_config_kv(cfg, "erf_backend", "poly7"); // flag-style override
    CHECK(cfg.kernel.erf_backend == ErfBackend::Poly7);

    CHECK_THROWS_AS(parse_config_text("nonsense = 1"), FormatError);
    CHECK_THROWS_AS(parse_config_text("erf_backend = cubic"), FormatError);

    auto echo = config_echo(cfg);
    CHECK(echo.at("eta_softmax") == "777");
    CHECK(echo.at("erf_backend") == "poly7");
    CHECK(echo.at("t_div") == "11");
}
