#include "secmpc/config.hpp"

#include <fstream>
#include <sstream>

namespace secmpc {

ErfBackend parse_erf_backend(const std::string& v) {
    if (v == "poly7") return ErfBackend::Poly7;
    if (v == "fourier7") return ErfBackend::Fourier7;
    throw FormatError("unknown erf_backend: " + v);
}

ThresholdMode parse_threshold_mode(const std::string& v) {
    if (v == "on_erf_argument") return ThresholdMode::OnErfArgument;
    if (v == "verbatim_alg1") return ThresholdMode::VerbatimAlg1;
    throw FormatError("unknown threshold_mode: " + v);
}

VarianceMode parse_variance_mode(const std::string& v) {
    if (v == "mean") return VarianceMode::Mean;
    if (v == "paper_sum") return VarianceMode::PaperSum;
    throw FormatError("unknown variance_mode: " + v);
}

void apply_config_kv(EngineConfig& cfg, const std::string& key, const std::string& value) {
    auto num = [&] { return std::stod(value); };
    auto uns = [&] { return static_cast<unsigned>(std::stoul(value)); };
    if (key == "l")
        cfg.ring.l = uns();
    else if (key == "f")
        cfg.ring.f = uns();
    else if (key == "seed")
        cfg.seed = std::stoull(value);
    else if (key == "erf_backend")
        cfg.kernel.erf_backend = parse_erf_backend(value);
    else if (key == "threshold_mode")
        cfg.kernel.threshold_mode = parse_threshold_mode(value);
    else if (key == "variance_mode")
        cfg.kernel.variance_mode = parse_variance_mode(value);
    else if (key == "eta_layernorm")
        cfg.kernel.eta_layernorm = num();
    else if (key == "eta_softmax")
        cfg.kernel.eta_softmax = num();
    else if (key == "t_rsqrt")
        cfg.kernel.t_rsqrt = uns();
    else if (key == "t_div")
        cfg.kernel.t_div = uns();
    else if (key == "softmax_c")
        cfg.kernel.softmax_c = num();
    else if (key == "epsilon")
        cfg.kernel.epsilon = num();
    else if (key == "guard_bits")
        cfg.kernel.guard_bits = uns();
    else
        throw FormatError("unknown config key: " + key);
}

EngineConfig parse_config_text(const std::string& text, EngineConfig base) {
    std::istringstream is(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto trim = [](std::string v) {
            auto b = v.find_first_not_of(" \t");
            auto e = v.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
        };
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw FormatError("config line " + std::to_string(lineno) + " is not 'key = value'");
        apply_config_kv(base, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    base.validate();
    return base;
}

EngineConfig load_config_file(const std::string& path, EngineConfig base) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot open config: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str(), base);
}

std::map<std::string, std::string> config_echo(const EngineConfig& cfg) {
    auto fmt = [](double v) {
        std::ostringstream os;
        os << v;
        return os.str();
    };
    return {
        {"l", std::to_string(cfg.ring.l)},
        {"f", std::to_string(cfg.ring.f)},
        {"seed", std::to_string(cfg.seed)},
        {"erf_backend", to_string(cfg.kernel.erf_backend)},
        {"threshold_mode", to_string(cfg.kernel.threshold_mode)},
        {"variance_mode", to_string(cfg.kernel.variance_mode)},
        {"eta_layernorm", fmt(cfg.kernel.eta_layernorm)},
        {"eta_softmax", fmt(cfg.kernel.eta_softmax)},
        {"t_rsqrt", std::to_string(cfg.kernel.t_rsqrt)},
        {"t_div", std::to_string(cfg.kernel.t_div)},
        {"softmax_c", fmt(cfg.kernel.softmax_c)},
        {"epsilon", fmt(cfg.kernel.epsilon)},
        {"guard_bits", std::to_string(cfg.kernel.guard_bits)},
    };
}

} // namespace secmpc
