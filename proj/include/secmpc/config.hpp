#pragma once

#include <map>
#include <string>

#include "secmpc/kernels.hpp"

namespace secmpc {

// Engine-wide configuration: ring parameters, kernel knobs, seed.
struct EngineConfig {
    FixedCfg ring;
    KernelConfig kernel;
    u64 seed = 7;

    void validate() const {
        ring.validate();
        kernel.validate();
    }
};

// Flat "key = value" file mirroring the config field names. Unknown keys are
// an error; '#' starts a comment line.
EngineConfig parse_config_text(const std::string& text, EngineConfig base = {});
EngineConfig load_config_file(const std::string& path, EngineConfig base = {});

// One "key = value" assignment (CLI overrides reuse the file syntax).
void apply_config_kv(EngineConfig& cfg, const std::string& key, const std::string& value);

std::map<std::string, std::string> config_echo(const EngineConfig& cfg);

ErfBackend parse_erf_backend(const std::string& v);
ThresholdMode parse_threshold_mode(const std::string& v);
VarianceMode parse_variance_mode(const std::string& v);

} // namespace secmpc
