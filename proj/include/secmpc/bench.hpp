#pragma once

#include <json.hpp>

#include "secmpc/config.hpp"
#include "secmpc/encoder.hpp"

namespace secmpc {

// Benchmark suites parameterized by a live session so the same code runs
// in-process and over TCP. Reports carry measured {rounds, bits} per op and,
// where Table-1/appendix figures are defined (l=64, f=16), the expected values.
nlohmann::json bench_primitives(Session& s);
nlohmann::json bench_kernels(Session& s, const KernelConfig& kc);
nlohmann::json bench_encoder(Session& s, const EncoderShares& sh, const EncoderWeights& w,
                             const KernelConfig& kc);

nlohmann::json bench_suite_inproc(const EngineConfig& cfg, const std::string& suite);

// Strips volatile fields (wall times) for cross-mode comparisons.
nlohmann::json bench_comparable(const nlohmann::json& report);

} // namespace secmpc
