#pragma once

#include <json.hpp>

#include "secmpc/bench.hpp"

namespace secmpc {

enum class Role { S0, S1, Dealer };
enum class ProgramKind { Smoke, Infer, BenchPrimitives, BenchKernels, BenchEncoder };

struct NetOptions {
    Role role = Role::S0;
    std::string listen_host = "127.0.0.1";
    int listen_port = 0; // s0: port s1 connects to; dealer: its service port
    std::string peer_host = "127.0.0.1";
    int peer_port = 0;
    std::string dealer_host = "127.0.0.1";
    int dealer_port = 0;
    EngineConfig cfg;
    ProgramKind program = ProgramKind::Smoke;
    std::string weights_manifest; // infer: empty -> seed-42 toy weights
    std::string input_path;      // infer: empty -> seeded random input
    std::string out_path;        // infer: output tensor; bench: report json
    std::string report_path;     // infer: comm report json
};

Role parse_role(const std::string& v);
ProgramKind parse_program(const std::string& v);

// Runs the given role to completion; returns the process exit status.
int run_party(const NetOptions& opt);

// The infer protocol program shared by in-process and TCP deployments.
// Returns the opened output and fills `report` with comm breakdown.
DoubleTensor infer_program(Session& s, const EncoderWeights& w, const DoubleTensor& x,
                           const KernelConfig& kc, u64 seed, nlohmann::json* report);

// In-process infer: runs both parties on threads, returns S0's opened output.
DoubleTensor infer_inproc(const EngineConfig& cfg, const EncoderWeights& w, const DoubleTensor& x,
                          nlohmann::json* report);

} // namespace secmpc
