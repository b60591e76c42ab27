#include "secmpc/net.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include "secmpc/duo.hpp"

namespace secmpc {

using nlohmann::json;

Role parse_role(const std::string& v) {
    if (v == "s0") return Role::S0;
    if (v == "s1") return Role::S1;
    if (v == "dealer") return Role::Dealer;
    throw FormatError("unknown role: " + v);
}

ProgramKind parse_program(const std::string& v) {
    if (v == "smoke") return ProgramKind::Smoke;
    if (v == "infer") return ProgramKind::Infer;
    if (v == "bench-primitives") return ProgramKind::BenchPrimitives;
    if (v == "bench-kernels") return ProgramKind::BenchKernels;
    if (v == "bench-encoder") return ProgramKind::BenchEncoder;
    throw FormatError("unknown program: " + v);
}

namespace {

ArithShareTensor own_share(Session& s, const SharePair& pair) {
    return s.party() == Party::S0 ? pair.first : pair.second;
}

// Beaver multiplication smoke test with a plaintext self-check.
json smoke_program(Session& s, u64 seed, bool dry) {
    PrfStream rng(seed, "smoke.inputs");
    double xv = 3.25, yv = -2.5;
    ArithShareTensor x = own_share(s, share_scalar(xv, s.cfg(), rng));
    ArithShareTensor y = own_share(s, share_scalar(yv, s.cfg(), rng));
    ArithShareTensor z = smul(s, x, y);
    DoubleTensor opened = open_tensor(s, z);
    double want = xv * yv;
    if (!dry && std::fabs(opened.data[0] - want) > 1e-3)
        throw ProtocolError("smoke self-check failed: reconstructed " +
                            std::to_string(opened.data[0]) + ", expected " + std::to_string(want) +
                            " (party seed mismatch?)");
    return json{{"smoke", "ok"}, {"product", opened.data[0]}};
}

json meter_breakdown(const CommStats& m) {
    json breakdown = json::object();
    for (const char* tag : {"matmul", "softmax_2quad", "gelu", "layernorm"}) {
        CommCounters c = m.tagged(tag);
        breakdown[tag] = json{{"rounds", c.rounds}, {"bits", c.bits}};
    }
    CommCounters t = m.total();
    breakdown["total"] = json{{"rounds", t.rounds}, {"bits", t.bits}};
    breakdown["framing_bytes"] = m.framing_bytes();
    return breakdown;
}

} // namespace

DoubleTensor infer_program(Session& s, const EncoderWeights& w, const DoubleTensor& x,
                           const KernelConfig& kc, u64 seed, json* report) {
    PrfStream share_rng(seed, "infer.shares");
    auto [sh0, sh1] = share_encoder_inputs(x, w, s.cfg(), share_rng);
    const EncoderShares& mine = s.party() == Party::S0 ? sh0 : sh1;
    ArithShareTensor out = encoder_layer_mpc(s, mine, w, kc);
    DoubleTensor opened = open_tensor(s, out);
    if (report) *report = meter_breakdown(s.meter());
    return opened;
}

DoubleTensor infer_inproc(const EngineConfig& cfg, const EncoderWeights& w, const DoubleTensor& x,
                          json* report) {
    KernelConfig kc = demo_kernel_config();
    kc.erf_backend = cfg.kernel.erf_backend;
    kc.threshold_mode = cfg.kernel.threshold_mode;
    json rep;
    auto res = run_duo(cfg.ring, cfg.seed, [&](Session& s) {
        return infer_program(s, w, x, kc, cfg.seed, s.party() == Party::S0 ? &rep : nullptr);
    });
    if (report) {
        *report = rep;
        (*report)["config"] = config_echo(cfg);
        (*report)["mode"] = "in-process";
    }
    return res.r0;
}

namespace {

int run_dealer(const NetOptions& opt) {
    TcpListener listener(opt.listen_host, opt.listen_port);
    u64 master = derive_key(opt.cfg.seed, "offline");
    u64 expect_hash = derive_key(opt.cfg.seed, "handshake");

    std::vector<std::unique_ptr<TcpChannel>> chans;
    std::vector<Party> parties;
    std::vector<Budget> budgets;
    for (int i = 0; i < 2; ++i) {
        auto ch = listener.accept_one();
        Frame f = ch->recv_frame();
        if (f.type != frame::kBudget) {
            std::cerr << "dealer: unexpected message type\n";
            return 1;
        }
        if (f.payload.size() < 9) {
            std::cerr << "dealer: short budget message\n";
            return 1;
        }
        Party p = f.payload[0] == 0 ? Party::S0 : Party::S1;
        u64 hash = 0;
        for (int b = 0; b < 8; ++b) hash |= static_cast<u64>(f.payload[1 + b]) << (8 * b);
        if (hash != expect_hash) {
            std::string msg = "seed mismatch between dealer and party";
            ch->send_frame(frame::kDone, std::span<const u8>(
                                             reinterpret_cast<const u8*>(msg.data()), msg.size()));
            std::cerr << "dealer: " << msg << "\n";
            return 1;
        }
        budgets.push_back(Budget::deserialize(std::span<const u8>(f.payload).subspan(9)));
        parties.push_back(p);
        chans.push_back(std::move(ch));
    }
    if (!(budgets[0] == budgets[1])) {
        std::cerr << "dealer: parties declared different budgets\n";
        return 1;
    }
    for (int i = 0; i < 2; ++i) {
        PoolData pool = generate_pool(master, opt.cfg.ring, budgets[i], parties[i]);
        auto bytes = pool.serialize();
        chans[i]->send_frame(frame::kPool, bytes);
    }
    return 0;
}

int run_compute_party(const NetOptions& opt) {
    Party party = opt.role == Role::S0 ? Party::S0 : Party::S1;
    u64 seed = opt.cfg.seed;

    // Program selection; everything the program needs is loaded up front so
    // the dry run and the online run execute identically.
    EncoderWeights weights;
    DoubleTensor input;
    KernelConfig kc = opt.cfg.kernel;
    if (opt.program == ProgramKind::Infer || opt.program == ProgramKind::BenchEncoder) {
        if (!opt.weights_manifest.empty())
            weights = EncoderWeights::from_tensors(load_weights(opt.weights_manifest));
        else
            weights = EncoderWeights::random(16, 4, 8, 64, seed);
        if (!opt.input_path.empty())
            input = load_tensor(opt.input_path);
        else {
            PrfStream in_rng(seed, "infer.input");
            input = random_tensor(mat_shape(weights.s, weights.d), in_rng);
        }
        kc = demo_kernel_config();
        kc.erf_backend = opt.cfg.kernel.erf_backend;
        kc.threshold_mode = opt.cfg.kernel.threshold_mode;
    }

    json program_report;
    DoubleTensor infer_out;
    auto program = [&](Session& s, bool dry) -> int {
        switch (opt.program) {
            case ProgramKind::Smoke:
                program_report = smoke_program(s, seed, dry);
                break;
            case ProgramKind::Infer:
                infer_out = infer_program(s, weights, input, kc, seed,
                                          s.party() == Party::S0 ? &program_report : nullptr);
                break;
            case ProgramKind::BenchPrimitives:
                program_report = bench_primitives(s);
                break;
            case ProgramKind::BenchKernels:
                program_report = bench_kernels(s, opt.cfg.kernel);
                break;
            case ProgramKind::BenchEncoder: {
                PrfStream share_rng(seed, "bench.encoder.shares");
                PrfStream in_rng(seed, "bench.encoder.input");
                DoubleTensor x = random_tensor(mat_shape(weights.s, weights.d), in_rng);
                auto [sh0, sh1] = share_encoder_inputs(x, weights, s.cfg(), share_rng);
                program_report =
                    bench_encoder(s, s.party() == Party::S0 ? sh0 : sh1, weights, kc);
                break;
            }
        }
        return 0;
    };

    // Offline phase: declare the budget from a local dry run, then fetch pools.
    Budget budget = dry_run_budget(opt.cfg.ring, seed, party, [&](Session& s) { return program(s, true); });

    auto dealer_chan = TcpChannel::connect_to(opt.dealer_host, opt.dealer_port);
    {
        std::vector<u8> msg;
        msg.push_back(party == Party::S0 ? 0 : 1);
        u64 hash = derive_key(seed, "handshake");
        for (int b = 0; b < 8; ++b) msg.push_back(static_cast<u8>((hash >> (8 * b)) & 0xFF));
        auto bb = budget.serialize();
        msg.insert(msg.end(), bb.begin(), bb.end());
        dealer_chan->send_frame(frame::kBudget, msg);
    }
    Frame pool_frame = dealer_chan->recv_frame();
    if (pool_frame.type == frame::kDone)
        throw ProtocolError("dealer refused: " +
                            std::string(pool_frame.payload.begin(), pool_frame.payload.end()));
    if (pool_frame.type != frame::kPool) throw ProtocolError("unexpected dealer response");
    PoolData pool = PoolData::deserialize(pool_frame.payload);

    CorrelatedSource src(derive_key(seed, "offline"), opt.cfg.ring, party);
    src.load_delivered(budget, std::move(pool));

    // Online phase over the peer channel.
    std::unique_ptr<TcpChannel> peer;
    if (opt.role == Role::S0) {
        TcpListener listener(opt.listen_host, opt.listen_port);
        peer = listener.accept_one();
    } else {
        peer = TcpChannel::connect_to(opt.peer_host, opt.peer_port);
    }
    Session sess(party, opt.cfg.ring, peer.get(), &src);
    program(sess, false);

    // Consumption ledger: the online phase must use exactly its declared budget.
    Budget leftover = src.pool_remaining();
    if (leftover.beaver || leftover.square || leftover.bool_triple || leftover.dabit || leftover.sine)
        throw PoolError("online phase did not consume its declared randomness budget");

    if (party == Party::S0) {
        if (opt.program == ProgramKind::Infer && !opt.out_path.empty()) save_tensor(opt.out_path, infer_out);
        std::string rp = opt.program == ProgramKind::Infer ? opt.report_path : opt.out_path;
        if (!rp.empty()) {
            program_report["config"] = config_echo(opt.cfg);
            program_report["mode"] = "tcp";
            std::ofstream os(rp);
            os << program_report.dump(2) << "\n";
        }
    }
    return 0;
}

} // namespace

int run_party(const NetOptions& opt) {
    try {
        if (opt.role == Role::Dealer) return run_dealer(opt);
        return run_compute_party(opt);
    } catch (const std::exception& e) {
        std::cerr << (opt.role == Role::S0 ? "s0" : opt.role == Role::S1 ? "s1" : "dealer")
                  << ": " << e.what() << "\n";
        return 1;
    }
}

} // namespace secmpc
