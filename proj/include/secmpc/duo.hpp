#pragma once

#include <exception>
#include <functional>
#include <thread>

#include "secmpc/session.hpp"

namespace secmpc {

// In-process deployment: both parties run as concurrent threads joined at the
// channel; the dealer role is the seeded derivation inside CorrelatedSource.
template <typename T>
struct DuoResult {
    T r0, r1;
    CommStats stats0, stats1;
    Budget budget0, budget1;
};

template <typename F>
auto run_duo(const FixedCfg& cfg, u64 seed, F&& program)
    -> DuoResult<std::invoke_result_t<F, Session&>> {
    using T = std::invoke_result_t<F, Session&>;
    auto [ch0, ch1] = LocalChannel::make_pair();
    u64 offline = derive_key(seed, "offline");
    CorrelatedSource src0(offline, cfg, Party::S0), src1(offline, cfg, Party::S1);
    Session s0(Party::S0, cfg, ch0.get(), &src0), s1(Party::S1, cfg, ch1.get(), &src1);

    DuoResult<T> out{};
    std::exception_ptr e0, e1;
    std::thread t0([&] {
        try {
            out.r0 = program(s0);
        } catch (...) {
            e0 = std::current_exception();
        }
    });
    std::thread t1([&] {
        try {
            out.r1 = program(s1);
        } catch (...) {
            e1 = std::current_exception();
        }
    });
    t0.join();
    t1.join();
    if (e0) std::rethrow_exception(e0);
    if (e1) std::rethrow_exception(e1);
    out.stats0 = s0.meter();
    out.stats1 = s1.meter();
    out.budget0 = src0.consumed();
    out.budget1 = src1.consumed();
    return out;
}

// Dry run against a null channel: counts rounds and randomness consumption
// without a peer. Valid because protocol control flow never branches on
// received values.
template <typename F>
Budget dry_run_budget(const FixedCfg& cfg, u64 seed, Party party, F&& program) {
    NullChannel chan;
    CorrelatedSource src(derive_key(seed, "offline"), cfg, party);
    Session s(party, cfg, &chan, &src);
    program(s);
    return src.consumed();
}

} // namespace secmpc
