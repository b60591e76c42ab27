#pragma once

#include <condition_variable>
#include <cstring>
#include <memory>
#include <mutex>
#include <queue>
#include <span>
#include <vector>

#include "secmpc/errors.hpp"
#include "secmpc/prf.hpp"

namespace secmpc {

// Wire frame: magic 0x5F | type u8 | payload length u32 LE | payload bytes.
namespace frame {
constexpr u8 kMagic = 0x5F;
constexpr std::size_t kHeaderBytes = 6;

// Message types. 0x80+ is reserved for the dealer channel.
enum Type : u8 {
    kElems = 0x01,
    kPacked = 0x02,
    kBudget = 0x80,
    kPool = 0x81,
    kDone = 0x82,
};

std::vector<u8> encode(u8 type, std::span<const u8> payload);
} // namespace frame

struct Frame {
    u8 type = 0;
    std::vector<u8> payload;
};

// Ordered reliable byte channel between two endpoints.
class Channel {
public:
    virtual ~Channel() = default;
    virtual void send_frame(u8 type, std::span<const u8> payload) = 0;
    virtual Frame recv_frame() = 0;

    // Simultaneous send+receive; one protocol round. Default is sequential,
    // which is safe for in-process queues; TCP overrides with a poll loop so
    // large symmetric payloads cannot deadlock on full socket buffers.
    virtual Frame duplex(u8 type, std::span<const u8> payload) {
        send_frame(type, payload);
        return recv_frame();
    }
};

// In-process queue pair for two-party simulation.
class LocalChannel : public Channel {
public:
    struct Shared {
        std::mutex m;
        std::condition_variable cv;
        std::queue<std::vector<u8>> q_0to1, q_1to0;
    };

    LocalChannel(std::shared_ptr<Shared> s, bool is_party0) : shared_(std::move(s)), is0_(is_party0) {}

    static std::pair<std::unique_ptr<LocalChannel>, std::unique_ptr<LocalChannel>> make_pair();

    void send_frame(u8 type, std::span<const u8> payload) override;
    Frame recv_frame() override;

private:
    std::shared_ptr<Shared> shared_;
    bool is0_;
};

// Channel that discards sends and answers with zero payloads of equal length;
// used for dry runs that only count rounds and randomness consumption.
class NullChannel : public Channel {
public:
    void send_frame(u8, std::span<const u8>) override {}
    Frame recv_frame() override { throw TransportError("null channel cannot receive"); }
    Frame duplex(u8 type, std::span<const u8> payload) override {
        return Frame{type, std::vector<u8>(payload.size(), 0)};
    }
};

// Blocking TCP channel over a connected socket.
class TcpChannel : public Channel {
public:
    explicit TcpChannel(int fd) : fd_(fd) {}
    ~TcpChannel() override;

    TcpChannel(const TcpChannel&) = delete;
    TcpChannel& operator=(const TcpChannel&) = delete;

    void send_frame(u8 type, std::span<const u8> payload) override;
    Frame recv_frame() override;
    Frame duplex(u8 type, std::span<const u8> payload) override;

    static std::unique_ptr<TcpChannel> connect_to(const std::string& host, int port,
                                                  int timeout_ms = 10000);

private:
    void send_all(const u8* p, std::size_t n);
    void recv_all(u8* p, std::size_t n);
    int fd_ = -1;
};

// Minimal listener used by the dealer and party S0.
class TcpListener {
public:
    TcpListener(const std::string& host, int port);
    ~TcpListener();
    std::unique_ptr<TcpChannel> accept_one();
    int port() const { return port_; }

private:
    int fd_ = -1;
    int port_ = 0;
};

} // namespace secmpc
