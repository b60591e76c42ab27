#include "secmpc/channel.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <thread>

namespace secmpc {

namespace frame {

std::vector<u8> encode(u8 type, std::span<const u8> payload) {
    if (payload.size() > 0xFFFFFFFFull) throw TransportError("frame payload too large");
    std::vector<u8> out(kHeaderBytes + payload.size());
    out[0] = kMagic;
    out[1] = type;
    u32 len = static_cast<u32>(payload.size());
    out[2] = static_cast<u8>(len & 0xFF);
    out[3] = static_cast<u8>((len >> 8) & 0xFF);
    out[4] = static_cast<u8>((len >> 16) & 0xFF);
    out[5] = static_cast<u8>((len >> 24) & 0xFF);
    std::memcpy(out.data() + kHeaderBytes, payload.data(), payload.size());
    return out;
}

} // namespace frame

static Frame parse_frame_header(const u8* hdr, u32& len_out) {
    if (hdr[0] != frame::kMagic) throw ProtocolError("bad frame magic");
    Frame f;
    f.type = hdr[1];
    len_out = static_cast<u32>(hdr[2]) | (static_cast<u32>(hdr[3]) << 8) |
              (static_cast<u32>(hdr[4]) << 16) | (static_cast<u32>(hdr[5]) << 24);
    return f;
}

std::pair<std::unique_ptr<LocalChannel>, std::unique_ptr<LocalChannel>> LocalChannel::make_pair() {
    auto shared = std::make_shared<Shared>();
    return {std::make_unique<LocalChannel>(shared, true), std::make_unique<LocalChannel>(shared, false)};
}

void LocalChannel::send_frame(u8 type, std::span<const u8> payload) {
    auto bytes = frame::encode(type, payload);
    {
        std::lock_guard<std::mutex> lk(shared_->m);
        auto& q = is0_ ? shared_->q_0to1 : shared_->q_1to0;
        q.push(std::move(bytes));
    }
    shared_->cv.notify_all();
}

Frame LocalChannel::recv_frame() {
    std::vector<u8> bytes;
    {
        std::unique_lock<std::mutex> lk(shared_->m);
        auto& q = is0_ ? shared_->q_1to0 : shared_->q_0to1;
        shared_->cv.wait(lk, [&] { return !q.empty(); });
        bytes = std::move(q.front());
        q.pop();
    }
    if (bytes.size() < frame::kHeaderBytes) throw TransportError("short frame");
    u32 len = 0;
    Frame f = parse_frame_header(bytes.data(), len);
    if (bytes.size() != frame::kHeaderBytes + len) throw TransportError("frame length mismatch");
    f.payload.assign(bytes.begin() + frame::kHeaderBytes, bytes.end());
    return f;
}

TcpChannel::~TcpChannel() {
    if (fd_ >= 0) ::close(fd_);
}

void TcpChannel::send_all(const u8* p, std::size_t n) {
    while (n > 0) {
        ssize_t w = ::send(fd_, p, n, 0);
        if (w < 0) {
            if (errno == EINTR) continue;
            throw TransportError("tcp send failed: " + std::string(strerror(errno)));
        }
        p += w;
        n -= static_cast<std::size_t>(w);
    }
}

void TcpChannel::recv_all(u8* p, std::size_t n) {
    while (n > 0) {
        ssize_t r = ::recv(fd_, p, n, 0);
        if (r == 0) throw TransportError("peer disconnected");
        if (r < 0) {
            if (errno == EINTR) continue;
            throw TransportError("tcp recv failed: " + std::string(strerror(errno)));
        }
        p += r;
        n -= static_cast<std::size_t>(r);
    }
}

void TcpChannel::send_frame(u8 type, std::span<const u8> payload) {
    auto bytes = frame::encode(type, payload);
    send_all(bytes.data(), bytes.size());
}

Frame TcpChannel::recv_frame() {
    u8 hdr[frame::kHeaderBytes];
    recv_all(hdr, sizeof hdr);
    u32 len = 0;
    Frame f = parse_frame_header(hdr, len);
    f.payload.resize(len);
    if (len > 0) recv_all(f.payload.data(), len);
    return f;
}

// Interleaved send/receive so symmetric bulk exchanges cannot deadlock.
Frame TcpChannel::duplex(u8 type, std::span<const u8> payload) {
    auto out = frame::encode(type, payload);
    std::size_t sent = 0;

    std::vector<u8> in;
    std::size_t want = frame::kHeaderBytes;
    std::size_t got = 0;
    in.resize(want);
    bool header_done = false;
    u32 len = 0;
    Frame f;

    int flags = ::fcntl(fd_, F_GETFL, 0);
    ::fcntl(fd_, F_SETFL, flags | O_NONBLOCK);

    while (sent < out.size() || !header_done || got < want) {
        pollfd pfd{fd_, 0, 0};
        if (sent < out.size()) pfd.events |= POLLOUT;
        if (!header_done || got < want) pfd.events |= POLLIN;
        int rc = ::poll(&pfd, 1, 30000);
        if (rc < 0) {
            if (errno == EINTR) continue;
            ::fcntl(fd_, F_SETFL, flags);
            throw TransportError("poll failed");
        }
        if (rc == 0) {
            ::fcntl(fd_, F_SETFL, flags);
            throw TransportError("exchange timed out");
        }
        if (pfd.revents & POLLOUT) {
            ssize_t w = ::send(fd_, out.data() + sent, out.size() - sent, 0);
            if (w < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
                ::fcntl(fd_, F_SETFL, flags);
                throw TransportError("tcp send failed");
            }
            if (w > 0) sent += static_cast<std::size_t>(w);
        }
        if (pfd.revents & (POLLIN | POLLHUP)) {
            ssize_t r = ::recv(fd_, in.data() + got, want - got, 0);
            if (r == 0) {
                ::fcntl(fd_, F_SETFL, flags);
                throw TransportError("peer disconnected");
            }
            if (r < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
                ::fcntl(fd_, F_SETFL, flags);
                throw TransportError("tcp recv failed");
            }
            if (r > 0) got += static_cast<std::size_t>(r);
            if (!header_done && got == frame::kHeaderBytes) {
                f = parse_frame_header(in.data(), len);
                header_done = true;
                want = frame::kHeaderBytes + len;
                in.resize(want);
            }
        }
    }
    ::fcntl(fd_, F_SETFL, flags);
    f.payload.assign(in.begin() + frame::kHeaderBytes, in.end());
    return f;
}

std::unique_ptr<TcpChannel> TcpChannel::connect_to(const std::string& host, int port, int timeout_ms) {
    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    while (true) {
        int fd = ::socket(AF_INET, SOCK_STREAM, 0);
        if (fd < 0) throw TransportError("socket() failed");
        sockaddr_in addr{};
        addr.sin_family = AF_INET;
        addr.sin_port = htons(static_cast<uint16_t>(port));
        if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
            ::close(fd);
            throw TransportError("bad address: " + host);
        }
        if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0) {
            int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return std::make_unique<TcpChannel>(fd);
        }
        ::close(fd);
        if (std::chrono::steady_clock::now() >= deadline)
            throw TransportError("connect to " + host + ":" + std::to_string(port) + " failed: " +
                                 strerror(errno));
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
}

TcpListener::TcpListener(const std::string& host, int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) throw TransportError("socket() failed");
    int one = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port));
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        ::close(fd_);
        throw TransportError("bad address: " + host);
    }
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        ::close(fd_);
        throw TransportError("bind " + host + ":" + std::to_string(port) + " failed: " + strerror(errno));
    }
    if (::listen(fd_, 4) != 0) {
        ::close(fd_);
        throw TransportError("listen failed");
    }
    sockaddr_in actual{};
    socklen_t alen = sizeof actual;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&actual), &alen);
    port_ = ntohs(actual.sin_port);
}

TcpListener::~TcpListener() {
    if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpChannel> TcpListener::accept_one() {
    int c = ::accept(fd_, nullptr, nullptr);
    if (c < 0) throw TransportError("accept failed");
    int one = 1;
    ::setsockopt(c, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return std::make_unique<TcpChannel>(c);
}

} // namespace secmpc
