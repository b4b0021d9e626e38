#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace farmlink {

/// Bidirectional ordered byte channel carrying newline-framed message lines.
/// send/receive work on lines without the trailing newline; the frame byte is
/// a transport detail. receive returns nullopt on timeout and throws once the
/// peer has closed and no buffered line remains.
class Transport {
public:
    virtual ~Transport() = default;
    virtual void send(const std::string& line) = 0;
    virtual std::optional<std::string> receive(std::chrono::milliseconds timeout) = 0;
    virtual void close() = 0;
};

/// Two connected in-process endpoints backed by shared queues. Useful for
/// deterministic single-process sessions and tests.
std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> make_inproc_pair();

/// Exact encoded lines a node moved over its transports, in order. This is
/// the record the disclosure audit scans.
struct SessionLog {
    std::vector<std::string> sent;
    std::vector<std::string> received;
};

/// Listening TCP socket on 127.0.0.1 with an OS-assigned port.
class TcpListener {
public:
    TcpListener();
    ~TcpListener();
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::uint16_t port() const { return port_; }

    /// Accepts one connection; nullptr on timeout.
    std::unique_ptr<Transport> accept(std::chrono::milliseconds timeout);

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

std::unique_ptr<Transport> connect_tcp(const std::string& host, std::uint16_t port,
                                       std::chrono::milliseconds timeout);

} // namespace farmlink
