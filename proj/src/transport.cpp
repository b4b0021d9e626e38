#include "farmlink/transport.hpp"

#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "farmlink/error.hpp"
#include "farmlink/message.hpp"

namespace farmlink {

namespace {

struct InprocChannel {
    std::mutex mutex;
    std::condition_variable ready;
    std::deque<std::string> lines;
    bool closed = false;
};

class InprocTransport final : public Transport {
public:
    InprocTransport(std::shared_ptr<InprocChannel> incoming,
                    std::shared_ptr<InprocChannel> outgoing)
        : incoming_(std::move(incoming)), outgoing_(std::move(outgoing)) {}

    ~InprocTransport() override { InprocTransport::close(); }

    void send(const std::string& line) override {
        require(line.size() <= kMaxMessageBytes, ErrorCode::protocol,
                "message exceeds the 16 MiB limit");
        require(line.find('\n') == std::string::npos, ErrorCode::protocol,
                "message line must not contain a newline");
        std::lock_guard lock(outgoing_->mutex);
        require(!outgoing_->closed, ErrorCode::io, "transport closed");
        outgoing_->lines.push_back(line);
        outgoing_->ready.notify_one();
    }

    std::optional<std::string> receive(std::chrono::milliseconds timeout) override {
        std::unique_lock lock(incoming_->mutex);
        incoming_->ready.wait_for(lock, timeout, [&] {
            return !incoming_->lines.empty() || incoming_->closed;
        });
        if (!incoming_->lines.empty()) {
            std::string line = std::move(incoming_->lines.front());
            incoming_->lines.pop_front();
            return line;
        }
        if (incoming_->closed) throw Error(ErrorCode::io, "transport closed");
        return std::nullopt;
    }

    void close() override {
        for (auto& channel : {incoming_, outgoing_}) {
            std::lock_guard lock(channel->mutex);
            channel->closed = true;
            channel->ready.notify_all();
        }
    }

private:
    std::shared_ptr<InprocChannel> incoming_;
    std::shared_ptr<InprocChannel> outgoing_;
};

void close_fd(int& fd) {
    if (fd >= 0) {
        ::close(fd);
        fd = -1;
    }
}

class SocketTransport final : public Transport {
public:
    explicit SocketTransport(int fd) : fd_(fd) {
        int flag = 1;
        ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &flag, sizeof(flag));
    }

    ~SocketTransport() override { close_fd(fd_); }

    void send(const std::string& line) override {
        require(line.size() <= kMaxMessageBytes, ErrorCode::protocol,
                "message exceeds the 16 MiB limit");
        require(line.find('\n') == std::string::npos, ErrorCode::protocol,
                "message line must not contain a newline");
        require(fd_ >= 0, ErrorCode::io, "transport closed");
        std::string framed = line + '\n';
        std::size_t sent = 0;
        while (sent < framed.size()) {
            ssize_t n = ::send(fd_, framed.data() + sent, framed.size() - sent, MSG_NOSIGNAL);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw Error(ErrorCode::io, std::string("send failed: ") + std::strerror(errno));
            }
            sent += std::size_t(n);
        }
    }

    std::optional<std::string> receive(std::chrono::milliseconds timeout) override {
        auto deadline = std::chrono::steady_clock::now() + timeout;
        for (;;) {
            auto newline = buffer_.find('\n');
            if (newline != std::string::npos) {
                std::string line = buffer_.substr(0, newline);
                buffer_.erase(0, newline + 1);
                require(line.size() <= kMaxMessageBytes, ErrorCode::protocol,
                        "message exceeds the 16 MiB limit");
                return line;
            }
            require(buffer_.size() <= kMaxMessageBytes, ErrorCode::protocol,
                    "message exceeds the 16 MiB limit");
            if (fd_ < 0) throw Error(ErrorCode::io, "transport closed");

            auto remaining = deadline - std::chrono::steady_clock::now();
            auto wait_ms =
                std::chrono::duration_cast<std::chrono::milliseconds>(remaining).count();
            if (wait_ms < 0) wait_ms = 0;
            pollfd pfd{fd_, POLLIN, 0};
            int rc = ::poll(&pfd, 1, int(wait_ms));
            if (rc < 0) {
                if (errno == EINTR) continue;
                throw Error(ErrorCode::io, std::string("poll failed: ") + std::strerror(errno));
            }
            if (rc == 0) return std::nullopt;

            char chunk[65536];
            ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw Error(ErrorCode::io, std::string("recv failed: ") + std::strerror(errno));
            }
            if (n == 0) {
                close_fd(fd_);
                // A clean shutdown mid-line drops the partial line.
                throw Error(ErrorCode::io, "transport closed");
            }
            buffer_.append(chunk, std::size_t(n));
        }
    }

    void close() override {
        if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
        close_fd(fd_);
    }

private:
    int fd_ = -1;
    std::string buffer_;
};

} // namespace

std::pair<std::unique_ptr<Transport>, std::unique_ptr<Transport>> make_inproc_pair() {
    auto a_to_b = std::make_shared<InprocChannel>();
    auto b_to_a = std::make_shared<InprocChannel>();
    return {std::make_unique<InprocTransport>(b_to_a, a_to_b),
            std::make_unique<InprocTransport>(a_to_b, b_to_a)};
}

TcpListener::TcpListener() {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    require(fd_ >= 0, ErrorCode::io, std::string("socket failed: ") + std::strerror(errno));
    int flag = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &flag, sizeof(flag));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        int saved = errno;
        close_fd(fd_);
        throw Error(ErrorCode::io, std::string("bind failed: ") + std::strerror(saved));
    }
    if (::listen(fd_, 16) != 0) {
        int saved = errno;
        close_fd(fd_);
        throw Error(ErrorCode::io, std::string("listen failed: ") + std::strerror(saved));
    }
    sockaddr_in bound{};
    socklen_t len = sizeof(bound);
    require(::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len) == 0, ErrorCode::io,
            "getsockname failed");
    port_ = ntohs(bound.sin_port);
}

TcpListener::~TcpListener() { close_fd(fd_); }

std::unique_ptr<Transport> TcpListener::accept(std::chrono::milliseconds timeout) {
    require(fd_ >= 0, ErrorCode::io, "listener closed");
    pollfd pfd{fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, int(timeout.count()));
    if (rc < 0) throw Error(ErrorCode::io, std::string("poll failed: ") + std::strerror(errno));
    if (rc == 0) return nullptr;
    int client = ::accept(fd_, nullptr, nullptr);
    require(client >= 0, ErrorCode::io, std::string("accept failed: ") + std::strerror(errno));
    return std::make_unique<SocketTransport>(client);
}

std::unique_ptr<Transport> connect_tcp(const std::string& host, std::uint16_t port,
                                       std::chrono::milliseconds timeout) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    require(fd >= 0, ErrorCode::io, std::string("socket failed: ") + std::strerror(errno));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        close_fd(fd);
        throw Error(ErrorCode::invalid_argument, "invalid IPv4 address '" + host + "'");
    }

    int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
    if (rc != 0 && errno == EINPROGRESS) {
        pollfd pfd{fd, POLLOUT, 0};
        rc = ::poll(&pfd, 1, int(timeout.count()));
        if (rc == 0) {
            close_fd(fd);
            throw Error(ErrorCode::io, "connect timed out");
        }
        int err = 0;
        socklen_t len = sizeof(err);
        ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
        if (err != 0) {
            close_fd(fd);
            throw Error(ErrorCode::io, std::string("connect failed: ") + std::strerror(err));
        }
    } else if (rc != 0) {
        int saved = errno;
        close_fd(fd);
        throw Error(ErrorCode::io, std::string("connect failed: ") + std::strerror(saved));
    }
    ::fcntl(fd, F_SETFL, flags);
    return std::make_unique<SocketTransport>(fd);
}

} // namespace farmlink
