#pragma once

#include "gcs/channels.hpp"
#include "gcs/protocol.hpp"

#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/tcp.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <string>

namespace gcs::net {

struct Inbound {
    std::uint64_t session_id = 0;
    protocol::Bytes frame;
};

class Session;

/// Accepts WebSocket clients and routes frames. Every member except the
/// constructor runs on the io_context thread; other threads reach it
/// through post().
class WsServer : public std::enable_shared_from_this<WsServer> {
public:
    static constexpr std::size_t kMaxQueuedTelemetry = 4;

    WsServer(boost::asio::io_context &ioc, const std::string &host, unsigned short port,
             OrderedChannel<Inbound> &inbound);

    unsigned short port() const noexcept { return port_; }

    void start();
    void close();

    void broadcast(std::shared_ptr<const protocol::Bytes> frame, bool lossy);
    void send_to(std::uint64_t session_id, std::shared_ptr<const protocol::Bytes> frame);

    void on_open(std::uint64_t id, const std::shared_ptr<Session> &session);
    void on_close(std::uint64_t id);
    void on_frame(std::uint64_t id, protocol::Bytes frame);

private:
    void accept();

    boost::asio::io_context &ioc_;
    boost::asio::ip::tcp::acceptor acceptor_;
    unsigned short port_ = 0;
    OrderedChannel<Inbound> &inbound_;
    std::map<std::uint64_t, std::weak_ptr<Session>> sessions_;
    std::uint64_t next_id_ = 1;
    bool closed_ = false;
};

} // namespace gcs::net
