#include "ws_server.hpp"

#include "gcs/errors.hpp"

#include <boost/asio/ip/address.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <deque>

namespace gcs::net {

namespace beast = boost::beast;
namespace websocket = beast::websocket;
namespace asio = boost::asio;
using tcp = asio::ip::tcp;

class Session : public std::enable_shared_from_this<Session> {
public:
    Session(tcp::socket socket, std::uint64_t id, std::shared_ptr<WsServer> server)
        : ws_(std::move(socket)), id_(id), server_(std::move(server)) {}

    void start() {
        ws_.binary(true);
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
            if (ec) {
                return;
            }
            self->server_->on_open(self->id_, self);
            self->read();
        });
    }

    void send(std::shared_ptr<const protocol::Bytes> frame, bool lossy) {
        if (lossy) {
            // The head of the queue may be in flight; only drop behind it.
            std::size_t queued_lossy = 0;
            for (std::size_t i = writing_ ? 1 : 0; i < queue_.size(); ++i) {
                queued_lossy += queue_[i].lossy ? 1 : 0;
            }
            if (queued_lossy >= WsServer::kMaxQueuedTelemetry) {
                for (auto it = queue_.begin() + (writing_ ? 1 : 0); it != queue_.end(); ++it) {
                    if (it->lossy) {
                        queue_.erase(it);
                        break;
                    }
                }
            }
        }
        queue_.push_back({std::move(frame), lossy});
        if (!writing_) {
            write_next();
        }
    }

    void close() {
        beast::error_code ignored;
        beast::get_lowest_layer(ws_).socket().close(ignored);
    }

private:
    struct Outgoing {
        std::shared_ptr<const protocol::Bytes> frame;
        bool lossy = false;
    };

    void read() {
        ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
            if (ec) {
                self->server_->on_close(self->id_);
                return;
            }
            const auto data = self->buffer_.cdata();
            const auto *begin = static_cast<const std::uint8_t *>(data.data());
            self->server_->on_frame(self->id_, protocol::Bytes(begin, begin + data.size()));
            self->buffer_.consume(self->buffer_.size());
            self->read();
        });
    }

    void write_next() {
        if (queue_.empty()) {
            writing_ = false;
            return;
        }
        writing_ = true;
        const auto &frame = *queue_.front().frame;
        ws_.async_write(asio::buffer(frame), [self = shared_from_this()](beast::error_code ec, std::size_t) {
            self->queue_.pop_front();
            if (ec) {
                self->queue_.clear();
                self->writing_ = false;
                return;
            }
            self->write_next();
        });
    }

    websocket::stream<beast::tcp_stream> ws_;
    std::uint64_t id_;
    std::shared_ptr<WsServer> server_;
    beast::flat_buffer buffer_;
    std::deque<Outgoing> queue_;
    bool writing_ = false;
};

WsServer::WsServer(asio::io_context &ioc, const std::string &host, unsigned short port,
                   OrderedChannel<Inbound> &inbound)
    : ioc_(ioc), acceptor_(ioc), inbound_(inbound) {
    beast::error_code ec;
    const auto address = asio::ip::make_address(host == "localhost" ? "127.0.0.1" : host, ec);
    if (ec) {
        throw ValidationError("cannot parse listen host '" + host + "': " + ec.message());
    }
    const tcp::endpoint endpoint(address, port);
    acceptor_.open(endpoint.protocol(), ec);
    if (!ec) {
        acceptor_.set_option(asio::socket_base::reuse_address(true), ec);
    }
    if (!ec) {
        acceptor_.bind(endpoint, ec);
    }
    if (!ec) {
        acceptor_.listen(asio::socket_base::max_listen_connections, ec);
    }
    if (ec) {
        throw Error("cannot listen on " + host + ":" + std::to_string(port) + ": " + ec.message());
    }
    port_ = acceptor_.local_endpoint().port();
}

void WsServer::start() { accept(); }

void WsServer::accept() {
    acceptor_.async_accept(asio::make_strand(ioc_), [self = shared_from_this()](beast::error_code ec, tcp::socket s) {
        if (self->closed_) {
            return;
        }
        if (!ec) {
            std::make_shared<Session>(std::move(s), self->next_id_++, self)->start();
        }
        self->accept();
    });
}

void WsServer::close() {
    closed_ = true;
    beast::error_code ignored;
    acceptor_.close(ignored);
    for (auto &[id, weak] : sessions_) {
        if (auto s = weak.lock()) {
            s->close();
        }
    }
    sessions_.clear();
}

void WsServer::broadcast(std::shared_ptr<const protocol::Bytes> frame, bool lossy) {
    for (auto &[id, weak] : sessions_) {
        if (auto s = weak.lock()) {
            s->send(frame, lossy);
        }
    }
}

void WsServer::send_to(std::uint64_t session_id, std::shared_ptr<const protocol::Bytes> frame) {
    const auto it = sessions_.find(session_id);
    if (it == sessions_.end()) {
        return;
    }
    if (auto s = it->second.lock()) {
        s->send(std::move(frame), false);
    }
}

void WsServer::on_open(std::uint64_t id, const std::shared_ptr<Session> &session) {
    if (closed_) {
        session->close();
        return;
    }
    sessions_[id] = session;
}

void WsServer::on_close(std::uint64_t id) { sessions_.erase(id); }

void WsServer::on_frame(std::uint64_t id, protocol::Bytes frame) { inbound_.push({id, std::move(frame)}); }

} // namespace gcs::net
