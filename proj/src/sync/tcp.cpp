#include "hybridsense/sync/tcp.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>

namespace hybridsense {
namespace {

bool write_all(int fd, std::string_view bytes) {
  while (!bytes.empty()) {
    const ssize_t n = ::send(fd, bytes.data(), bytes.size(), MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

sockaddr_in resolve(const Endpoint& endpoint) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(endpoint.port);
  const std::string host = endpoint.host.empty() ? "0.0.0.0" : endpoint.host;
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  addrinfo* result = nullptr;
  if (::getaddrinfo(host.c_str(), nullptr, &hints, &result) != 0 || !result)
    throw std::runtime_error("cannot resolve host " + host);
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(result->ai_addr)->sin_addr;
  ::freeaddrinfo(result);
  return addr;
}

}  // namespace

Endpoint Endpoint::parse(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("endpoint must be host:port, got " + text);
  Endpoint endpoint;
  endpoint.host = colon == 0 ? "127.0.0.1" : text.substr(0, colon);
  const auto port = std::stoul(text.substr(colon + 1));
  if (port > 65535) throw std::invalid_argument("port out of range in " + text);
  endpoint.port = static_cast<std::uint16_t>(port);
  return endpoint;
}

std::string Endpoint::to_string() const { return host + ":" + std::to_string(port); }

struct SyncServer::Connection {
  int fd = -1;
  std::mutex write_mutex;
  std::atomic<bool> alive{true};
  std::thread thread;

  void write(const Message& message) {
    if (!alive) return;
    const std::lock_guard lock(write_mutex);
    if (!write_all(fd, encode(message))) alive = false;
  }
};

SyncServer::SyncServer(std::shared_ptr<Session> session, Endpoint listen)
    : session_(std::move(session)), listen_(std::move(listen)) {}

SyncServer::~SyncServer() { stop(); }

void SyncServer::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  const sockaddr_in addr = resolve(listen_);
  if (::bind(listen_fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
    const std::string reason = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw std::runtime_error("cannot listen on " + listen_.to_string() + ": " + reason);
  }
  if (::listen(listen_fd_, 64) != 0) throw std::runtime_error(std::string("listen: ") + std::strerror(errno));
  sockaddr_in bound{};
  socklen_t length = sizeof bound;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &length);
  bound_port_ = ntohs(bound.sin_port);
  running_ = true;
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void SyncServer::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (accept_thread_.joinable()) accept_thread_.join();
  std::list<std::shared_ptr<Connection>> connections;
  {
    const std::lock_guard lock(connections_mutex_);
    connections.swap(connections_);
  }
  for (const auto& connection : connections) ::shutdown(connection->fd, SHUT_RDWR);
  for (const auto& connection : connections)
    if (connection->thread.joinable()) connection->thread.join();
  session_->flush();
}

void SyncServer::accept_loop() {
  while (running_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      return;
    }
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    auto connection = std::make_shared<Connection>();
    connection->fd = fd;
    const std::lock_guard lock(connections_mutex_);
    // Drop bookkeeping for connections that already finished.
    connections_.remove_if([](const auto& c) {
      if (c->alive || !c->thread.joinable()) return false;
      c->thread.join();
      return true;
    });
    connections_.push_back(connection);
    connection->thread = std::thread([this, connection] { serve(connection); });
  }
}

void SyncServer::serve(const std::shared_ptr<Connection>& connection) {
  LineFramer framer;
  std::optional<DeviceId> device;
  char buffer[65536];
  const auto refuse = [&](std::string_view code, const std::string& detail) {
    connection->write(Message{MessageType::Error, session_->id(), device.value_or(""), std::nullopt,
                              Json{{"code", code}, {"message", detail}, {"requestId", nullptr}}});
  };
  bool open = true;
  while (open && running_) {
    const ssize_t n = ::recv(connection->fd, buffer, sizeof buffer, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    std::vector<std::string> lines;
    try {
      lines = framer.feed(std::string_view(buffer, static_cast<std::size_t>(n)));
    } catch (const ProtocolError& e) {
      refuse("BadRequest", e.what());
      break;
    }
    for (const auto& line : lines) {
      Message message;
      try {
        message = decode(line);
      } catch (const ProtocolError& e) {
        refuse("BadRequest", e.what());
        continue;
      }
      if (!device) {
        if (message.type != MessageType::Hello) {
          refuse("NotJoined", "first message must be Hello");
          open = false;
          break;
        }
        if (!message.session.empty() && message.session != session_->id()) {
          refuse("BadRequest", "unknown session " + message.session);
          open = false;
          break;
        }
        try {
          const auto kind = device_kind_from_string(message.payload.value("kind", "pc"));
          session_->join(message.device, kind, [connection](const Message& m) { connection->write(m); });
          device = message.device;
        } catch (const SessionError& e) {
          refuse(to_string(e.code()), e.what());
          open = false;
          break;
        } catch (const std::exception& e) {
          refuse("BadRequest", e.what());
          open = false;
          break;
        }
        continue;
      }
      session_->handle(*device, message);
    }
    if (!connection->alive) break;
  }
  if (device) session_->leave(*device);
  connection->alive = false;
  ::shutdown(connection->fd, SHUT_RDWR);
  ::close(connection->fd);
}

SyncClient::SyncClient(Endpoint server, std::string session, DeviceId device, DeviceKind kind)
    : server_(std::move(server)), session_(std::move(session)), device_(std::move(device)), kind_(kind) {}

SyncClient::~SyncClient() { close(); }

void SyncClient::connect(std::chrono::milliseconds timeout) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  const sockaddr_in addr = resolve(server_);
  if (::connect(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
    const std::string reason = std::strerror(errno);
    ::close(fd_);
    fd_ = -1;
    throw std::runtime_error("cannot connect to " + server_.to_string() + ": " + reason);
  }
  const int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  reader_thread_ = std::thread([this] { reader(); });
  send(Message{MessageType::Hello, session_, device_, std::nullopt, Json{{"kind", to_string(kind_)}}});
  std::unique_lock lock(state_mutex_);
  if (!state_cv_.wait_for(lock, timeout, [&] { return welcomed_ || closed_ || !refusal_.empty(); }))
    throw std::runtime_error("timed out waiting for Welcome");
  if (!welcomed_) throw std::runtime_error("server refused " + device_ + ": " + refusal_);
}

void SyncClient::close() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
  if (reader_thread_.joinable()) reader_thread_.join();
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void SyncClient::send(Message message) {
  message.session = session_;
  message.device = device_;
  const std::lock_guard lock(write_mutex_);
  if (fd_ < 0 || !write_all(fd_, encode(message))) throw std::runtime_error("connection to server lost");
}

std::int64_t SyncClient::next_request_id() { return ++request_counter_; }

std::int64_t SyncClient::submit(const Op& op) {
  const auto id = next_request_id();
  send(Message{MessageType::Op, {}, {}, std::nullopt, Json{{"op", to_json(op)}, {"requestId", id}}});
  return id;
}

std::int64_t SyncClient::select(const std::optional<DocumentId>& document, const std::set<NodeId>& nodes) {
  const auto id = next_request_id();
  send(Message{MessageType::Selection, {}, {}, std::nullopt,
               Json{{"documentId", document ? Json(*document) : Json(nullptr)}, {"nodeIds", nodes}, {"requestId", id}}});
  return id;
}

void SyncClient::send_pose(const PoseSample& sample) {
  send(Message{MessageType::Pose, {}, {}, std::nullopt, to_json(sample)});
}

void SyncClient::request_resync(std::int64_t from_seq) {
  send(Message{MessageType::ResyncRequest, {}, {}, std::nullopt,
               Json{{"fromSeq", from_seq}, {"requestId", next_request_id()}}});
}

void SyncClient::barrier(std::chrono::milliseconds timeout) {
  std::int64_t target;
  {
    const std::lock_guard lock(state_mutex_);
    target = pongs_ + 1;
  }
  send(Message{MessageType::Ping, {}, {}, std::nullopt, Json{{"requestId", next_request_id()}}});
  std::unique_lock lock(state_mutex_);
  if (!state_cv_.wait_for(lock, timeout, [&] { return pongs_ >= target || closed_; }))
    throw std::runtime_error("timed out waiting for Pong");
  if (pongs_ < target) throw std::runtime_error("connection closed before Pong");
}

void SyncClient::reader() {
  LineFramer framer;
  char buffer[65536];
  while (true) {
    const ssize_t n = ::recv(fd_, buffer, sizeof buffer, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    std::vector<std::string> lines;
    try {
      lines = framer.feed(std::string_view(buffer, static_cast<std::size_t>(n)));
    } catch (const ProtocolError&) {
      break;
    }
    for (const auto& line : lines) {
      Message message;
      try {
        message = decode(line);
      } catch (const ProtocolError&) {
        continue;
      }
      std::int64_t resync_from = -1;
      {
        const std::lock_guard lock(state_mutex_);
        transcript_.push_back(message);
        switch (message.type) {
          case MessageType::Welcome:
            replica_.load(message);
            welcomed_ = true;
            break;
          case MessageType::Pong: ++pongs_; break;
          case MessageType::Error:
            errors_.push_back(message);
            if (!welcomed_) refusal_ = message.payload.value("message", "refused");
            break;
          default:
            if (replica_.apply(message) == Replica::Outcome::Gap) resync_from = replica_.seq();
            break;
        }
      }
      state_cv_.notify_all();
      if (resync_from >= 0) {
        try {
          request_resync(resync_from);
        } catch (const std::exception&) {
        }
      }
    }
  }
  {
    const std::lock_guard lock(state_mutex_);
    closed_ = true;
  }
  state_cv_.notify_all();
}

Graph SyncClient::graph() const {
  const std::lock_guard lock(state_mutex_);
  return replica_.graph();
}

std::int64_t SyncClient::seq() const {
  const std::lock_guard lock(state_mutex_);
  return replica_.seq();
}

bool SyncClient::consistent() const {
  const std::lock_guard lock(state_mutex_);
  return replica_.consistent();
}

std::vector<Message> SyncClient::errors() const {
  const std::lock_guard lock(state_mutex_);
  return errors_;
}

std::vector<Message> SyncClient::transcript() const {
  const std::lock_guard lock(state_mutex_);
  return transcript_;
}

}  // namespace hybridsense
