#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "hybridsense/sync/replica.hpp"
#include "hybridsense/sync/session.hpp"

namespace hybridsense {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  // "host:port" or ":port".
  static Endpoint parse(const std::string& text);
  std::string to_string() const;
};

// Newline-delimited JSON over TCP, one thread per connection. The first message
// on a connection must be Hello with payload {"kind": "pc"|"vr"}.
class SyncServer {
 public:
  SyncServer(std::shared_ptr<Session> session, Endpoint listen);
  ~SyncServer();
  SyncServer(const SyncServer&) = delete;
  SyncServer& operator=(const SyncServer&) = delete;

  // Binds and starts accepting. Throws std::runtime_error (e.g. port busy).
  void start();
  // Stops accepting, closes every connection and joins all threads.
  void stop();
  std::uint16_t port() const { return bound_port_; }
  Session& session() { return *session_; }

 private:
  struct Connection;
  void accept_loop();
  void serve(const std::shared_ptr<Connection>& connection);

  std::shared_ptr<Session> session_;
  Endpoint listen_;
  std::uint16_t bound_port_ = 0;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;
  std::mutex connections_mutex_;
  std::list<std::shared_ptr<Connection>> connections_;
};

// Simulated device speaking the wire protocol. A background reader applies
// every server apply to a local replica.
class SyncClient {
 public:
  SyncClient(Endpoint server, std::string session, DeviceId device, DeviceKind kind);
  ~SyncClient();
  SyncClient(const SyncClient&) = delete;
  SyncClient& operator=(const SyncClient&) = delete;

  // Connects, says Hello and waits for Welcome. Throws on refusal.
  void connect(std::chrono::milliseconds timeout = std::chrono::seconds(5));
  void close();

  // Returns the request id carried by the message.
  std::int64_t submit(const Op& op);
  std::int64_t select(const std::optional<DocumentId>& document, const std::set<NodeId>& nodes);
  void send_pose(const PoseSample& sample);
  void request_resync(std::int64_t from_seq);
  // Round-trips a Ping; every apply the server sent before answering has been
  // applied locally when this returns.
  void barrier(std::chrono::milliseconds timeout = std::chrono::seconds(10));

  const DeviceId& device() const { return device_; }
  DeviceKind kind() const { return kind_; }
  Graph graph() const;
  std::int64_t seq() const;
  bool consistent() const;
  std::vector<Message> errors() const;
  std::vector<Message> transcript() const;

 private:
  void send(Message message);
  void reader();
  std::int64_t next_request_id();

  Endpoint server_;
  std::string session_;
  DeviceId device_;
  DeviceKind kind_;
  int fd_ = -1;
  std::thread reader_thread_;
  std::mutex write_mutex_;

  mutable std::mutex state_mutex_;
  std::condition_variable state_cv_;
  Replica replica_;
  bool welcomed_ = false;
  bool closed_ = false;
  std::string refusal_;
  std::vector<Message> errors_;
  std::vector<Message> transcript_;
  std::int64_t pongs_ = 0;
  std::atomic<std::int64_t> request_counter_{0};
};

}  // namespace hybridsense
