#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include "hybridsense/sync/tcp.hpp"

using namespace hybridsense;

namespace {

struct Server {
  std::shared_ptr<Session> session;
  std::unique_ptr<SyncServer> server;

  explicit Server(SessionConfig config = {}) {
    config.session_id = "s";
    session = std::make_shared<Session>(std::move(config));
    server = std::make_unique<SyncServer>(session, Endpoint{"127.0.0.1", 0});
    server->start();
  }
  Endpoint endpoint() const { return {"127.0.0.1", server->port()}; }
};

// Raw socket for protocol-level checks.
class RawConnection {
 public:
  explicit RawConnection(std::uint16_t port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) throw std::runtime_error("connect");
  }
  ~RawConnection() { ::close(fd_); }
  void send(const std::string& bytes) { ::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL); }
  Message read() {
    while (true) {
      if (!pending_.empty()) {
        auto m = decode(pending_.front());
        pending_.erase(pending_.begin());
        return m;
      }
      char buf[4096];
      const auto n = ::recv(fd_, buf, sizeof buf, 0);
      if (n <= 0) throw std::runtime_error("closed");
      for (auto& line : framer_.feed(std::string_view(buf, static_cast<std::size_t>(n)))) pending_.push_back(line);
    }
  }

 private:
  int fd_;
  LineFramer framer_;
  std::vector<std::string> pending_;
};

}  // namespace

TEST(Endpoint, Parse) {
  const auto e = Endpoint::parse("0.0.0.0:7000");
  EXPECT_EQ(e.host, "0.0.0.0");
  EXPECT_EQ(e.port, 7000);
  EXPECT_EQ(Endpoint::parse(":81").host, "127.0.0.1");
  EXPECT_THROW(Endpoint::parse("nohost"), std::invalid_argument);
  EXPECT_THROW(Endpoint::parse("h:99999"), std::invalid_argument);
}

TEST(Tcp, TwoClientsConverge) {
  Server s;
  SyncClient pc(s.endpoint(), "s", "pc-1", DeviceKind::pc);
  SyncClient vr(s.endpoint(), "s", "vr-1", DeviceKind::vr);
  pc.connect();
  vr.connect();
  vr.submit(AddNode{"", "iguana", Vec3(0, 1, 0), ""});
  pc.submit(AddNode{"", "Feb 20, 2007", Vec3(0, 1, 1), ""});
  pc.barrier();
  vr.barrier();
  vr.submit(AddLink{"", "n1", "n2", ""});
  vr.select(std::nullopt, {"n1"});
  vr.barrier();
  pc.barrier();
  EXPECT_EQ(s.session->seq(), 4);
  EXPECT_EQ(snapshot_hash(pc.graph()), s.session->hash());
  EXPECT_EQ(snapshot_hash(vr.graph()), s.session->hash());
  EXPECT_TRUE(pc.consistent());
  EXPECT_EQ(pc.graph().selection().selected_node_ids, std::set<NodeId>{"n1"});
  EXPECT_EQ(pc.graph().selection().last_origin_device, "vr-1");
}

TEST(Tcp, ErrorsGoToSenderOnly) {
  Server s;
  SyncClient a(s.endpoint(), "s", "a", DeviceKind::pc);
  SyncClient b(s.endpoint(), "s", "b", DeviceKind::vr);
  a.connect();
  b.connect();
  const auto request = a.submit(RemoveNode{"n404"});
  a.barrier();
  b.barrier();
  ASSERT_EQ(a.errors().size(), 1u);
  EXPECT_EQ(a.errors()[0].payload["code"], "UnknownNode");
  EXPECT_EQ(a.errors()[0].payload["requestId"], request);
  EXPECT_TRUE(b.errors().empty());
  EXPECT_EQ(s.session->seq(), 0);
}

TEST(Tcp, DuplicateDeviceRefused) {
  Server s;
  SyncClient a(s.endpoint(), "s", "same", DeviceKind::pc);
  SyncClient b(s.endpoint(), "s", "same", DeviceKind::vr);
  a.connect();
  EXPECT_THROW(b.connect(), std::runtime_error);
  a.close();
  // Give the server a moment to notice the disconnect.
  for (int i = 0; i < 100 && !s.session->presence().empty(); ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  SyncClient c(s.endpoint(), "s", "same", DeviceKind::vr);
  EXPECT_NO_THROW(c.connect());
}

TEST(Tcp, FirstMessageMustBeHello) {
  Server s;
  RawConnection raw(s.server->port());
  raw.send(encode(Message{MessageType::Ping, "s", "x", std::nullopt, Json::object()}));
  const auto reply = raw.read();
  EXPECT_EQ(reply.type, MessageType::Error);
  EXPECT_EQ(reply.payload["code"], "NotJoined");
}

TEST(Tcp, GarbageLineIsBadRequestAndConnectionSurvives) {
  Server s;
  RawConnection raw(s.server->port());
  raw.send(encode(Message{MessageType::Hello, "s", "raw", std::nullopt, Json{{"kind", "pc"}}}));
  EXPECT_EQ(raw.read().type, MessageType::Welcome);
  raw.send("{oops\n");
  const auto error = raw.read();
  EXPECT_EQ(error.type, MessageType::Error);
  EXPECT_EQ(error.payload["code"], "BadRequest");
  raw.send(encode(Message{MessageType::Ping, "s", "raw", std::nullopt, Json::object()}));
  EXPECT_EQ(raw.read().type, MessageType::Pong);
}

TEST(Tcp, WrongSessionRefused) {
  Server s;
  SyncClient c(s.endpoint(), "other", "pc-1", DeviceKind::pc);
  EXPECT_THROW(c.connect(), std::runtime_error);
}

TEST(Tcp, PortBusyIsReported) {
  Server s;
  SyncServer second(s.session, s.endpoint());
  EXPECT_THROW(second.start(), std::runtime_error);
}

TEST(Tcp, PoseFloodDoesNotBlockOps) {
  Server s;
  SyncClient ops(s.endpoint(), "s", "pc-1", DeviceKind::pc);
  ops.connect();
  std::vector<std::unique_ptr<SyncClient>> headsets;
  for (int d = 0; d < 3; ++d) {
    headsets.push_back(std::make_unique<SyncClient>(s.endpoint(), "s", "vr-" + std::to_string(d), DeviceKind::vr));
    headsets.back()->connect();
  }
  std::vector<std::thread> flood;
  for (auto& h : headsets)
    flood.emplace_back([&h] {
      for (int i = 0; i < 180; ++i)
        h->send_pose(PoseSample{h->device(), PoseKind::head, 1000 + i * 11, Vec3(0, 1.6, 0), Quat::Identity()});
    });
  for (int i = 0; i < 20; ++i) ops.submit(AddNode{"", "n" + std::to_string(i), Vec3::Zero(), ""});
  for (auto& t : flood) t.join();
  ops.barrier();
  for (auto& h : headsets) h->barrier();
  const auto events = s.session->events();
  ASSERT_EQ(events.size(), 20u);
  for (std::size_t i = 0; i < events.size(); ++i) EXPECT_EQ(events[i].seq, static_cast<std::int64_t>(i + 1));
  EXPECT_EQ(ops.seq(), 20);
  EXPECT_FALSE(s.session->pose_log().empty());
}
