// Copyright 2026 The WheelArm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "server/server.hpp"

#include <chrono>
#include <deque>
#include <fstream>
#include <list>
#include <sstream>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

#include "common/codec.hpp"
#include "common/error.hpp"
#include "dataset/container.hpp"
#include "scene/render.hpp"
#include "teleop/session.hpp"

namespace wheelarm::server {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace fs = std::filesystem;
using tcp = asio::ip::tcp;

namespace {

constexpr std::size_t kMaxQueuedDroppable = 32;

std::string content_type(const fs::path& p) {
  const std::string ext = p.extension().string();
  if (ext == ".html") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  return "application/octet-stream";
}

Json error_ack(const std::string& request, const Json& id, ErrorCode code, const std::string& message) {
  return Json{{"type", "ack"}, {"request", request}, {"id", id},   {"ok", false},
              {"error", std::string(error_name(code))}, {"message", message}};
}

}  // namespace

class WsSession;

struct Server::Impl : std::enable_shared_from_this<Server::Impl> {
  Impl(robot::RobotConfig cfg, scene::Scene sc, ServerOptions opts)
      : options(std::move(opts)),
        config(std::move(cfg)),
        svc(teleop::Simulator(config, std::move(sc), options.seed, options.sim)),
        acceptor(ioc),
        timer(ioc),
        signals(ioc) {}

  void open();
  void accept();
  void schedule_tick();
  void tick();
  void shutdown();

  void attach(const std::shared_ptr<WsSession>& s);
  void detach(WsSession* s);
  void on_message(WsSession* s, const std::string& text);
  Json handle(WsSession* s, const Json& msg);
  Json end_and_write();
  Json hello(WsSession* s) const;
  void broadcast(const std::string& text, bool droppable);
  std::string frame_message();

  ServerOptions options;
  robot::RobotConfig config;
  teleop::SessionService svc;
  asio::io_context ioc;
  tcp::acceptor acceptor;
  asio::steady_timer timer;
  asio::signal_set signals;
  std::chrono::steady_clock::time_point next_tick;
  std::list<std::shared_ptr<WsSession>> sessions;
  WsSession* operator_session = nullptr;
  std::uint64_t ticks = 0;
  bool stopping = false;
};

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket socket, std::weak_ptr<Server::Impl> server)
      : ws_(std::move(socket)), server_(std::move(server)) {}

  void start(http::request<http::string_body> req) {
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.text(true);
    ws_.async_accept(req, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      if (auto srv = self->server_.lock()) {
        srv->attach(self);
        self->read();
      }
    });
  }

  void send(std::string text, bool droppable) {
    if (closed_) return;
    if (droppable && queue_.size() >= kMaxQueuedDroppable) return;
    queue_.push_back(std::make_shared<const std::string>(std::move(text)));
    if (queue_.size() == 1) write();
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    beast::get_lowest_layer(ws_).cancel();
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ec);
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      auto srv = self->server_.lock();
      if (ec || !srv) {
        if (srv) srv->detach(self.get());
        self->closed_ = true;
        return;
      }
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      srv->on_message(self.get(), text);
      self->read();
    });
  }

  void write() {
    ws_.async_write(asio::buffer(*queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->queue_.clear();
        return;
      }
      self->queue_.pop_front();
      if (!self->queue_.empty()) self->write();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  std::weak_ptr<Server::Impl> server_;
  beast::flat_buffer buffer_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  bool closed_ = false;
};

// Plain HTTP: upgrades to WebSocket or serves one static file.
class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket socket, std::weak_ptr<Server::Impl> server)
      : stream_(std::move(socket)), server_(std::move(server)) {}

  void start() {
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, req_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return;
      self->dispatch();
    });
  }

 private:
  void dispatch() {
    auto srv = server_.lock();
    if (!srv) return;
    if (websocket::is_upgrade(req_)) {
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), server_)->start(std::move(req_));
      return;
    }
    auto res = std::make_shared<http::response<http::string_body>>(respond(*srv));
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
      beast::error_code ignored;
      self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
    });
  }

  http::response<http::string_body> respond(const Server::Impl& srv) {
    auto make = [&](http::status status, std::string body, const std::string& type) {
      http::response<http::string_body> res{status, req_.version()};
      res.set(http::field::server, "wheelarm");
      res.set(http::field::content_type, type);
      res.keep_alive(false);
      res.body() = req_.method() == http::verb::head ? std::string() : std::move(body);
      res.content_length(res.body().size());
      return res;
    };
    if (!srv.options.ui_dir) {
      return make(http::status::not_found, "no UI is served; connect a WebSocket client\n", "text/plain");
    }
    if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
      return make(http::status::method_not_allowed, "GET only\n", "text/plain");
    }
    std::string target(req_.target());
    target = target.substr(0, target.find('?'));
    if (target.empty() || target.front() != '/' || target.find("..") != std::string::npos) {
      return make(http::status::bad_request, "bad path\n", "text/plain");
    }
    if (target.back() == '/') target += "index.html";
    const fs::path file = *srv.options.ui_dir / fs::path(target.substr(1));
    std::ifstream in(file, std::ios::binary);
    if (!in || !fs::is_regular_file(file)) return make(http::status::not_found, "not found\n", "text/plain");
    std::ostringstream body;
    body << in.rdbuf();
    return make(http::status::ok, body.str(), content_type(file));
  }

  beast::tcp_stream stream_;
  std::weak_ptr<Server::Impl> server_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> req_;
};

void Server::Impl::open() {
  const tcp::endpoint ep(asio::ip::make_address(options.host), options.port);
  acceptor.open(ep.protocol());
  acceptor.set_option(asio::socket_base::reuse_address(true));
  acceptor.bind(ep);
  acceptor.listen();
}

void Server::Impl::accept() {
  acceptor.async_accept([self = shared_from_this()](beast::error_code ec, tcp::socket socket) {
    if (ec) return;
    std::make_shared<HttpSession>(std::move(socket), self)->start();
    self->accept();
  });
}

void Server::Impl::schedule_tick() {
  const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / config.sim_rate_hz));
  next_tick += period;
  const auto now = std::chrono::steady_clock::now();
  // After a long stall, resume from now instead of replaying missed ticks.
  if (now - next_tick > std::chrono::milliseconds(250)) next_tick = now + period;
  timer.expires_at(next_tick);
  timer.async_wait([self = shared_from_this()](beast::error_code ec) {
    if (ec || self->stopping) return;
    self->tick();
    self->schedule_tick();
  });
}

void Server::Impl::tick() {
  try {
    svc.step();
  } catch (const std::exception& e) {
    spdlog::error("simulation step failed: {}", e.what());
    shutdown();
    return;
  }
  ++ticks;
  if (sessions.empty()) return;
  if (options.state_every_ticks > 0 && ticks % static_cast<std::uint64_t>(options.state_every_ticks) == 0) {
    Json state = svc.sim().state_json();
    state["session"] = svc.active() ? Json{{"active", true},
                                          {"file_name", svc.current()->file_name},
                                          {"samples", svc.recorded_samples()}}
                                    : Json{{"active", false}};
    broadcast(state.dump(), true);
  }
  if (options.frame_every_ticks > 0 && ticks % static_cast<std::uint64_t>(options.frame_every_ticks) == 0) {
    broadcast(frame_message(), true);
  }
}

std::string Server::Impl::frame_message() {
  const scene::RgbdFrame full = svc.sim().render("chassis");
  const std::vector<float> small = scene::downsample_rgb(full, options.frame_width, options.frame_height);
  std::vector<std::uint8_t> rgb(small.size());
  for (std::size_t i = 0; i < small.size(); ++i) rgb[i] = static_cast<std::uint8_t>(std::lround(small[i] * 255.0f));
  return Json{{"type", "frame"},
              {"camera", "chassis"},
              {"time", svc.sim().time()},
              {"width", options.frame_width},
              {"height", options.frame_height},
              {"encoding", "rgb8"},
              {"data", base64_encode(rgb)}}
      .dump();
}

Json Server::Impl::hello(WsSession* s) const {
  return Json{{"type", "hello"},
              {"protocol", kProtocol},
              {"role", s == operator_session ? "operator" : "observer"},
              {"session_active", svc.active()},
              {"sim_rate_hz", config.sim_rate_hz}};
}

void Server::Impl::attach(const std::shared_ptr<WsSession>& s) {
  if (stopping) {
    s->close();
    return;
  }
  sessions.push_back(s);
  if (operator_session == nullptr) operator_session = s.get();
  spdlog::info("client connected as {}", s.get() == operator_session ? "operator" : "observer");
  s->send(hello(s.get()).dump(), false);
}

void Server::Impl::detach(WsSession* s) {
  sessions.remove_if([s](const auto& p) { return p.get() == s; });
  if (operator_session != s) return;
  operator_session = sessions.empty() ? nullptr : sessions.front().get();
  spdlog::info("operator disconnected");
  if (operator_session != nullptr) {
    operator_session->send(Json{{"type", "role"}, {"role", "operator"}}.dump(), false);
  }
}

void Server::Impl::broadcast(const std::string& text, bool droppable) {
  for (const auto& s : sessions) s->send(text, droppable);
}

Json Server::Impl::end_and_write() {
  dataset::Recording rec = svc.end_session();
  const fs::path dir = options.out_dir / rec.manifest.file_name / "raw.watr";
  dataset::write_container(rec, dir);
  Json samples = Json::object();
  for (const auto& t : rec.topics) samples[t.name] = t.rows();
  Json frames = Json::object();
  for (const auto& [cam, images] : rec.frames) frames[cam] = images.size();
  spdlog::info("session {} written to {}", rec.manifest.session_id, dir.string());
  return Json{{"container", dir.string()},
              {"manifest", dataset::manifest_to_json(rec.manifest)},
              {"samples", samples},
              {"frames", frames}};
}

Json Server::Impl::handle(WsSession* s, const Json& msg) {
  const std::string type = msg.value("type", "");
  const Json id = msg.contains("id") ? msg["id"] : Json();
  const bool mutating = type == "command" || type == "start_session" || type == "end_session";
  if (mutating && s != operator_session) {
    return error_ack(type, id, ErrorCode::kNotOperator, "observers cannot send " + type);
  }
  try {
    if (type == "command") {
      const teleop::Ack ack = svc.handle_command(teleop::parse_command(msg, config));
      Json out = ack.to_json();
      out["request"] = type;
      out["id"] = id;
      return out;
    }
    if (type == "start_session") {
      dataset::SessionManifest m;
      m.session_id = msg.value("session_id", "");
      m.file_name = msg.value("file_name", "");
      m.instruction = msg.value("instruction", "");
      m.task_label = msg.value("task_label", "");
      const dataset::SessionManifest& started = svc.start_session(m);
      spdlog::info("session {} started", started.session_id);
      return Json{{"type", "ack"}, {"request", type}, {"id", id}, {"ok", true},
                  {"manifest", dataset::manifest_to_json(started)}};
    }
    if (type == "end_session") {
      Json out{{"type", "ack"}, {"request", type}, {"id", id}, {"ok", true}};
      out.update(end_and_write());
      return out;
    }
    if (type == "state") {
      Json state = svc.sim().state_json();
      state["id"] = id;
      return state;
    }
    if (type == "hello") {
      Json out = hello(s);
      out["id"] = id;
      return out;
    }
  } catch (const Error& e) {
    return error_ack(type, id, e.code(), e.what());
  } catch (const Json::exception& e) {
    return error_ack(type, id, ErrorCode::kMalformedCommand, e.what());
  }
  return error_ack(type, id, ErrorCode::kMalformedCommand, "unknown message type '" + type + "'");
}

void Server::Impl::on_message(WsSession* s, const std::string& text) {
  Json msg;
  try {
    msg = Json::parse(text);
  } catch (const Json::exception& e) {
    s->send(error_ack("", Json(), ErrorCode::kMalformedCommand, std::string("invalid JSON: ") + e.what()).dump(), false);
    return;
  }
  if (!msg.is_object()) {
    s->send(error_ack("", Json(), ErrorCode::kMalformedCommand, "messages must be JSON objects").dump(), false);
    return;
  }
  s->send(handle(s, msg).dump(), false);
}

void Server::Impl::shutdown() {
  if (stopping) return;
  stopping = true;
  if (svc.active()) {
    try {
      end_and_write();
    } catch (const std::exception& e) {
      spdlog::error("could not write the active session: {}", e.what());
    }
  }
  beast::error_code ec;
  acceptor.close(ec);
  timer.cancel();
  signals.cancel(ec);
  for (const auto& s : sessions) s->close();
  sessions.clear();
  operator_session = nullptr;
  ioc.stop();
}

Server::Server(robot::RobotConfig config, scene::Scene scene, ServerOptions options)
    : impl_(std::make_shared<Impl>(std::move(config), std::move(scene), std::move(options))) {
  if (impl_->options.ui_dir && !fs::is_directory(*impl_->options.ui_dir)) {
    fail(ErrorCode::kIoError, impl_->options.ui_dir->string() + " is not a directory");
  }
  try {
    impl_->open();
  } catch (const boost::system::system_error& e) {
    fail(ErrorCode::kIoError, "cannot listen on " + impl_->options.host + ":" +
                                  std::to_string(impl_->options.port) + ": " + e.what());
  }
}

Server::~Server() = default;

std::uint16_t Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() {
  Impl& s = *impl_;
  s.svc.publish_initial();
  s.accept();
  s.next_tick = std::chrono::steady_clock::now();
  s.schedule_tick();
  if (s.options.handle_signals) {
    s.signals.add(SIGINT);
    s.signals.add(SIGTERM);
    s.signals.async_wait([impl = impl_](beast::error_code ec, int) {
      if (!ec) impl->shutdown();
    });
  }
  spdlog::info("listening on ws://{}:{}", s.options.host, port());
  s.ioc.run();
}

void Server::stop() {
  asio::post(impl_->ioc, [impl = impl_] { impl->shutdown(); });
}

}  // namespace wheelarm::server
