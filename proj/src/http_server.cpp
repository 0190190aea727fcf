#include <httplib.h>

#include "asbuilt/service.hpp"

namespace asbuilt {

namespace {

void send(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.content_type);
}

}  // namespace

HttpServer::HttpServer(SessionService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  s.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.create_session(req.body));
  });
  s.Get("/sessions", [this](const httplib::Request&, httplib::Response& res) { send(res, service_.list_sessions()); });
  s.Get(R"(/scene/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.scene(req.matches[1].str()));
  });
  s.Get(R"(/assets/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.asset(req.matches[1].str()));
  });
  s.Post(R"(/sessions/([^/]+)/events)", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.post_events(req.matches[1].str(), req.body));
  });
  s.Get(R"(/sessions/([^/]+)/state)", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.state(req.matches[1].str()));
  });
  s.Get(R"(/sessions/([^/]+)/report)", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, service_.report(req.matches[1].str()));
  });
  s.set_post_routing_handler([](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
  });
  s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

bool HttpServer::running() const { return server_->is_running(); }

}  // namespace asbuilt
