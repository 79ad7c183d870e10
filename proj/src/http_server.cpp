// SPDX-License-Identifier: Apache-2.0
#include "promnl/http_server.hpp"

#include "httplib.h"
#include "promnl/errors.hpp"

namespace promnl {

HttpServer::HttpServer(const Engine& engine, const RpcService& rpc) : server_(std::make_unique<httplib::Server>()) {
  server_->Post("/rpc", [&rpc](const httplib::Request& req, httplib::Response& res) {
    const auto reply = rpc.handle_text(req.body);
    if (!reply) {
      res.status = 204;
      return;
    }
    res.set_content(*reply, "application/json");
  });
  server_->Get("/healthz", [&engine](const httplib::Request&, httplib::Response& res) {
    const bool ready = engine.catalog_ready();
    res.status = ready ? 200 : 503;
    const auto total = engine.store().snapshot()->size();
    res.set_content(nlohmann::json{{"ready", ready}, {"metrics", total}}.dump(), "application/json");
  });
  server_->Get("/readyz/gpu", [&engine](const httplib::Request&, httplib::Response& res) {
    const bool ready = engine.gpu_ready();
    res.status = ready ? 200 : 503;
    res.set_content(nlohmann::json{{"ready", ready}}.dump(), "application/json");
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) throw Error(ErrorKind::Config, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() { server_->stop(); }

}  // namespace promnl
