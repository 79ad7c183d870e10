// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>

#include "promnl/engine.hpp"
#include "promnl/rpc.hpp"

namespace httplib {
class Server;
}

namespace promnl {

/// POST /rpc (JSON-RPC 2.0), GET /healthz, GET /readyz/gpu.
class HttpServer {
 public:
  HttpServer(const Engine& engine, const RpcService& rpc);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port. Throws
  /// Error(Config) when binding fails.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called.
  void listen();
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace promnl
