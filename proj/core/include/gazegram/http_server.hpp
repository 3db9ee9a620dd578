#pragma once

#include <memory>
#include <string>

#include "gazegram/service.hpp"

namespace gazegram {

/// JSON-over-HTTP front end for AnalysisService.
class HttpServer {
 public:
  explicit HttpServer(AnalysisService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to `host:port`; port 0 picks a free port. Returns the bound
  /// port, or -1 when binding failed.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called. Requires a successful bind().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gazegram
