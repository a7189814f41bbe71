#pragma once

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace tailorsql::serve {

class Service;

// JSON API over a Service:
//   POST /ask {question, arm?}        -> answer record
//   POST /feedback {question_id, useful} -> {ok}
//   POST /rebuild                     -> {manifest}
//   GET  /stats, GET /health
// Errors map to 400 (bad request), 404 (unknown question), 409 (duplicate
// feedback), 503 (provider unavailable) and 500 (anything else). Every
// response carries permissive CORS headers.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Blocks until stop(). Returns false when the address cannot be bound.
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it (or -1); call listen_after_bind next.
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  [[nodiscard]] bool running() const;

 private:
  Service& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace tailorsql::serve
