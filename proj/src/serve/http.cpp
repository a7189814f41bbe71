#include "tailorsql/serve/http.hpp"

#include "httplib.h"
#include "json.hpp"
#include "tailorsql/docs/store.hpp"
#include "tailorsql/errors.hpp"
#include "tailorsql/serve/service.hpp"

namespace tailorsql::serve {

using nlohmann::json;

namespace {

struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
  try {
    auto j = json::parse(req.body.empty() ? std::string("{}") : req.body);
    if (!j.is_object()) throw BadRequest("request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw BadRequest(std::string("invalid JSON: ") + e.what());
  }
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const BadRequest& e) {
      reply(res, 400, {{"error", "bad_request"}, {"message", e.what()}});
    } catch (const UnknownQuestion& e) {
      reply(res, 404, {{"error", "unknown_question"}, {"message", e.what()}});
    } catch (const DuplicateFeedback& e) {
      reply(res, 409, {{"error", "duplicate_feedback"}, {"message", e.what()}});
    } catch (const ProviderUnavailable& e) {
      reply(res, 503, {{"error", "provider_unavailable"}, {"message", e.what()}});
    } catch (const std::exception& e) {
      reply(res, 500, {{"error", "internal"}, {"message", e.what()}});
    }
  };
}

}  // namespace

HttpServer::HttpServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                         {"Access-Control-Allow-Headers", "Content-Type"}});
  s.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.Post("/ask", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const auto body = parse_body(req);
           if (!body.contains("question") || !body["question"].is_string()) {
             throw BadRequest("field 'question' (string) is required");
           }
           const auto question = body["question"].get<std::string>();
           if (question.find_first_not_of(" \t\r\n") == std::string::npos) throw BadRequest("question is empty");
           std::optional<Pipeline> forced;
           if (body.contains("arm") && !body["arm"].is_null()) {
             if (!body["arm"].is_string()) throw BadRequest("field 'arm' must be a string");
             const auto arm = body["arm"].get<std::string>();
             if (arm != "auto") {
               forced = pipeline_from_string(arm);
               if (!forced) throw BadRequest("arm must be auto, specialized or generic");
             }
           }
           reply(res, 200, to_json(service_.answer(question, forced)));
         }));

  s.Post("/feedback", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const auto body = parse_body(req);
           if (!body.contains("question_id") || !body["question_id"].is_string()) {
             throw BadRequest("field 'question_id' (string) is required");
           }
           if (!body.contains("useful") || !body["useful"].is_boolean()) {
             throw BadRequest("field 'useful' (boolean) is required");
           }
           service_.record_feedback(body["question_id"].get<std::string>(), body["useful"].get<bool>());
           reply(res, 200, {{"ok", true}});
         }));

  s.Post("/rebuild", guarded([this](const httplib::Request&, httplib::Response& res) {
           reply(res, 200, {{"manifest", docs::to_json(service_.rebuild())}});
         }));

  s.Get("/stats", guarded([this](const httplib::Request&, httplib::Response& res) {
          reply(res, 200, service_.stats());
        }));

  s.Get("/health", guarded([this](const httplib::Request&, httplib::Response& res) {
          reply(res, 200, {{"status", "ok"}, {"documents", service_.store()->size()}});
        }));
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::listen(const std::string& host, int port) { return server_->listen(host, port); }

int HttpServer::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool HttpServer::listen_after_bind() { return server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_->is_running()) server_->stop();
}

bool HttpServer::running() const { return server_->is_running(); }

}  // namespace tailorsql::serve
