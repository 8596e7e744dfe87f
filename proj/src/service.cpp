#include "lexseq/service.hpp"

#include <httplib.h>

#include <thread>

#include "lexseq/json_io.hpp"

namespace lexseq {

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_found:
      return 404;
    case ErrorCode::session_index_mismatch:
    case ErrorCode::already_exists:
    case ErrorCode::lock_contention:
      return 409;
    case ErrorCode::io_error:
      return 500;
    default:
      return 422;
  }
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const EngineError& e) {
  send_json(res, status_for(e.code()),
            json{{"error", error_code_name(e.code())}, {"message", e.what()}});
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const EngineError& e) {
    send_error(res, e);
  } catch (const json::exception& e) {
    send_json(res, 422,
              json{{"error", "malformed_document"}, {"message", e.what()}});
  } catch (const std::exception& e) {
    send_json(res, 500, json{{"error", "internal"}, {"message", e.what()}});
  }
}

}  // namespace

struct Service::Impl {
  Engine& engine;
  httplib::Server server;
  std::thread worker;

  explicit Impl(Engine& eng) : engine(eng) { wire(); }

  void wire() {
    server.Post("/students", [this](const httplib::Request& req,
                                    httplib::Response& res) {
      guarded(res, [&] {
        json body = parse_json_text(req.body, ErrorCode::malformed_document);
        std::string id = body.at("id").get<std::string>();
        int year = body.at("year").get<int>();
        send_json(res, 201, engine.init_student(id, year));
      });
    });

    server.Get(R"(/students/([^/]+)/plan)", [this](const httplib::Request& req,
                                                   httplib::Response& res) {
      guarded(res, [&] {
        std::optional<std::uint64_t> seed;
        if (req.has_param("seed")) {
          seed = std::stoull(req.get_param_value("seed"));
        }
        send_json(res, 200, engine.plan(req.matches[1], seed));
      });
    });

    server.Post(R"(/students/([^/]+)/results)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&] {
                    GameResult result =
                        parse_json_text(req.body, ErrorCode::malformed_document)
                            .get<GameResult>();
                    send_json(res, 200, engine.submit(req.matches[1], result));
                  });
                });

    server.Get(R"(/students/([^/]+)/profile)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   send_json(res, 200, engine.inspect(req.matches[1]));
                 });
               });
  }
};

Service::Service(Engine& engine) : impl_(std::make_unique<Impl>(engine)) {}

Service::~Service() { stop(); }

int Service::start_background(const std::string& host) {
  int port = impl_->server.bind_to_any_port(host);
  if (port <= 0) {
    fail(ErrorCode::io_error, "cannot bind to " + host);
  }
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void Service::run_blocking(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    fail(ErrorCode::io_error,
         "cannot listen on " + host + ":" + std::to_string(port));
  }
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->worker.joinable()) {
    impl_->worker.join();
  }
}

}  // namespace lexseq
