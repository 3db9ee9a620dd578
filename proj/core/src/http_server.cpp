#include "gazegram/http_server.hpp"

#include <charconv>
#include <httplib.h>

namespace gazegram {
namespace {

using httplib::Request;
using httplib::Response;

void send_json(Response& res, const Json& body, int status = 200) {
  res.status = status;
  res.set_content(dump_canonical(body), "application/json");
}

void send_error(Response& res, int status, const std::string& message, const Json& details = nullptr) {
  Json body{{"error", message}, {"status", status}};
  if (!details.is_null()) body["details"] = details;
  send_json(res, body, status);
}

std::optional<std::string> param(const Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

template <typename T>
T parse_number(const std::string& text, const char* name) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ServiceError(400, std::string("invalid value for ") + name + ": '" + text + "'");
  }
  return value;
}

template <typename T>
std::optional<T> number_param(const Request& req, const char* name) {
  const auto text = param(req, name);
  if (!text) return std::nullopt;
  return parse_number<T>(*text, name);
}

Json parse_body(const Request& req) {
  if (req.body.empty()) return Json::object();
  Json body = Json::parse(req.body, nullptr, false);
  if (body.is_discarded()) throw ServiceError(400, "request body is not valid JSON");
  return body;
}

// Wraps a handler so service and domain failures become JSON error replies.
template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const Request& req, Response& res) {
    try {
      f(req, res);
    } catch (const ServiceError& e) {
      send_error(res, e.status(), e.what(), e.details());
    } catch (const GazeCsvError& e) {
      send_error(res, 422, e.what(), Json{{"row", e.row()}});
    } catch (const LookupError& e) {
      send_error(res, 404, e.what());
    } catch (const StructureError& e) {
      send_error(res, 409, e.what());
    } catch (const Error& e) {
      send_error(res, 400, e.what());
    } catch (const Json::exception& e) {
      send_error(res, 400, e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  };
}

void create_session(AnalysisService& service, const Request& req, Response& res) {
  std::vector<std::uint8_t> image;
  std::string gaze;
  if (req.is_multipart_form_data()) {
    if (!req.has_file("image") || !req.has_file("gaze")) {
      throw ServiceError(400, "multipart upload needs 'image' and 'gaze' parts");
    }
    const auto img = req.get_file_value("image").content;
    image.assign(img.begin(), img.end());
    gaze = req.get_file_value("gaze").content;
  } else {
    const Json body = parse_body(req);
    if (!body.contains("image") || !body.contains("gaze")) {
      throw ServiceError(400, "body needs 'image' (base64 PNG) and 'gaze' (CSV text)");
    }
    try {
      image = base64_decode(body.at("image").get<std::string>());
    } catch (const FormatError& e) {
      throw ServiceError(415, e.what());
    }
    gaze = body.at("gaze").get<std::string>();
  }
  const auto id = service.create_session(image, gaze);
  send_json(res, service.get_session(id), 201);
}

PatternQuery pattern_query(const Request& req) {
  PatternQuery q;
  q.level = number_param<int>(req, "level");
  q.n = number_param<int>(req, "n").value_or(2);
  q.tau = number_param<std::int64_t>(req, "tau").value_or(6);
  q.mode = param(req, "mode").value_or("total");
  q.sort = param(req, "sort");
  q.p = param(req, "p");
  q.q = param(req, "q");
  q.threshold = number_param<double>(req, "threshold");
  const auto op = param(req, "op").value_or("more");
  if (op == "more") {
    q.op = ThresholdOp::more;
  } else if (op == "less") {
    q.op = ThresholdOp::less;
  } else {
    throw ServiceError(400, "op must be more or less");
  }
  return q;
}

LayoutQuery layout_query(const Json& body) {
  LayoutQuery q;
  if (!body.is_object()) throw ServiceError(400, "layout body must be an object");
  if (body.contains("patterns")) q.patterns = body.at("patterns").get<std::vector<std::string>>();
  if (body.contains("aoi")) {
    const auto aoi = body.at("aoi").get<std::string>();
    if (aoi.size() != 1) throw ServiceError(400, "aoi must be a single character");
    q.aoi = aoi[0];
  }
  if (body.contains("mode")) q.mode = parse_role(body.at("mode").get<std::string>());
  if (body.contains("level")) q.level = body.at("level").get<int>();
  q.n = body.value("n", 2);
  q.tau = body.value("tau", std::int64_t{6});
  auto& p = q.params;
  p.iterations = body.value("iterations", p.iterations);
  p.spring = body.value("spring", p.spring);
  p.repulsion = body.value("repulsion", p.repulsion);
  p.center = body.value("center", p.center);
  p.time_step = body.value("step", p.time_step);
  p.seed = body.value("seed", p.seed);
  return q;
}

}  // namespace

struct HttpServer::Impl {
  explicit Impl(AnalysisService& s) : service(s) {}
  AnalysisService& service;
  httplib::Server server;
};

HttpServer::HttpServer(AnalysisService& service) : impl_(std::make_unique<Impl>(service)) {
  auto& srv = impl_->server;
  auto& svc = impl_->service;
  srv.set_payload_max_length(256u << 20);
  // No SO_REUSEPORT: a second server on a busy port must fail to bind.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });

  srv.Get("/health", guarded([](const Request&, Response& res) {
            send_json(res, {{"status", "ok"}, {"version", kVersion}});
          }));

  srv.Post("/sessions",
           guarded([&svc](const Request& req, Response& res) { create_session(svc, req, res); }));

  srv.Get("/sessions", guarded([&svc](const Request&, Response& res) {
            send_json(res, {{"sessions", svc.list_sessions()}});
          }));

  srv.Get(R"(/sessions/([^/]+))", guarded([&svc](const Request& req, Response& res) {
            send_json(res, svc.get_session(req.matches[1]));
          }));

  srv.Get(R"(/sessions/([^/]+)/gaze\.csv)", guarded([&svc](const Request& req, Response& res) {
            res.set_content(svc.export_gaze_csv(req.matches[1]), "text/csv");
          }));

  srv.Post(R"(/sessions/([^/]+)/detect)", guarded([&svc](const Request& req, Response& res) {
             const Json body = parse_body(req);
             DetectionParams params;
             params.cell_size = body.value("cellSize", params.cell_size);
             params.colors = body.value("colors", params.colors);
             if (auto z = number_param<int>(req, "cellSize")) params.cell_size = *z;
             if (auto g = number_param<int>(req, "colors")) params.colors = *g;
             send_json(res, svc.auto_detect(req.matches[1], params));
           }));

  srv.Patch(R"(/sessions/([^/]+)/aois)", guarded([&svc](const Request& req, Response& res) {
              send_json(res, svc.edit_aois(req.matches[1], parse_body(req)));
            }));

  srv.Get(R"(/sessions/([^/]+)/patterns)", guarded([&svc](const Request& req, Response& res) {
            send_json(res, svc.query_patterns(req.matches[1], pattern_query(req)));
          }));

  srv.Get(R"(/sessions/([^/]+)/similarity)", guarded([&svc](const Request& req, Response& res) {
            send_json(res, svc.query_similarity(req.matches[1], number_param<int>(req, "level"),
                                                number_param<int>(req, "n").value_or(2),
                                                number_param<std::int64_t>(req, "tau").value_or(6)));
          }));

  srv.Post(R"(/sessions/([^/]+)/layout)", guarded([&svc](const Request& req, Response& res) {
             send_json(res, svc.compute_layout(req.matches[1], layout_query(parse_body(req))));
           }));

  srv.Get(R"(/sessions/([^/]+)/export\.svg)", guarded([&svc](const Request& req, Response& res) {
            const bool with_image = param(req, "image").value_or("1") != "0";
            res.set_content(svc.export_svg(req.matches[1], number_param<int>(req, "level"), with_image),
                            "image/svg+xml");
          }));
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace gazegram
