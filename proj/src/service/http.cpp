#include "ee/service/http.hpp"

#include <httplib.h>

#include "ee/service/wire.hpp"

namespace ee::service {

int http_status(Errc code) noexcept {
    switch (code) {
        case Errc::UnknownSpec:
        case Errc::UnknownSession: return 404;
        case Errc::SessionClosed:
        case Errc::SessionNotWaiting: return 409;
        case Errc::NoEvaluations: return 422;
        default: return 400;
    }
}

namespace {

constexpr const char* kNdjson = "application/x-ndjson";
constexpr const char* kJson = "application/json";

std::string ndjson(const std::vector<nlohmann::json>& lines) {
    std::string out;
    for (const auto& l : lines) out += l.dump() + "\n";
    return out;
}

void send_error(httplib::Response& res, const Error& e) {
    res.status = http_status(e.code());
    res.set_content(error_message(e).dump() + "\n", kJson);
}

template <class F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const nlohmann::json::exception& e) {
            send_error(res, Error(Errc::SyntaxError, e.what()));
        }
    };
}

nlohmann::json parse_body(const httplib::Request& req) {
    auto j = nlohmann::json::parse(req.body, nullptr, false);
    if (j.is_discarded()) throw Error(Errc::SyntaxError, "request body is not JSON");
    return j;
}

std::size_t size_param(const httplib::Request& req, const char* name, std::size_t fallback) {
    if (!req.has_param(name)) return fallback;
    try {
        return static_cast<std::size_t>(std::stoull(req.get_param_value(name)));
    } catch (const std::exception&) {
        throw Error(Errc::SchemaError, std::string(name) + ": expected non-negative integer");
    }
}

}  // namespace

struct HttpServer::Impl {
    explicit Impl(SessionManager& m) : manager(m) {}
    SessionManager& manager;
    httplib::Server server;
};

HttpServer::HttpServer(SessionManager& manager) : impl_(std::make_unique<Impl>(manager)) {
    auto& m = impl_->manager;
    auto& s = impl_->server;

    s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    s.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"status":"ok"})", kJson);
    });

    s.Get("/specs", guarded([&m](const httplib::Request&, httplib::Response& res) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& id : m.spec_ids()) {
            const auto spec = m.spec(id);
            out.push_back({{"spec_id", id}, {"system", spec->spec.system.name}});
        }
        res.set_content(out.dump(), kJson);
    }));

    s.Post("/sessions", guarded([&m](const httplib::Request& req, httplib::Response& res) {
        const auto body = parse_body(req);
        if (!body.is_object() || !body.contains("spec_id") || !body["spec_id"].is_string()) {
            throw Error(Errc::SchemaError, "spec_id: expected string");
        }
        auto created = m.create_session(body["spec_id"].get<std::string>());
        res.status = 201;
        res.set_header("Location", "/sessions/" + created.session_id);
        res.set_content(ndjson(created.turn.messages), kNdjson);
    }));

    s.Get("/sessions", guarded([&m](const httplib::Request& req, httplib::Response& res) {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& summary : m.list_sessions(req.get_param_value("spec_id"))) out.push_back(to_json(summary));
        res.set_content(out.dump(), kJson);
    }));

    s.Post(R"(/sessions/([^/]+)/events)", guarded([&m](const httplib::Request& req, httplib::Response& res) {
        const auto event = event_from_json(parse_body(req));
        auto turn = m.post_event(req.matches[1], event);
        res.set_content(ndjson(turn.messages), kNdjson);
    }));

    s.Get(R"(/sessions/([^/]+)/messages)", guarded([&m](const httplib::Request& req, httplib::Response& res) {
        const auto after = size_param(req, "after", 0);
        const auto timeout = std::min<std::size_t>(size_param(req, "timeout_ms", 0), 30000);
        auto msgs = m.messages(req.matches[1], after, std::chrono::milliseconds(timeout));
        res.set_content(ndjson(msgs), kNdjson);
    }));

    s.Get(R"(/sessions/([^/]+)/transcript)", guarded([&m](const httplib::Request& req, httplib::Response& res) {
        res.set_content(encode_transcript(m.transcript(req.matches[1])), kNdjson);
    }));

    s.Get(R"(/specs/([^/]+)/verdict)", guarded([&m](const httplib::Request& req, httplib::Response& res) {
        res.set_content(to_json(m.verdict(req.matches[1])).dump(), kJson);
    }));
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::serve() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

}  // namespace ee::service
