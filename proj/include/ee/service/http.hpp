#pragma once

#include <memory>
#include <string>

#include "ee/error.hpp"
#include "ee/service/manager.hpp"

namespace ee::service {

/// HTTP status for an error code: 404 unknown ids, 409 closed or idle
/// sessions, 422 unevaluable specs, 400 everything else.
int http_status(Errc code) noexcept;

/// JSON-over-HTTP front end of a SessionManager.
///
///   GET  /health
///   GET  /specs
///   POST /sessions                       {"spec_id"}
///   GET  /sessions[?spec_id=]
///   POST /sessions/{id}/events           user_event
///   GET  /sessions/{id}/messages?after=&timeout_ms=
///   GET  /sessions/{id}/transcript
///   GET  /specs/{id}/verdict
///
/// Message-bearing responses are line-delimited wire messages.
class HttpServer {
public:
    explicit HttpServer(SessionManager& manager);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds to `port` (0 picks a free one) and returns the bound port, or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    bool serve();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ee::service
