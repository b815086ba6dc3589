#pragma once

// HTTP routes over the shared service handlers.

#include <string>

#include <httplib.h>

#include "kaleido/service.hpp"

namespace kaleido::service {

inline void reply(httplib::Response& res, const Response& r) {
    res.status = r.status;
    res.set_content(r.text(), r.content_type());
}

/// Registers every /api route on `server`.
inline void install_routes(httplib::Server& server) {
    server.set_payload_max_length(1 << 20);
    server.Get("/api/health", [](const httplib::Request&, httplib::Response& res) { reply(res, health()); });
    server.Post("/api/classify", [](const httplib::Request& req, httplib::Response& res) {
        reply(res, with_body(req.body, [](const Json& j) { return classify(j); }));
    });
    server.Post("/api/build", [](const httplib::Request& req, httplib::Response& res) {
        reply(res, with_body(req.body, [](const Json& j) { return build(j); }));
    });
    server.Post("/api/cover", [](const httplib::Request& req, httplib::Response& res) {
        reply(res, with_body(req.body, [](const Json& j) { return cover(j); }));
    });
    server.Get("/api/enumerate", [](const httplib::Request& req, httplib::Response& res) {
        Json q = Json::object();
        for (const char* key : {"walls", "max_order"}) {
            if (!req.has_param(key)) continue;
            const std::string v = req.get_param_value(key);
            try {
                std::size_t used = 0;
                const long n = std::stol(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
                q[key] = n;
            } catch (const std::logic_error&) {
                reply(res, {400, detail::error_body("invalid_request",
                                                    std::string(key) + " must be an integer"), {}});
                return;
            }
        }
        reply(res, enumerate(q));
    });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (res.body.empty())
            res.set_content(to_text(detail::error_body("not_found", "no such endpoint")), "application/json");
    });
}

} // namespace kaleido::service
