#pragma once

#include <thread>

#include <httplib.h>

#include "tosca2occi/mock/runtime.hpp"
#include "tosca2occi/occi/json_io.hpp"

// HTTP dialect over the mock runtime:
//   GET    /configuration                  full runtime model
//   GET    /entity/{id}                    one entity with its state
//   PUT    /entity/{id}                    create  {kind, mixins, attributes, source?, target?}
//   PATCH  /entity/{id}                    update  {attributes}
//   DELETE /entity/{id}
//   POST   /entity/{id}/action/{name}
//   POST   /_fault                         test harness only
// Status codes: 200/201/400/404/409.

namespace tosca2occi::mock {

class RuntimeServer {
public:
    explicit RuntimeServer(MockRuntime& runtime) : rt_(&runtime) { route(); }

    ~RuntimeServer() { stop(); }

    /// Binds an ephemeral port and serves in a background thread; returns
    /// the chosen port.
    int start_ephemeral(const std::string& host = "127.0.0.1") {
        port_ = server_.bind_to_any_port(host);
        thread_ = std::thread([this, host] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        return port_;
    }

    /// Binds a fixed port and blocks until stop().
    bool serve(const std::string& host, int port) { return server_.listen(host, port); }

    void stop() {
        if (server_.is_running())
            server_.stop();
        if (thread_.joinable())
            thread_.join();
    }

    int port() const { return port_; }

private:
    void route() {
        auto reply = [](httplib::Response& res, int status, const Json& body) {
            res.status = status;
            res.set_content(body.dump(2) + "\n", "application/json");
        };
        auto guard = [reply](httplib::Response& res, auto&& fn) {
            try {
                fn();
            } catch (const RequestError& e) {
                reply(res, e.status, Json{{"error", e.what()}});
            } catch (const std::exception& e) {
                reply(res, 500, Json{{"error", e.what()}});
            }
        };

        server_.Get("/configuration", [=, this](const httplib::Request&, httplib::Response& res) {
            guard(res, [&] { reply(res, 200, occi::to_json(rt_->snapshot())); });
        });
        server_.Get(R"(/entity/([^/]+))",
                    [=, this](const httplib::Request& req, httplib::Response& res) {
                        guard(res, [&] { reply(res, 200, rt_->get_entity(req.matches[1])); });
                    });
        server_.Put(R"(/entity/([^/]+))",
                    [=, this](const httplib::Request& req, httplib::Response& res) {
                        guard(res, [&] {
                            rt_->create(req.matches[1], Json::parse(req.body));
                            reply(res, 201, Json{{"id", std::string(req.matches[1])}});
                        });
                    });
        server_.Patch(R"(/entity/([^/]+))",
                      [=, this](const httplib::Request& req, httplib::Response& res) {
                          guard(res, [&] {
                              Json body = Json::parse(req.body);
                              rt_->update(req.matches[1],
                                          body.value("attributes", Json::object()));
                              reply(res, 200, Json{{"id", std::string(req.matches[1])}});
                          });
                      });
        server_.Delete(R"(/entity/([^/]+))",
                       [=, this](const httplib::Request& req, httplib::Response& res) {
                           guard(res, [&] {
                               rt_->remove(req.matches[1]);
                               reply(res, 200, Json{{"id", std::string(req.matches[1])}});
                           });
                       });
        server_.Post(R"(/entity/([^/]+)/action/([^/]+))",
                     [=, this](const httplib::Request& req, httplib::Response& res) {
                         guard(res, [&] {
                             rt_->action(req.matches[1], req.matches[2]);
                             reply(res, 200, Json{{"id", std::string(req.matches[1])}});
                         });
                     });
        server_.Post("/_fault", [=, this](const httplib::Request& req, httplib::Response& res) {
            guard(res, [&] {
                rt_->inject_fault(FaultSpec::from_json(Json::parse(req.body)));
                reply(res, 200, Json{{"ok", true}});
            });
        });
    }

    MockRuntime* rt_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
};

/// RuntimeClient over the HTTP dialect above.
class HttpRuntimeClient : public orch::RuntimeClient {
public:
    explicit HttpRuntimeClient(const std::string& base_url) : client_(base_url.c_str()) {
        client_.set_connection_timeout(2);
        client_.set_read_timeout(10);
    }

    occi::Configuration get_configuration() override {
        auto res = client_.Get("/configuration");
        ensure(res, 200);
        return occi::configuration_from_json(Json::parse(res->body));
    }

    void create_entity(const std::string& id, const Json& payload) override {
        auto res = client_.Put(("/entity/" + id).c_str(), payload.dump(), "application/json");
        ensure(res, 201);
    }

    void update_entity(const std::string& id, const Json& attributes) override {
        Json body{{"attributes", attributes}};
        auto res = client_.Patch(("/entity/" + id).c_str(), body.dump(), "application/json");
        ensure(res, 200);
    }

    void delete_entity(const std::string& id) override {
        auto res = client_.Delete(("/entity/" + id).c_str());
        ensure(res, 200);
    }

    void trigger_action(const std::string& id, const std::string& action) override {
        auto res = client_.Post(("/entity/" + id + "/action/" + action).c_str(), "",
                                "application/json");
        ensure(res, 200);
    }

    std::string entity_state(const std::string& id) override {
        auto res = client_.Get(("/entity/" + id).c_str());
        if (!res)
            throw RuntimeUnreachableError("runtime not reachable");
        if (res->status == 404)
            return "";
        if (res->status != 200)
            throw RequestError(res->status, res->body);
        return Json::parse(res->body).value("state", "");
    }

    void inject_fault(const Json& fault) {
        auto res = client_.Post("/_fault", fault.dump(), "application/json");
        ensure(res, 200);
    }

private:
    void ensure(const httplib::Result& res, int expected) {
        if (!res)
            throw RuntimeUnreachableError("runtime not reachable");
        if (res->status != expected)
            throw RequestError(res->status, res->body);
    }

    httplib::Client client_;
};

} // namespace tosca2occi::mock
