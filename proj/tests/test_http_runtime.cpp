#include <doctest.h>

#include "pipeline_support.hpp"
#include "tosca2occi/mock/http.hpp"
#include "tosca2occi/orch/engine.hpp"

using namespace tosca2occi;
using namespace tosca2occi::mock;
using namespace tosca2occi::mapping;
namespace occi = tosca2occi::occi;

namespace {

struct ServerFixture {
    MockRuntime runtime;
    RuntimeServer server;
    int port;

    explicit ServerFixture(const occi::ExtensionSet& set)
        : runtime(set, {.activation_delay_ms = 0, .deterministic = true}), server(runtime),
          port(server.start_ephemeral()) {}

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

} // namespace

TEST_CASE("HTTP surface: create, read, patch, act, delete") {
    const auto& pl = testsupport::pipeline();
    ServerFixture fx(pl.set);
    httplib::Client raw(fx.url().c_str());

    // PUT creates
    Json payload{{"kind", kinds::compute},
                 {"attributes", {{"occi.compute.cores", 2}}},
                 {"mixins", Json::array()}};
    auto res = raw.Put("/entity/vm1", payload.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == 201);

    // GET reflects state
    res = raw.Get("/entity/vm1");
    REQUIRE(res);
    CHECK(res->status == 200);
    auto body = Json::parse(res->body);
    CHECK(body["state"] == "active"); // deterministic mode
    CHECK(body["attributes"]["occi.compute.cores"] == 2);

    // PATCH merges attributes
    res = raw.Patch("/entity/vm1", Json{{"attributes", {{"occi.compute.cores", 8}}}}.dump(),
                    "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(Json::parse(raw.Get("/entity/vm1")->body)["attributes"]["occi.compute.cores"] == 8);

    // invalid attribute -> 400
    res = raw.Patch("/entity/vm1", Json{{"attributes", {{"occi.compute.cores", "NaN"}}}}.dump(),
                    "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);

    // action
    res = raw.Post("/entity/vm1/action/stop", "", "application/json");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(Json::parse(raw.Get("/entity/vm1")->body)["state"] == "inactive");

    // invalid transition -> 409
    res = raw.Post("/entity/vm1/action/stop", "", "application/json");
    REQUIRE(res);
    CHECK(res->status == 409);

    // unknown entity -> 404
    CHECK(raw.Get("/entity/ghost")->status == 404);
    CHECK(raw.Delete("/entity/ghost")->status == 404);

    // duplicate create -> 409
    CHECK(raw.Put("/entity/vm1", payload.dump(), "application/json")->status == 409);

    // delete
    CHECK(raw.Delete("/entity/vm1")->status == 200);
    CHECK(raw.Get("/entity/vm1")->status == 404);
}

TEST_CASE("GET /configuration equals the in-process snapshot") {
    const auto& pl = testsupport::pipeline();
    ServerFixture fx(pl.set);
    HttpRuntimeClient client(fx.url());

    client.create_entity("vm", {{"kind", kinds::compute}});
    client.create_entity("comp", {{"kind", kinds::component}});
    client.create_entity("p1", {{"kind", kinds::placementlink},
                                {"source", "comp"},
                                {"target", "vm"}});

    auto over_http = client.get_configuration();
    auto in_process = fx.runtime.snapshot();
    CHECK(occi::to_json(over_http) == occi::to_json(in_process));
}

TEST_CASE("full reconcile works over the HTTP client") {
    const auto& pl = testsupport::pipeline();
    ServerFixture fx(pl.set);
    HttpRuntimeClient client(fx.url());

    auto desired = pl.psm_config("nodecellar");
    auto report = orch::reconcile(desired, client, pl.set, {.interval_ms = 2, .timeout_ms = 3000});
    CHECK(report.success);
    CHECK(report.conformance);

    auto second = orch::reconcile(desired, client, pl.set, {.interval_ms = 2, .timeout_ms = 3000});
    CHECK(second.steps.empty());
}

TEST_CASE("fault injection over the harness endpoint") {
    const auto& pl = testsupport::pipeline();
    ServerFixture fx(pl.set);
    HttpRuntimeClient client(fx.url());

    client.inject_fault({{"kind", "hold-state"}, {"entity", "vm"}});
    client.create_entity("vm", {{"kind", kinds::compute}});
    CHECK(client.entity_state("vm") == "inactive");
}

TEST_CASE("unreachable runtime raises RuntimeUnreachableError") {
    HttpRuntimeClient client("http://127.0.0.1:1"); // nothing listens there
    CHECK_THROWS_AS(client.get_configuration(), RuntimeUnreachableError);
}
