#include <doctest.h>

#include "diff_oracle.hpp"
#include "pipeline_support.hpp"
#include "tosca2occi/orch/diff.hpp"

using namespace tosca2occi;
using namespace tosca2occi::orch;
namespace occi = tosca2occi::occi;

namespace {

testsupport::OracleClassification classify(const DiffResult& diff) {
    testsupport::OracleClassification out;
    for (const auto& e : diff.to_create)
        out.create.insert(testsupport::oracle_key(e.id, e.kind));
    for (const auto& e : diff.to_delete)
        out.del.insert(testsupport::oracle_key(e.id, e.kind));
    for (const auto& [e, changed] : diff.to_update)
        out.update.insert(testsupport::oracle_key(e.id, e.kind));
    for (const auto& e : diff.unchanged)
        out.unchanged.insert(testsupport::oracle_key(e.id, e.kind));
    return out;
}

} // namespace

TEST_CASE("compare of identical configurations is all unchanged") {
    const auto& pl = testsupport::pipeline();
    auto cfg = pl.config("wordpress");
    auto diff = compare(cfg, cfg);
    CHECK(diff.to_create.empty());
    CHECK(diff.to_update.empty());
    CHECK(diff.to_delete.empty());
    CHECK(diff.unchanged.size() == cfg.resources.size() + cfg.links.size());
}

TEST_CASE("an attribute drift yields exactly the differing names") {
    occi::Configuration desired, current;
    occi::Resource d;
    d.id = "vm";
    d.kind = "http://x#compute";
    d.attribute_values["memory"] = 4096;
    d.attribute_values["cores"] = 2;
    desired.resources.push_back(d);

    occi::Resource c = d;
    c.attribute_values["memory"] = 2048;
    c.attribute_values["state"] = "active"; // runtime-owned, ignored
    current.resources.push_back(c);

    auto diff = compare(desired, current);
    REQUIRE(diff.to_update.size() == 1);
    CHECK(diff.to_update[0].first.id == "vm");
    REQUIRE(diff.to_update[0].second.size() == 1);
    CHECK(diff.to_update[0].second.at("memory") == occi::Json(4096));
    CHECK(diff.to_create.empty());
    CHECK(diff.to_delete.empty());
}

TEST_CASE("a kind change under the same id is delete plus create") {
    occi::Configuration desired, current;
    occi::Resource d;
    d.id = "x";
    d.kind = "http://x#k1";
    desired.resources.push_back(d);
    occi::Resource c;
    c.id = "x";
    c.kind = "http://x#k2";
    current.resources.push_back(c);

    auto diff = compare(desired, current);
    REQUIRE(diff.to_create.size() == 1);
    REQUIRE(diff.to_delete.size() == 1);
    CHECK(diff.to_create[0].kind == "http://x#k1");
    CHECK(diff.to_delete[0].kind == "http://x#k2");
}

TEST_CASE("lifecycle state and provider id never count as drift") {
    occi::Configuration desired, current;
    occi::Resource d;
    d.id = "vm";
    d.kind = "http://x#compute";
    desired.resources.push_back(d);
    occi::Resource c = d;
    c.attribute_values["state"] = "active";
    c.attribute_values["providerid"] = "prov-17";
    current.resources.push_back(c);

    auto diff = compare(desired, current);
    CHECK(diff.unchanged.size() == 1);
    CHECK(diff.to_update.empty());
}

TEST_CASE("compare matches the set-algebra oracle over random pairs") {
    std::mt19937 rng(20240811);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        auto desired = testsupport::random_small_config(rng);
        auto current = testsupport::random_small_config(rng);
        auto expect = testsupport::diff_oracle(desired, current);
        auto got = classify(compare(desired, current));
        CHECK(got.create == expect.create);
        CHECK(got.del == expect.del);
        CHECK(got.update == expect.update);
        CHECK(got.unchanged == expect.unchanged);
        ++checked;
    }
    CHECK(checked == 2000);
}

TEST_CASE("partition property: every (id, kind) counted exactly once") {
    std::mt19937 rng(99);
    for (int i = 0; i < 500; ++i) {
        auto desired = testsupport::random_small_config(rng);
        auto current = testsupport::random_small_config(rng);
        auto diff = compare(desired, current);

        std::set<std::string> keys;
        std::size_t total = 0;
        auto add = [&](const std::string& id, const std::string& kind) {
            keys.insert(testsupport::oracle_key(id, kind));
            ++total;
        };
        for (const auto& e : diff.to_create)
            add(e.id, e.kind);
        for (const auto& e : diff.to_delete)
            add(e.id, e.kind);
        for (const auto& [e, c] : diff.to_update)
            add(e.id, e.kind);
        for (const auto& e : diff.unchanged)
            add(e.id, e.kind);
        CHECK(keys.size() == total); // no double counting

        std::set<std::string> universe;
        for (const auto& r : desired.resources)
            universe.insert(testsupport::oracle_key(r.id, r.kind));
        for (const auto& r : current.resources)
            universe.insert(testsupport::oracle_key(r.id, r.kind));
        CHECK(keys == universe);
    }
}
