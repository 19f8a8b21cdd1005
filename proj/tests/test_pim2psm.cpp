#include <doctest.h>

#include "pipeline_support.hpp"
#include "tosca2occi/occi/json_io.hpp"
#include "tosca2occi/occi/validate.hpp"

using namespace tosca2occi;
namespace occi = tosca2occi::occi;
using tosca2occi::psm::transform;

namespace {
psm::PsmProfile fixture_profile() {
    return psm::load_profile(testsupport::fixture("profiles/default.json"));
}
} // namespace

TEST_CASE("wordpress PIM becomes a PSM with one network and two interfaces") {
    const auto& pl = testsupport::pipeline();
    auto pim = pl.config("wordpress");
    REQUIRE(pim.resources.size() == 7);
    REQUIRE(pim.links.size() == 11);

    auto out = transform(pim, fixture_profile(), pl.set);
    CHECK(out.resources.size() == 8);
    CHECK(out.links.size() == 13);

    int mgmt = 0, nic = 0;
    for (const auto& r : out.resources)
        for (const auto& mb : r.mixin_bases)
            if (mb.mixin == psm::refs::management_network) {
                ++mgmt;
                CHECK(mb.attribute_values.at("address") == occi::Json("10.42.0.0/24"));
            }
    for (const auto& l : out.links)
        if (l.kind == mapping::kinds::networkinterface)
            ++nic;
    CHECK(mgmt == 1);
    CHECK(nic == 2);
}

TEST_CASE("a configuration without computes only gains the management network") {
    const auto& pl = testsupport::pipeline();
    occi::Configuration cfg;
    cfg.use = {"core", "infrastructure", "modmacao", "sla", "tosca"};
    auto out = transform(cfg, fixture_profile(), pl.set);
    CHECK(out.resources.size() == 1);
    CHECK(out.links.empty());
    CHECK(out.resources[0].kind == mapping::kinds::network);
}

TEST_CASE("node cellar hosts are both linked to the management network") {
    const auto& pl = testsupport::pipeline();
    auto out = transform(pl.config("nodecellar"), fixture_profile(), pl.set);
    std::string mgmt_id;
    for (const auto& r : out.resources)
        for (const auto& mb : r.mixin_bases)
            if (mb.mixin == psm::refs::management_network)
                mgmt_id = r.id;
    REQUIRE(!mgmt_id.empty());
    std::set<std::string> wired;
    for (const auto& l : out.links)
        if (l.kind == mapping::kinds::networkinterface && l.target == mgmt_id)
            wired.insert(l.source);
    CHECK(wired == std::set<std::string>{"urn:tosca:nodecellar:NodejsHost",
                                         "urn:tosca:nodecellar:MongoHost"});
}

TEST_CASE("transform is idempotent") {
    const auto& pl = testsupport::pipeline();
    auto profile = fixture_profile();
    auto once = transform(pl.config("wordpress"), profile, pl.set);
    auto twice = transform(once, profile, pl.set);
    CHECK(occi::dump(occi::to_json(once)) == occi::dump(occi::to_json(twice)));
}

TEST_CASE("transform never removes or mutates pre-existing values") {
    const auto& pl = testsupport::pipeline();
    auto pim = pl.config("wordpress");
    auto out = transform(pim, fixture_profile(), pl.set);
    for (const auto& r : pim.resources) {
        const auto* after = out.find_resource(r.id);
        REQUIRE(after != nullptr);
        CHECK(after->kind == r.kind);
        // every original mixin base survives with identical values
        for (const auto& mb : r.mixin_bases) {
            bool found = false;
            for (const auto& mb2 : after->mixin_bases)
                if (mb2.mixin == mb.mixin && mb2.attribute_values == mb.attribute_values)
                    found = true;
            CHECK(found);
        }
    }
    for (const auto& l : pim.links)
        CHECK(out.find_link(l.id) != nullptr);
}

TEST_CASE("computes receive provider defaults without overwriting modeled values") {
    const auto& pl = testsupport::pipeline();
    auto pim = pl.config("wordpress");
    // model an explicit image on one compute
    for (auto& r : pim.resources)
        if (r.id == "urn:tosca:wp:computeWww")
            r.mixin_bases.push_back({psm::refs::provider_template, {{"image", "custom-img"}}});

    auto out = transform(pim, fixture_profile(), pl.set);
    const auto* www = out.find_resource("urn:tosca:wp:computeWww");
    const auto* db = out.find_resource("urn:tosca:wp:computeDb");
    REQUIRE(www);
    REQUIRE(db);
    auto tmpl_values = [](const occi::Resource& r) {
        for (const auto& mb : r.mixin_bases)
            if (mb.mixin == psm::refs::provider_template)
                return mb.attribute_values;
        return std::map<std::string, occi::Json>{};
    };
    CHECK(tmpl_values(*www).at("image") == occi::Json("custom-img")); // preserved
    CHECK(tmpl_values(*www).at("flavor") == occi::Json("m1.small"));  // filled
    CHECK(tmpl_values(*db).at("image") == occi::Json("ubuntu-20.04"));
    CHECK(tmpl_values(*db).at("ssh_key_name") == occi::Json("orchestrator"));
}

TEST_CASE("PSM output still validates against the extension set") {
    const auto& pl = testsupport::pipeline();
    for (const char* name : {"wordpress", "nodecellar", "multitier"}) {
        CAPTURE(name);
        auto out = transform(pl.config(name), fixture_profile(), pl.set);
        auto report = occi::validate_configuration(out, pl.set);
        for (const auto& v : report.violations) {
            CAPTURE(v.entity_id);
            CAPTURE(v.message);
            CHECK(false);
        }
        CHECK(report.ok());
    }
}

TEST_CASE("a malformed CIDR is rejected at profile load") {
    occi::Json j = {{"provider_name", "x"},      {"default_image", "i"},
                    {"default_flavor", "f"},     {"ssh_key_name", "k"},
                    {"management_cidr", "oops"}};
    CHECK_THROWS_AS(psm::profile_from_json(j), ParseError);
}
