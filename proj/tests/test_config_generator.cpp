#include <doctest.h>

#include "pipeline_support.hpp"
#include "tosca2occi/occi/json_io.hpp"
#include "tosca2occi/occi/validate.hpp"

using namespace tosca2occi;
using namespace tosca2occi::mapping;
namespace occi = tosca2occi::occi;

namespace {

int count_links(const occi::Configuration& cfg, const occi::KindRef& kind,
                const std::string& mixin = "") {
    int n = 0;
    for (const auto& l : cfg.links) {
        if (l.kind != kind)
            continue;
        if (!mixin.empty()) {
            bool has = false;
            for (const auto& mb : l.mixin_bases)
                has = has || mb.mixin == mixin;
            if (!has)
                continue;
        } else if (!l.mixin_bases.empty()) {
            continue; // bare links only when no mixin requested
        }
        ++n;
    }
    return n;
}

const occi::Link* link_by_title(const occi::Configuration& cfg, const std::string& title) {
    for (const auto& l : cfg.links)
        if (l.title == title)
            return &l;
    return nullptr;
}

} // namespace

TEST_CASE("wordpress reproduces the seven-resource, eleven-link structure") {
    const auto& pl = testsupport::pipeline();
    auto cfg = pl.config("wordpress");

    REQUIRE(cfg.resources.size() == 7);
    int apps = 0, components = 0, computes = 0;
    for (const auto& r : cfg.resources) {
        if (r.kind == kinds::application)
            ++apps;
        if (r.kind == kinds::component)
            ++components;
        if (r.kind == kinds::compute)
            ++computes;
    }
    CHECK(apps == 1);
    CHECK(components == 4);
    CHECK(computes == 2);

    REQUIRE(cfg.links.size() == 11);
    CHECK(count_links(cfg, kinds::componentlink) == 4); // c1..c4, bare
    CHECK(count_links(cfg, kinds::componentlink,
                      tosca_mixin_ref("tosca.relationships.ConnectsTo")) == 2); // c5, c7
    CHECK(count_links(cfg, kinds::componentlink,
                      tosca_mixin_ref("tosca.relationships.HostedOn")) == 1); // c6
    CHECK(count_links(cfg, kinds::placementlink) == 4);                       // p1..p4

    // c5 wordpress->php, c6 wordpress->apache, c7 wordpress->mysql
    const auto* c5 = link_by_title(cfg, "c5");
    const auto* c6 = link_by_title(cfg, "c6");
    const auto* c7 = link_by_title(cfg, "c7");
    REQUIRE(c5);
    REQUIRE(c6);
    REQUIRE(c7);
    CHECK(c5->source == "urn:tosca:wp:wordpress");
    CHECK(c5->target == "urn:tosca:wp:php");
    CHECK(c6->target == "urn:tosca:wp:apache");
    CHECK(c6->mixin_bases[0].mixin == tosca_mixin_ref("tosca.relationships.HostedOn"));
    CHECK(c7->target == "urn:tosca:wp:mysql");

    // mysql placed on computeDb
    bool mysql_on_db = false;
    for (const auto& l : cfg.links)
        if (l.kind == kinds::placementlink && l.source == "urn:tosca:wp:mysql" &&
            l.target == "urn:tosca:wp:computeDb")
            mysql_on_db = true;
    CHECK(mysql_on_db);
}

TEST_CASE("wordpress compute carries its YAML values verbatim on the mixin base") {
    const auto& pl = testsupport::pipeline();
    auto cfg = pl.config("wordpress");
    const auto* www = cfg.find_resource("urn:tosca:wp:computeWww");
    REQUIRE(www != nullptr);
    REQUIRE(www->mixin_bases.size() == 1);
    const auto& values = www->mixin_bases[0].attribute_values;
    CHECK(values.at("host.num_cpus") == occi::Json(2));
    CHECK(values.at("host.cpu_frequency") == occi::Json(2400));
    CHECK(values.at("host.mem_size") == occi::Json(4096));
    CHECK(values.at("host.disk_size") == occi::Json(10240));
    CHECK(values.at("os.architecture") == occi::Json("x86_64"));
    CHECK(values.at("os.type") == occi::Json("linux"));
    CHECK(values.at("os.distribution") == occi::Json("ubuntu"));
    CHECK(values.at("endpoint.protocol") == occi::Json("tcp"));
}

TEST_CASE("node cellar reproduces the six-resource, eight-link structure") {
    const auto& pl = testsupport::pipeline();
    auto cfg = pl.config("nodecellar");

    REQUIRE(cfg.resources.size() == 6);
    REQUIRE(cfg.links.size() == 8);
    CHECK(count_links(cfg, kinds::componentlink) == 3);
    CHECK(count_links(cfg, kinds::componentlink,
                      tosca_mixin_ref("tosca.relationships.ConnectsTo")) == 1); // c4
    CHECK(count_links(cfg, kinds::componentlink,
                      tosca_mixin_ref("tosca.relationships.HostedOn")) == 1); // c5
    CHECK(count_links(cfg, kinds::placementlink) == 3);

    const auto* c4 = link_by_title(cfg, "c4");
    REQUIRE(c4);
    CHECK(c4->source == "urn:tosca:nodecellar:nodecellar");
    CHECK(c4->target == "urn:tosca:nodecellar:mongodb");
    const auto* c5 = link_by_title(cfg, "c5");
    REQUIRE(c5);
    CHECK(c5->target == "urn:tosca:nodecellar:nodejs");

    // port attributes preserved from the inputs
    const auto* nc = cfg.find_resource("urn:tosca:nodecellar:nodecellar");
    REQUIRE(nc);
    CHECK(nc->mixin_bases[0].attribute_values.at("port") == occi::Json(8080));
    CHECK(nc->mixin_bases[0].attribute_values.at("db_port") == occi::Json(27017));
}

TEST_CASE("multi-tier reproduces sixteen resources with shared placements") {
    const auto& pl = testsupport::pipeline();
    auto cfg = pl.config("multitier");

    REQUIRE(cfg.resources.size() == 16);
    int apps = 0, components = 0, computes = 0;
    for (const auto& r : cfg.resources) {
        if (r.kind == kinds::application)
            ++apps;
        if (r.kind == kinds::component)
            ++components;
        if (r.kind == kinds::compute)
            ++computes;
    }
    CHECK(apps == 1);
    CHECK(components == 9);
    CHECK(computes == 6);

    REQUIRE(cfg.links.size() == 18); // c1..c9 + p1..p9
    CHECK(count_links(cfg, kinds::componentlink) == 9);
    CHECK(count_links(cfg, kinds::placementlink) == 9);

    auto placement_target = [&](const std::string& component) {
        for (const auto& l : cfg.links)
            if (l.kind == kinds::placementlink &&
                l.source == "urn:tosca:multitier:" + component)
                return l.target;
        return std::string();
    };
    CHECK(placement_target("app_collectd") == placement_target("app_rsyslog"));
    CHECK(placement_target("mongo_db") == placement_target("mongo_dbms"));
    CHECK(placement_target("app_collectd") == "urn:tosca:multitier:app_server");
    CHECK(placement_target("mongo_db") == "urn:tosca:multitier:mongo_server");
}

TEST_CASE("assign_ids follows the urn scheme and rejects duplicates") {
    const auto& pl = testsupport::pipeline();
    auto topo = pl.topology("wordpress");
    auto ids = assign_ids(topo);
    CHECK(ids.at("wordpress") == "urn:tosca:wp:wordpress");

    tosca::Topology dup;
    dup.name = "x";
    tosca::NodeTemplate a;
    a.name = "db";
    a.type_name = "tosca.nodes.Database";
    dup.node_templates = {a, a};
    CHECK_THROWS_AS(assign_ids(dup), DuplicateTemplateError);
}

TEST_CASE("the full wordpress id set has 18 entries and no collisions") {
    const auto& pl = testsupport::pipeline();
    auto cfg = pl.config("wordpress");
    std::set<std::string> ids;
    for (const auto& r : cfg.resources)
        ids.insert(r.id);
    for (const auto& l : cfg.links)
        ids.insert(l.id);
    CHECK(ids.size() == 18);
    CHECK(ids.size() == cfg.resources.size() + cfg.links.size());
}

TEST_CASE("every generated fixture configuration validates with an empty report") {
    const auto& pl = testsupport::pipeline();
    for (const char* name : {"wordpress", "nodecellar", "multitier"}) {
        CAPTURE(name);
        auto cfg = pl.config(name);
        auto report = occi::validate_configuration(cfg, pl.set);
        for (const auto& v : report.violations) {
            CAPTURE(v.entity_id);
            CAPTURE(v.name);
            CAPTURE(v.message);
            CHECK(false);
        }
        CHECK(report.ok());
    }
}

TEST_CASE("property values from the YAML survive into mixin bases exhaustively") {
    const auto& pl = testsupport::pipeline();
    for (const char* name : {"wordpress", "nodecellar", "multitier"}) {
        CAPTURE(name);
        auto topo = pl.topology(name);
        auto cfg = pl.config(name);
        for (const auto& nt : topo.node_templates) {
            const auto* r = cfg.find_resource("urn:tosca:" + topo.name + ":" + nt.name);
            REQUIRE(r != nullptr);
            REQUIRE(r->mixin_bases.size() == 1);
            for (const auto& [k, v] : nt.properties)
                CHECK(r->mixin_bases[0].attribute_values.at(k) == v);
            for (const auto& [cap, props] : nt.capability_properties)
                for (const auto& [k, v] : props)
                    CHECK(r->mixin_bases[0].attribute_values.at(cap + "." + k) == v);
        }
    }
}

TEST_CASE("link endpoints are sound in every generated configuration") {
    const auto& pl = testsupport::pipeline();
    for (const char* name : {"wordpress", "nodecellar", "multitier"}) {
        auto cfg = pl.config(name);
        for (const auto& l : cfg.links) {
            CHECK(cfg.find_resource(l.source) != nullptr);
            CHECK(cfg.find_resource(l.target) != nullptr);
        }
    }
}

TEST_CASE("generation is deterministic byte for byte") {
    const auto& pl = testsupport::pipeline();
    auto a = occi::dump(occi::to_json(pl.config("wordpress")));
    auto b = occi::dump(occi::to_json(pl.config("wordpress")));
    CHECK(a == b);
}

TEST_CASE("unknown template type is an unmapped-template error") {
    const auto& pl = testsupport::pipeline();
    tosca::Topology topo;
    topo.name = "x";
    tosca::NodeTemplate nt;
    nt.name = "mystery";
    nt.type_name = "tosca.nodes.DoesNotExist";
    topo.node_templates.push_back(nt);
    CHECK_THROWS_AS(generate_configuration(topo, pl.tosca_ext(), pl.set, pl.registry),
                    UnmappedTemplateError);
}

TEST_CASE("property value failing its datatype is an attribute validation error") {
    const auto& pl = testsupport::pipeline();
    tosca::Topology topo;
    topo.name = "x";
    tosca::NodeTemplate nt;
    nt.name = "web";
    nt.type_name = "tosca.nodes.Apache";
    nt.properties["port"] = occi::Json(0); // port folds greater_or_equal 1
    topo.node_templates.push_back(nt);
    CHECK_THROWS_AS(generate_configuration(topo, pl.tosca_ext(), pl.set, pl.registry),
                    AttributeValidationError);
}

TEST_CASE("relationship templates materialize as links of the anchored kind") {
    const auto& pl = testsupport::pipeline();
    tosca::Topology topo;
    topo.name = "x";
    tosca::NodeTemplate vol, vm;
    vol.name = "vol";
    vol.type_name = "tosca.nodes.BlockStorage";
    vm.name = "vm";
    vm.type_name = "tosca.nodes.Compute";
    topo.node_templates = {vol, vm};
    tosca::RelationshipTemplate att;
    att.name = "attachment";
    att.type_name = "tosca.relationships.AttachesTo";
    att.source = "vm";
    att.target = "vol";
    att.properties["location"] = "/dev/vdb";
    topo.relationship_templates.push_back(att);

    auto cfg = generate_configuration(topo, pl.tosca_ext(), pl.set, pl.registry);
    REQUIRE(cfg.links.size() == 1);
    CHECK(cfg.links[0].kind == kinds::storagelink); // AttachesTo anchors to storagelink
    CHECK(cfg.links[0].id == "urn:tosca:x:attachment");
    CHECK(cfg.links[0].mixin_bases[0].mixin == tosca_mixin_ref("tosca.relationships.AttachesTo"));
}
