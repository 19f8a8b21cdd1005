#include <doctest.h>

#include "test_support.hpp"
#include "tosca2occi/tosca/parser.hpp"

using namespace tosca2occi;
using namespace tosca2occi::tosca;

TEST_CASE("node type with derived_from parses") {
    auto parsed = parse_types(R"(
node_types:
  tosca.nodes.WebServer:
    derived_from: tosca.nodes.SoftwareComponent
)");
    REQUIRE(parsed.types.size() == 1);
    CHECK(parsed.types[0].name == "tosca.nodes.WebServer");
    CHECK(parsed.types[0].type_class == TypeClass::Node);
    CHECK(parsed.types[0].derived_from == "tosca.nodes.SoftwareComponent");
}

TEST_CASE("empty document yields an empty list") {
    CHECK(parse_types("").types.empty());
    CHECK(parse_types("# just a comment\n").types.empty());
}

TEST_CASE("duplicate type names are rejected") {
    CHECK_THROWS_AS(parse_types(R"(
node_types:
  tosca.nodes.A: {derived_from: tosca.nodes.Root}
relationship_types:
  tosca.nodes.A: {derived_from: tosca.relationships.Root}
)"),
                    DuplicateTypeError);
}

TEST_CASE("unknown sections and fields are schema errors") {
    CHECK_THROWS_AS(parse_types("banana_types: {}\n"), SchemaError);
    CHECK_THROWS_AS(parse_types(R"(
node_types:
  tosca.nodes.A:
    derived_from: tosca.nodes.Root
    frobnicate: yes
)"),
                    SchemaError);
    CHECK_THROWS_AS(parse_types("node_types: [a, b]\n"), SchemaError);
}

TEST_CASE("malformed YAML is a yaml error") {
    CHECK_THROWS_AS(parse_types("a: [unclosed\n"), YamlError);
}

TEST_CASE("constraints and scalar units parse into normalized operands") {
    auto parsed = parse_types(R"(
node_types:
  tosca.nodes.Disky:
    derived_from: tosca.nodes.Root
    properties:
      size:
        type: scalar-unit.size
        default: 10 GB
        constraints:
          - greater_or_equal: 1 MB
      kind:
        type: string
        constraints:
          - valid_values: [ssd, hdd]
)");
    const auto& props = parsed.types.at(0).properties;
    REQUIRE(props.size() == 2);
    CHECK(props[0].default_value == Json(10240)); // 10 GB in MB
    REQUIRE(props[0].constraints.size() == 1);
    CHECK(props[0].constraints[0].kind == Constraint::Kind::GreaterOrEqual);
    CHECK(props[0].constraints[0].operand == Json(1));
    CHECK(props[1].constraints[0].kind == Constraint::Kind::ValidValues);
    CHECK(props[1].constraints[0].operand == Json::array({"ssd", "hdd"}));
}

TEST_CASE("wordpress topology fixture parses with the expected templates") {
    auto topo =
        parse_topology(testsupport::slurp(testsupport::fixture("topologies/wordpress.yaml")));
    CHECK(topo.name == "wp");
    std::set<std::string> names;
    for (const auto& t : topo.node_templates)
        names.insert(t.name);
    CHECK(names == std::set<std::string>{"wordpress", "apache", "mysql", "php", "computeWww",
                                         "computeDb"});
    const auto* wp = topo.find_template("wordpress");
    REQUIRE(wp != nullptr);
    REQUIRE(wp->requirements.size() == 4);
    CHECK(wp->requirements[0].name == "php");
    CHECK(wp->requirements[1].target == "apache");
    const auto* www = topo.find_template("computeWww");
    REQUIRE(www != nullptr);
    CHECK(www->capability_properties.at("host").at("mem_size") == Json(4096));
    CHECK(www->capability_properties.at("host").at("cpu_frequency") == Json(2400));
    CHECK(www->capability_properties.at("os").at("type") == Json("linux"));
}

TEST_CASE("nodecellar topology resolves get_input against defaults and overrides") {
    auto text = testsupport::slurp(testsupport::fixture("topologies/nodecellar.yaml"));
    auto topo = parse_topology(text);
    std::set<std::string> names;
    for (const auto& t : topo.node_templates)
        names.insert(t.name);
    CHECK(names == std::set<std::string>{"nodecellar", "nodejs", "mongodb", "NodejsHost",
                                         "MongoHost"});
    CHECK(topo.find_template("nodecellar")->properties.at("port") == Json(8080));
    CHECK(topo.find_template("mongodb")->properties.at("port") == Json(27017));

    auto overridden = parse_topology(text, {{"port", "9090"}});
    CHECK(overridden.find_template("nodecellar")->properties.at("port") == Json(9090));
}

TEST_CASE("input without default and without override is an error") {
    const char* doc = R"(
topology_template:
  inputs:
    port: {type: integer}
  node_templates:
    a:
      type: tosca.nodes.Root
      properties:
        port: {get_input: port}
)";
    CHECK_THROWS_AS(parse_topology(doc), MissingInputError);
    CHECK(parse_topology(doc, {{"port", "1234"}}).find_template("a")->properties.at("port") ==
          Json(1234));
}

TEST_CASE("requirement targeting a nonexistent template is dangling") {
    CHECK_THROWS_AS(parse_topology(R"(
topology_template:
  node_templates:
    a:
      type: tosca.nodes.Root
      requirements:
        - host: ghost
)"),
                    DanglingReferenceError);
}

TEST_CASE("duplicate template names are rejected") {
    CHECK_THROWS_AS(parse_topology(R"(
topology_template:
  node_templates:
    db: {type: tosca.nodes.Root}
    db: {type: tosca.nodes.Root}
)"),
                    DuplicateTemplateError);
}

TEST_CASE("groups parse raw and flag a warning") {
    auto topo = parse_topology(R"(
topology_template:
  node_templates:
    a: {type: tosca.nodes.Root}
  groups:
    scaling:
      type: tosca.groups.Root
      members: [a]
)");
    REQUIRE(topo.groups.size() == 1);
    CHECK(topo.groups[0].first == "scaling");
    CHECK(topo.groups[0].second["members"] == Json::array({"a"}));
    bool flagged = false;
    for (const auto& w : topo.warnings)
        flagged = flagged || w.find("groups") != std::string::npos;
    CHECK(flagged);
}

TEST_CASE("parsing is total over the fixture corpus") {
    namespace fs = std::filesystem;
    CHECK_NOTHROW(
        parse_types(testsupport::slurp(testsupport::fixture("types/normative-types.yaml"))));
    for (const auto& entry : fs::directory_iterator(testsupport::fixture("types/custom")))
        if (entry.path().extension() == ".yaml") {
            CAPTURE(entry.path().string());
            CHECK_NOTHROW(parse_types(testsupport::slurp(entry.path())));
        }
    for (const auto& entry : fs::directory_iterator(testsupport::fixture("topologies")))
        if (entry.path().extension() == ".yaml") {
            CAPTURE(entry.path().string());
            CHECK_NOTHROW(parse_topology(testsupport::slurp(entry.path())));
        }
}

TEST_CASE("parse, re-emit, re-parse is structurally stable") {
    namespace fs = std::filesystem;
    auto check_types = [](const std::string& text) {
        auto first = parse_types(text);
        auto second = parse_types(emit_types(first.types));
        CHECK(first.types == second.types);
    };
    check_types(testsupport::slurp(testsupport::fixture("types/normative-types.yaml")));
    for (const auto& entry : fs::directory_iterator(testsupport::fixture("types/custom")))
        if (entry.path().extension() == ".yaml")
            check_types(testsupport::slurp(entry.path()));

    for (const auto& entry : fs::directory_iterator(testsupport::fixture("topologies"))) {
        if (entry.path().extension() != ".yaml")
            continue;
        CAPTURE(entry.path().string());
        auto first = parse_topology(testsupport::slurp(entry.path()));
        auto second = parse_topology(emit_topology(first));
        CHECK(structurally_equal(first, second));
    }
}

TEST_CASE("relationship templates parse with explicit endpoints") {
    auto topo = parse_topology(R"(
topology_template:
  node_templates:
    web: {type: tosca.nodes.WebApplication}
    db: {type: tosca.nodes.Database}
  relationship_templates:
    wire:
      type: tosca.relationships.ConnectsTo
      source: web
      target: db
      properties:
        credential: {token_type: password, token: s3cret}
)");
    REQUIRE(topo.relationship_templates.size() == 1);
    CHECK(topo.relationship_templates[0].source == "web");
    CHECK(topo.relationship_templates[0].target == "db");
}
