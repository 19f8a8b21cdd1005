#include <doctest.h>

#include "test_support.hpp"
#include "tosca2occi/occi/validate.hpp"

using namespace tosca2occi;
using namespace tosca2occi::occi;

TEST_CASE("infrastructure extension loads with the expected kinds") {
    ExtensionSet set;
    load_extension(testsupport::fixture("extensions/core.json"), set);
    const auto& infra = load_extension(testsupport::fixture("extensions/infrastructure.json"), set);

    std::set<std::string> terms;
    for (const auto& k : infra.kinds)
        terms.insert(k.category.term);
    CHECK(terms == std::set<std::string>{"compute", "network", "storage", "storagelink",
                                         "networkinterface"});
    CHECK(set.find_kind("http://schemas.ogf.org/occi/infrastructure#compute") != nullptr);
    CHECK(set.kind_is_a("http://schemas.ogf.org/occi/infrastructure#compute",
                        "http://schemas.ogf.org/occi/core#resource"));
}

TEST_CASE("empty extension is valid") {
    ExtensionSet set;
    Extension empty;
    empty.name = "empty";
    empty.scheme = "http://example.org/empty#";
    const auto& added = set.add(std::move(empty));
    CHECK(added.kinds.empty());
    CHECK(added.mixins.empty());
}

TEST_CASE("mixin depends cycle is rejected") {
    ExtensionSet set;
    Extension ext;
    ext.name = "cyclic";
    ext.scheme = "http://example.org/cyclic#";
    Mixin a, b;
    a.category = {"a", ext.scheme, "", {}};
    b.category = {"b", ext.scheme, "", {}};
    a.depends = {"http://example.org/cyclic#b"};
    b.depends = {"http://example.org/cyclic#a"};
    ext.mixins = {a, b};
    CHECK_THROWS_AS(set.add(std::move(ext)), CycleError);
}

TEST_CASE("unresolved references are link errors") {
    ExtensionSet set;
    load_extension(testsupport::fixture("extensions/core.json"), set);

    Extension ext;
    ext.name = "dangling";
    ext.scheme = "http://example.org/dangling#";
    ext.imports = {"core"};
    Mixin m;
    m.category = {"m", ext.scheme, "", {}};
    m.applies = {"http://example.org/nowhere#kind"};
    ext.mixins = {m};
    CHECK_THROWS_AS(set.add(std::move(ext)), LinkError);

    Extension ext2;
    ext2.name = "badimport";
    ext2.scheme = "http://example.org/badimport#";
    ext2.imports = {"not-loaded"};
    CHECK_THROWS_AS(set.add(std::move(ext2)), LinkError);
}

TEST_CASE("serialize(load(x)) round-trips every extension fixture") {
    namespace fs = std::filesystem;
    for (const auto& entry : fs::directory_iterator(testsupport::fixture("extensions"))) {
        if (entry.path().extension() != ".json")
            continue;
        CAPTURE(entry.path().string());
        Json original = parse_json_file(entry.path());
        Extension ext = extension_from_json(original);
        Json serialized = to_json(ext);
        Extension reloaded = extension_from_json(serialized);
        CHECK(to_json(reloaded) == serialized);
    }
}

TEST_CASE("depends closure over the linked set is finite and acyclic") {
    auto set = testsupport::base_extensions();
    for (const auto& ext : set.extensions()) {
        for (const auto& m : ext.mixins) {
            auto closure = set.mixin_closure(m.category.ref());
            std::set<std::string> uniq(closure.begin(), closure.end());
            CHECK(uniq.size() == closure.size());
        }
    }
}

TEST_CASE("duplicate (scheme, term) across the set is rejected") {
    ExtensionSet set;
    load_extension(testsupport::fixture("extensions/core.json"), set);
    Extension dup;
    dup.name = "dup";
    dup.scheme = "http://schemas.ogf.org/occi/core#";
    Kind k;
    k.category = {"resource", dup.scheme, "", {}};
    dup.kinds = {k};
    CHECK_THROWS_AS(set.add(std::move(dup)), LinkError);
}

TEST_CASE("invalid term is a parse error") {
    ExtensionSet set;
    Extension ext;
    ext.name = "badterm";
    ext.scheme = "http://example.org/badterm#";
    Kind k;
    k.category = {"9lives", ext.scheme, "", {}};
    ext.kinds = {k};
    CHECK_THROWS_AS(set.add(std::move(ext)), ParseError);
}
