#include <doctest.h>

#include "test_support.hpp"
#include "tosca2occi/occi/model.hpp"

using namespace tosca2occi::occi;

namespace {
const DataType* no_resolve(const DataTypeRef&) { return nullptr; }
} // namespace

TEST_CASE("numeric bounds") {
    NumericType min_one;
    min_one.kind = NumericKind::Integer;
    min_one.min_inclusive = 1;

    CHECK_FALSE(check_datatype(Json(0), min_one, no_resolve));
    CHECK(check_datatype(Json(1), min_one, no_resolve));
    CHECK(check_datatype(Json(4096), min_one, no_resolve));
    CHECK_FALSE(check_datatype(Json("1"), min_one, no_resolve));
    CHECK_FALSE(check_datatype(Json(1.5), min_one, no_resolve)); // integer kind rejects fractions

    NumericType shorty;
    shorty.kind = NumericKind::Short;
    CHECK(check_datatype(Json(8080), shorty, no_resolve));
    CHECK_FALSE(check_datatype(Json(70000), shorty, no_resolve));

    NumericType ranged;
    ranged.kind = NumericKind::Float;
    ranged.min_inclusive = 0.0;
    ranged.max_inclusive = 1.0;
    CHECK(check_datatype(Json(0.5), ranged, no_resolve));
    CHECK(check_datatype(Json(1.0), ranged, no_resolve));
    CHECK_FALSE(check_datatype(Json(1.01), ranged, no_resolve));
}

TEST_CASE("enumeration membership") {
    EnumerationType os{{"linux", "windows"}};
    CHECK(check_datatype(Json("linux"), os, no_resolve));
    CHECK_FALSE(check_datatype(Json("macos"), os, no_resolve));
    CHECK_FALSE(check_datatype(Json(1), os, no_resolve));
}

TEST_CASE("string pattern and min length") {
    StringType cidr;
    cidr.pattern = R"(\d+\.\d+\.\d+\.\d+/\d+)";
    CHECK(check_datatype(Json("10.0.0.0/24"), cidr, no_resolve));
    CHECK_FALSE(check_datatype(Json("not a cidr"), cidr, no_resolve));

    StringType pw;
    pw.min_length = 8;
    CHECK(check_datatype(Json("longenough"), pw, no_resolve));
    CHECK_FALSE(check_datatype(Json("short"), pw, no_resolve));
}

TEST_CASE("record recursion") {
    // NetworkInfo: networkid + networkname, both strings
    RecordType network_info{{{"networkid", "string"}, {"networkname", "string"}}};
    StringType str;
    auto resolve = [&](const DataTypeRef& name) -> const DataType* {
        static const DataType s = StringType{};
        return name == "string" ? &s : nullptr;
    };
    CHECK(check_datatype(Json{{"networkid", "n1"}, {"networkname", "mgmt"}}, network_info,
                         resolve));
    CHECK_FALSE(check_datatype(Json{{"networkid", "n1"}}, network_info, resolve));
    CHECK_FALSE(check_datatype(Json{{"networkid", 5}, {"networkname", "mgmt"}}, network_info,
                               resolve));
    CHECK_FALSE(
        check_datatype(Json{{"networkid", "n1"}, {"networkname", "m"}, {"extra", "x"}},
                       network_info, resolve));
}

TEST_CASE("array element conformance") {
    ArrayType arr{"integer"};
    auto resolve = [&](const DataTypeRef& name) -> const DataType* {
        static const DataType i = NumericType{NumericKind::Integer, {}, {}};
        return name == "integer" ? &i : nullptr;
    };
    CHECK(check_datatype(Json::array({1, 2, 3}), arr, resolve));
    CHECK_FALSE(check_datatype(Json::array({1, "x"}), arr, resolve));
    CHECK_FALSE(check_datatype(Json(3), arr, resolve));
}

TEST_CASE("defaults in every loaded extension validate against their datatype") {
    auto set = testsupport::base_extensions();
    for (const auto& ext : set.extensions()) {
        auto check_attr_defaults = [&](const std::vector<AttributeDef>& attrs) {
            for (const auto& a : attrs) {
                if (!a.default_value)
                    continue;
                const DataType* dt = set.find_datatype(a.datatype);
                REQUIRE(dt != nullptr);
                CHECK(check_datatype(*a.default_value, *dt, set.datatype_resolver()));
            }
        };
        for (const auto& k : ext.kinds)
            check_attr_defaults(k.category.attributes);
        for (const auto& m : ext.mixins)
            check_attr_defaults(m.category.attributes);
    }
}
