#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tosca2occi/occi/model.hpp"

// JSON (de)serialization for extensions and configurations. The on-disk
// schema mirrors the model types field by field. Serialization is
// deterministic: nlohmann::json orders object keys, lists keep declaration
// order.

namespace tosca2occi::occi {

inline Json to_json(const DataType& dt);
inline DataType datatype_from_json(const Json& j);

inline Json to_json(const AttributeDef& a) {
    Json j;
    j["name"] = a.name;
    j["type"] = a.datatype;
    j["required"] = a.required;
    j["mutable"] = a.mutable_;
    if (a.default_value)
        j["default"] = *a.default_value;
    if (!a.description.empty())
        j["description"] = a.description;
    return j;
}

inline AttributeDef attribute_from_json(const Json& j) {
    AttributeDef a;
    a.name = j.at("name").get<std::string>();
    a.datatype = j.at("type").get<std::string>();
    a.required = j.value("required", false);
    a.mutable_ = j.value("mutable", true);
    if (j.contains("default"))
        a.default_value = j.at("default");
    a.description = j.value("description", "");
    return a;
}

inline Json to_json(const Category& c) {
    Json j;
    j["term"] = c.term;
    j["scheme"] = c.scheme;
    if (!c.title.empty())
        j["title"] = c.title;
    j["attributes"] = Json::array();
    for (const auto& a : c.attributes)
        j["attributes"].push_back(to_json(a));
    return j;
}

inline Category category_from_json(const Json& j) {
    Category c;
    c.term = j.at("term").get<std::string>();
    c.scheme = j.at("scheme").get<std::string>();
    c.title = j.value("title", "");
    for (const auto& a : j.value("attributes", Json::array()))
        c.attributes.push_back(attribute_from_json(a));
    return c;
}

inline Json to_json(const ActionDef& a) {
    Json j = to_json(a.category);
    j["parameters"] = Json::array();
    for (const auto& p : a.parameters)
        j["parameters"].push_back(to_json(p));
    return j;
}

inline ActionDef action_from_json(const Json& j) {
    ActionDef a;
    a.category = category_from_json(j);
    for (const auto& p : j.value("parameters", Json::array()))
        a.parameters.push_back(attribute_from_json(p));
    return a;
}

inline Json to_json(const ConstraintExpr& e) {
    Json j;
    switch (e.op) {
    case ConstraintExpr::Op::ExistsLink:
        j["op"] = "exists_link";
        j["direction"] = e.direction == LinkDirection::In ? "in" : "out";
        j["link"] = e.link_category;
        j["peer"] = e.peer_mixin;
        break;
    case ConstraintExpr::Op::AttrMatches:
        j["op"] = "attr_matches";
        j["attr"] = e.attr_name;
        j["pattern"] = e.pattern;
        break;
    case ConstraintExpr::Op::And:
    case ConstraintExpr::Op::Or:
    case ConstraintExpr::Op::Not:
        j["op"] = e.op == ConstraintExpr::Op::And  ? "and"
                  : e.op == ConstraintExpr::Op::Or ? "or"
                                                   : "not";
        j["operands"] = Json::array();
        for (const auto& o : e.operands)
            j["operands"].push_back(to_json(o));
        break;
    }
    return j;
}

inline ConstraintExpr constraint_expr_from_json(const Json& j) {
    ConstraintExpr e;
    const auto op = j.at("op").get<std::string>();
    if (op == "exists_link") {
        e.op = ConstraintExpr::Op::ExistsLink;
        e.direction =
            j.at("direction").get<std::string>() == "in" ? LinkDirection::In : LinkDirection::Out;
        e.link_category = j.at("link").get<std::string>();
        e.peer_mixin = j.at("peer").get<std::string>();
    } else if (op == "attr_matches") {
        e.op = ConstraintExpr::Op::AttrMatches;
        e.attr_name = j.at("attr").get<std::string>();
        e.pattern = j.at("pattern").get<std::string>();
    } else if (op == "and" || op == "or" || op == "not") {
        e.op = op == "and" ? ConstraintExpr::Op::And
               : op == "or" ? ConstraintExpr::Op::Or
                            : ConstraintExpr::Op::Not;
        for (const auto& o : j.at("operands"))
            e.operands.push_back(constraint_expr_from_json(o));
    } else {
        throw ParseError("unknown constraint op '" + op + "'");
    }
    return e;
}

inline Json to_json(const DataType& dt) {
    return std::visit(
        [](const auto& t) -> Json {
            using T = std::decay_t<decltype(t)>;
            Json j;
            if constexpr (std::is_same_v<T, StringType>) {
                j["variant"] = "string";
                if (t.pattern)
                    j["pattern"] = *t.pattern;
                if (t.min_length)
                    j["min_length"] = *t.min_length;
            } else if constexpr (std::is_same_v<T, NumericType>) {
                j["variant"] = "numeric";
                j["kind"] = t.kind == NumericKind::Integer ? "integer"
                            : t.kind == NumericKind::Float ? "float"
                                                           : "short";
                if (t.min_inclusive)
                    j["min_inclusive"] = *t.min_inclusive;
                if (t.max_inclusive)
                    j["max_inclusive"] = *t.max_inclusive;
            } else if constexpr (std::is_same_v<T, BooleanType>) {
                j["variant"] = "boolean";
            } else if constexpr (std::is_same_v<T, EnumerationType>) {
                j["variant"] = "enumeration";
                j["literals"] = t.literals;
            } else if constexpr (std::is_same_v<T, ArrayType>) {
                j["variant"] = "array";
                j["element_type"] = t.element_type;
            } else if constexpr (std::is_same_v<T, RecordType>) {
                j["variant"] = "record";
                j["fields"] = Json::array();
                for (const auto& f : t.fields)
                    j["fields"].push_back({{"name", f.name}, {"type", f.type}});
            }
            return j;
        },
        dt);
}

inline DataType datatype_from_json(const Json& j) {
    const auto variant = j.at("variant").get<std::string>();
    if (variant == "string") {
        StringType t;
        if (j.contains("pattern"))
            t.pattern = j.at("pattern").get<std::string>();
        if (j.contains("min_length"))
            t.min_length = j.at("min_length").get<std::int64_t>();
        return t;
    }
    if (variant == "numeric") {
        NumericType t;
        const auto k = j.at("kind").get<std::string>();
        t.kind = k == "integer" ? NumericKind::Integer
                 : k == "float" ? NumericKind::Float
                                : NumericKind::Short;
        if (j.contains("min_inclusive"))
            t.min_inclusive = j.at("min_inclusive").get<double>();
        if (j.contains("max_inclusive"))
            t.max_inclusive = j.at("max_inclusive").get<double>();
        return t;
    }
    if (variant == "boolean")
        return BooleanType{};
    if (variant == "enumeration") {
        EnumerationType t;
        t.literals = j.at("literals").get<std::vector<std::string>>();
        if (t.literals.empty())
            throw ParseError("enumeration requires at least one literal");
        std::set<std::string> uniq(t.literals.begin(), t.literals.end());
        if (uniq.size() != t.literals.size())
            throw ParseError("enumeration literals must be distinct");
        return t;
    }
    if (variant == "array")
        return ArrayType{j.at("element_type").get<std::string>()};
    if (variant == "record") {
        RecordType t;
        for (const auto& f : j.at("fields"))
            t.fields.push_back({f.at("name").get<std::string>(), f.at("type").get<std::string>()});
        if (t.fields.empty())
            throw ParseError("record requires at least one field");
        std::set<std::string> names;
        for (const auto& f : t.fields)
            if (!names.insert(f.name).second)
                throw ParseError("record field names must be distinct");
        return t;
    }
    throw ParseError("unknown datatype variant '" + variant + "'");
}

inline Json to_json(const Mixin& m) {
    Json j = to_json(m.category);
    j["depends"] = m.depends;
    j["applies"] = m.applies;
    j["actions"] = Json::array();
    for (const auto& a : m.actions)
        j["actions"].push_back(to_json(a));
    j["constraints"] = Json::array();
    for (const auto& c : m.constraints)
        j["constraints"].push_back(Json{{"name", c.name}, {"body", to_json(c.body)}});
    return j;
}

inline Mixin mixin_from_json(const Json& j) {
    Mixin m;
    m.category = category_from_json(j);
    m.depends = j.value("depends", std::vector<std::string>{});
    m.applies = j.value("applies", std::vector<std::string>{});
    for (const auto& a : j.value("actions", Json::array()))
        m.actions.push_back(action_from_json(a));
    for (const auto& c : j.value("constraints", Json::array()))
        m.constraints.push_back(
            {c.at("name").get<std::string>(), constraint_expr_from_json(c.at("body"))});
    return m;
}

inline Json to_json(const Kind& k) {
    Json j = to_json(k.category);
    if (k.parent)
        j["parent"] = *k.parent;
    j["role"] = k.entity_role == EntityRole::Resource ? "resource" : "link";
    j["actions"] = Json::array();
    for (const auto& a : k.actions)
        j["actions"].push_back(to_json(a));
    return j;
}

inline Kind kind_from_json(const Json& j) {
    Kind k;
    k.category = category_from_json(j);
    if (j.contains("parent"))
        k.parent = j.at("parent").get<std::string>();
    k.entity_role = j.value("role", "resource") == "link" ? EntityRole::Link
                                                          : EntityRole::Resource;
    for (const auto& a : j.value("actions", Json::array()))
        k.actions.push_back(action_from_json(a));
    return k;
}

inline Json to_json(const Extension& e) {
    Json j;
    j["name"] = e.name;
    j["scheme"] = e.scheme;
    j["imports"] = e.imports;
    j["kinds"] = Json::array();
    for (const auto& k : e.kinds)
        j["kinds"].push_back(to_json(k));
    j["mixins"] = Json::array();
    for (const auto& m : e.mixins)
        j["mixins"].push_back(to_json(m));
    j["datatypes"] = Json::array();
    for (const auto& [name, dt] : e.datatypes) {
        Json d = to_json(dt);
        d["name"] = name;
        j["datatypes"].push_back(d);
    }
    return j;
}

inline Extension extension_from_json(const Json& j) {
    Extension e;
    e.name = j.at("name").get<std::string>();
    e.scheme = j.at("scheme").get<std::string>();
    if (e.scheme.empty() || e.scheme.back() != '#')
        throw ParseError("extension scheme must end in '#': " + e.scheme);
    e.imports = j.value("imports", std::vector<std::string>{});
    for (const auto& k : j.value("kinds", Json::array()))
        e.kinds.push_back(kind_from_json(k));
    for (const auto& m : j.value("mixins", Json::array()))
        e.mixins.push_back(mixin_from_json(m));
    for (const auto& d : j.value("datatypes", Json::array()))
        e.datatypes.emplace_back(d.at("name").get<std::string>(), datatype_from_json(d));
    return e;
}

inline Json to_json(const MixinBase& mb) {
    Json j;
    j["mixin"] = mb.mixin;
    j["attributes"] = Json::object();
    for (const auto& [k, v] : mb.attribute_values)
        j["attributes"][k] = v;
    return j;
}

inline MixinBase mixin_base_from_json(const Json& j) {
    MixinBase mb;
    mb.mixin = j.at("mixin").get<std::string>();
    const Json attrs = j.value("attributes", Json::object());
    for (const auto& [k, v] : attrs.items())
        mb.attribute_values[k] = v;
    return mb;
}

inline void entity_common_to_json(const Resource& r, Json& j) {
    j["id"] = r.id;
    j["kind"] = r.kind;
    if (!r.title.empty())
        j["title"] = r.title;
    j["mixins"] = Json::array();
    for (const auto& mb : r.mixin_bases)
        j["mixins"].push_back(to_json(mb));
    j["attributes"] = Json::object();
    for (const auto& [k, v] : r.attribute_values)
        j["attributes"][k] = v;
}

inline void entity_common_from_json(const Json& j, Resource& r) {
    r.id = j.at("id").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    r.title = j.value("title", "");
    for (const auto& mb : j.value("mixins", Json::array()))
        r.mixin_bases.push_back(mixin_base_from_json(mb));
    const Json attrs = j.value("attributes", Json::object());
    for (const auto& [k, v] : attrs.items())
        r.attribute_values[k] = v;
}

inline Json to_json(const Configuration& c) {
    Json j;
    j["use"] = c.use;
    j["resources"] = Json::array();
    for (const auto& r : c.resources) {
        Json rj;
        entity_common_to_json(r, rj);
        j["resources"].push_back(rj);
    }
    j["links"] = Json::array();
    for (const auto& l : c.links) {
        Json lj;
        entity_common_to_json(l, lj);
        lj["source"] = l.source;
        lj["target"] = l.target;
        j["links"].push_back(lj);
    }
    return j;
}

inline Configuration configuration_from_json(const Json& j) {
    Configuration c;
    c.use = j.value("use", std::vector<std::string>{});
    for (const auto& rj : j.value("resources", Json::array())) {
        Resource r;
        entity_common_from_json(rj, r);
        c.resources.push_back(std::move(r));
    }
    for (const auto& lj : j.value("links", Json::array())) {
        Link l;
        entity_common_from_json(lj, l);
        l.source = lj.at("source").get<std::string>();
        l.target = lj.at("target").get<std::string>();
        c.links.push_back(std::move(l));
    }
    return c;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json parse_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

/// Parses one extension file and links it into `set`. Imports must already
/// be loaded.
inline const Extension& load_extension(const std::filesystem::path& path, ExtensionSet& set) {
    Json j = parse_json_file(path);
    Extension ext;
    try {
        ext = extension_from_json(j);
    } catch (const Json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return set.add(std::move(ext));
}

/// Loads every *.json extension in a directory, ordering loads so that
/// imports come first.
inline void load_extension_directory(const std::filesystem::path& dir, ExtensionSet& set) {
    std::vector<std::pair<std::string, Extension>> pending; // filename, parsed
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json")
            continue;
        pending.emplace_back(entry.path().string(),
                             extension_from_json(parse_json_file(entry.path())));
    }
    std::sort(pending.begin(), pending.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // repeated passes: load whatever has all imports satisfied
    while (!pending.empty()) {
        bool progress = false;
        for (auto it = pending.begin(); it != pending.end();) {
            bool ready = true;
            for (const auto& imp : it->second.imports)
                if (!set.find_extension(imp))
                    ready = false;
            if (ready) {
                set.add(std::move(it->second));
                it = pending.erase(it);
                progress = true;
            } else {
                ++it;
            }
        }
        if (!progress)
            throw LinkError("unresolvable extension imports under " + dir.string());
    }
}

inline Configuration load_configuration(const std::filesystem::path& path) {
    try {
        return configuration_from_json(parse_json_file(path));
    } catch (const Json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path.string());
    out << content;
}

} // namespace tosca2occi::occi
