#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "tosca2occi/errors.hpp"
#include "tosca2occi/tosca/model.hpp"

// TOSCA Simple Profile 1.0 YAML subset parser: type definition documents
// (node/relationship/capability/interface/data types) and topology templates.
// imports, artifacts, policies and intrinsic functions other than get_input
// are captured raw and reported as warnings.

namespace tosca2occi::tosca {

namespace detail {

inline bool looks_like_int(const std::string& s) {
    static const std::regex re(R"([-+]?[0-9]+)");
    return std::regex_match(s, re);
}

inline bool looks_like_float(const std::string& s) {
    static const std::regex re(R"([-+]?([0-9]+\.[0-9]*|\.[0-9]+)([eE][-+]?[0-9]+)?)");
    return std::regex_match(s, re);
}

/// Plain (unquoted) YAML scalar to JSON with the usual core-schema coercions.
inline Json scalar_to_json(const YAML::Node& n) {
    const std::string& s = n.Scalar();
    if (n.Tag() == "!") // quoted scalar stays a string
        return s;
    if (s.empty() || s == "~" || s == "null")
        return nullptr;
    if (s == "true")
        return true;
    if (s == "false")
        return false;
    if (looks_like_int(s))
        return static_cast<std::int64_t>(std::stoll(s));
    if (looks_like_float(s))
        return std::stod(s);
    return s;
}

/// "10 GB" -> megabytes, "2.4 GHz" -> megahertz. Strings without a unit
/// suffix pass through untouched.
inline Json normalize_scalar_unit(const Json& v) {
    if (!v.is_string())
        return v;
    static const std::regex size_re(
        R"(\s*([0-9]+(?:\.[0-9]+)?)\s*(B|kB|KB|KiB|MB|MiB|GB|GiB|TB|TiB)\s*)");
    static const std::regex freq_re(R"(\s*([0-9]+(?:\.[0-9]+)?)\s*(Hz|kHz|MHz|GHz)\s*)");
    const auto s = v.get<std::string>();
    std::smatch m;
    if (std::regex_match(s, m, size_re)) {
        const double n = std::stod(m[1].str());
        const std::string unit = m[2].str();
        double mb = n;
        if (unit == "B")
            mb = n / (1024.0 * 1024.0);
        else if (unit == "kB" || unit == "KB" || unit == "KiB")
            mb = n / 1024.0;
        else if (unit == "GB" || unit == "GiB")
            mb = n * 1024.0;
        else if (unit == "TB" || unit == "TiB")
            mb = n * 1024.0 * 1024.0;
        return static_cast<std::int64_t>(std::llround(mb));
    }
    if (std::regex_match(s, m, freq_re)) {
        const double n = std::stod(m[1].str());
        const std::string unit = m[2].str();
        double mhz = n;
        if (unit == "Hz")
            mhz = n / 1e6;
        else if (unit == "kHz")
            mhz = n / 1e3;
        else if (unit == "GHz")
            mhz = n * 1e3;
        return static_cast<std::int64_t>(std::llround(mhz));
    }
    return v;
}

inline Json yaml_to_json(const YAML::Node& n) {
    switch (n.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
        return nullptr;
    case YAML::NodeType::Scalar:
        return scalar_to_json(n);
    case YAML::NodeType::Sequence: {
        Json a = Json::array();
        for (const auto& item : n)
            a.push_back(yaml_to_json(item));
        return a;
    }
    case YAML::NodeType::Map: {
        Json o = Json::object();
        for (const auto& kv : n)
            o[kv.first.Scalar()] = yaml_to_json(kv.second);
        return o;
    }
    }
    return nullptr;
}

/// Value position: units normalized recursively.
inline Json value_from_yaml(const YAML::Node& n) {
    Json v = yaml_to_json(n);
    std::function<void(Json&)> walk = [&](Json& j) {
        if (j.is_string())
            j = normalize_scalar_unit(j);
        else if (j.is_array() || j.is_object())
            for (auto& item : j)
                walk(item);
    };
    walk(v);
    return v;
}

inline void require_map(const YAML::Node& n, const std::string& what) {
    if (!n.IsMap())
        throw SchemaError(what + " must be a YAML mapping");
}

inline Constraint::Kind constraint_kind(const std::string& key) {
    if (key == "valid_values")
        return Constraint::Kind::ValidValues;
    if (key == "greater_or_equal")
        return Constraint::Kind::GreaterOrEqual;
    if (key == "less_or_equal")
        return Constraint::Kind::LessOrEqual;
    if (key == "min_length")
        return Constraint::Kind::MinLength;
    if (key == "max_length")
        return Constraint::Kind::MaxLength;
    if (key == "pattern")
        return Constraint::Kind::Pattern;
    if (key == "in_range")
        return Constraint::Kind::InRange;
    throw SchemaError("unknown constraint operator '" + key + "'");
}

inline PropertyDef parse_property(const std::string& name, const YAML::Node& n) {
    PropertyDef p;
    p.name = name;
    if (n.IsScalar()) { // shorthand: name: type
        p.tosca_type = n.Scalar();
        return p;
    }
    require_map(n, "property '" + name + "'");
    for (const auto& kv : n) {
        const std::string key = kv.first.Scalar();
        if (key == "type")
            p.tosca_type = kv.second.Scalar();
        else if (key == "description")
            p.description = kv.second.Scalar();
        else if (key == "required")
            p.required = kv.second.as<bool>();
        else if (key == "default")
            p.default_value = value_from_yaml(kv.second);
        else if (key == "entry_schema") {
            if (kv.second.IsScalar())
                p.entry_type = kv.second.Scalar();
            else if (kv.second["type"])
                p.entry_type = kv.second["type"].Scalar();
        } else if (key == "constraints") {
            for (const auto& c : kv.second) {
                require_map(c, "constraint of '" + name + "'");
                for (const auto& ckv : c)
                    p.constraints.push_back(
                        {constraint_kind(ckv.first.Scalar()), value_from_yaml(ckv.second)});
            }
        } else if (key == "status" || key == "metadata") {
            // tolerated, carries no mapping information
        } else {
            throw SchemaError("unknown field '" + key + "' on property '" + name + "'");
        }
    }
    if (p.tosca_type.empty())
        throw SchemaError("property '" + name + "' has no type");
    return p;
}

inline RequirementDef parse_requirement_def(const std::string& name, const YAML::Node& n) {
    RequirementDef r;
    r.name = name;
    if (n.IsScalar()) { // shorthand: name: capability-type
        r.capability = n.Scalar();
        return r;
    }
    require_map(n, "requirement '" + name + "'");
    for (const auto& kv : n) {
        const std::string key = kv.first.Scalar();
        if (key == "capability")
            r.capability = kv.second.Scalar();
        else if (key == "node")
            r.node = kv.second.Scalar();
        else if (key == "relationship") {
            if (kv.second.IsScalar())
                r.relationship = kv.second.Scalar();
            else if (kv.second["type"])
                r.relationship = kv.second["type"].Scalar();
        } else if (key == "occurrences") {
            if (!kv.second.IsSequence() || kv.second.size() != 2)
                throw SchemaError("occurrences of '" + name + "' must be [min, max]");
            int lo = kv.second[0].as<int>();
            int hi = kv.second[1].IsScalar() && kv.second[1].Scalar() == "UNBOUNDED"
                         ? -1
                         : kv.second[1].as<int>();
            r.occurrences = {lo, hi};
        } else if (key == "description") {
            // tolerated
        } else {
            throw SchemaError("unknown field '" + key + "' on requirement '" + name + "'");
        }
    }
    return r;
}

inline TypeDef parse_type(const std::string& name, TypeClass cls, const YAML::Node& n,
                          std::vector<std::string>& warnings) {
    TypeDef t;
    t.name = name;
    t.type_class = cls;
    if (n.IsNull())
        return t;
    require_map(n, "type '" + name + "'");
    for (const auto& kv : n) {
        const std::string key = kv.first.Scalar();
        if (key == "derived_from")
            t.derived_from = kv.second.Scalar();
        else if (key == "description")
            t.description = kv.second.Scalar();
        else if (key == "properties") {
            for (const auto& pkv : kv.second)
                t.properties.push_back(parse_property(pkv.first.Scalar(), pkv.second));
        } else if (key == "attributes") {
            for (const auto& pkv : kv.second)
                t.attributes.push_back(parse_property(pkv.first.Scalar(), pkv.second));
        } else if (key == "requirements") {
            for (const auto& item : kv.second) {
                require_map(item, "requirement entry of '" + name + "'");
                for (const auto& rkv : item)
                    t.requirements.push_back(
                        parse_requirement_def(rkv.first.Scalar(), rkv.second));
            }
        } else if (key == "capabilities") {
            for (const auto& ckv : kv.second) {
                std::string cap_type;
                if (ckv.second.IsScalar())
                    cap_type = ckv.second.Scalar();
                else if (ckv.second["type"])
                    cap_type = ckv.second["type"].Scalar();
                else
                    throw SchemaError("capability '" + ckv.first.Scalar() + "' of '" + name +
                                      "' has no type");
                t.capabilities.emplace_back(ckv.first.Scalar(), cap_type);
            }
        } else if (key == "interfaces") {
            for (const auto& ikv : kv.second) {
                std::vector<std::string> ops;
                if (ikv.second.IsSequence()) {
                    for (const auto& op : ikv.second)
                        ops.push_back(op.Scalar());
                } else if (ikv.second.IsMap()) {
                    for (const auto& okv : ikv.second) {
                        const std::string op = okv.first.Scalar();
                        if (op != "type" && op != "inputs")
                            ops.push_back(op);
                    }
                }
                t.interfaces.emplace_back(ikv.first.Scalar(), std::move(ops));
            }
        } else if (key == "artifacts") {
            warnings.push_back("type '" + name + "': artifacts ignored");
        } else if (key == "metadata" || key == "version" || key == "valid_target_types" ||
                   key == "mime_type" || key == "file_ext") {
            // tolerated, carries no mapping information
        } else if (cls == TypeClass::Interface) {
            // interface types list their operations as direct keys
            std::vector<std::string> ops;
            if (t.interfaces.empty())
                t.interfaces.emplace_back("operations", ops);
            t.interfaces.front().second.push_back(key);
        } else {
            throw SchemaError("unknown field '" + key + "' on type '" + name + "'");
        }
    }
    return t;
}

} // namespace detail

struct ParsedTypes {
    std::vector<TypeDef> types;
    std::vector<std::string> warnings;
};

/// Parses a TOSCA type-definition document. One TypeDef per declared type,
/// grouped by section; forward references stay symbolic until registry
/// resolution.
inline ParsedTypes parse_types(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw YamlError(std::string("YAML parse failure: ") + e.what());
    }
    ParsedTypes out;
    if (root.IsNull() || !root.IsDefined())
        return out;
    if (!root.IsMap())
        throw SchemaError("type document root must be a mapping");

    static const std::vector<std::pair<std::string, TypeClass>> sections = {
        {"node_types", TypeClass::Node},
        {"relationship_types", TypeClass::Relationship},
        {"capability_types", TypeClass::Capability},
        {"interface_types", TypeClass::Interface},
        {"data_types", TypeClass::Datatype},
    };

    std::set<std::string> names;
    for (const auto& kv : root) {
        const std::string section = kv.first.Scalar();
        if (section == "tosca_definitions_version" || section == "metadata" ||
            section == "description" || section == "template_name" ||
            section == "template_version" || section == "template_author")
            continue;
        if (section == "imports") {
            out.warnings.push_back("imports section ignored");
            continue;
        }
        auto it = std::find_if(sections.begin(), sections.end(),
                               [&](const auto& s) { return s.first == section; });
        if (it == sections.end())
            throw SchemaError("unknown section '" + section + "' in type document");
        if (kv.second.IsNull())
            continue;
        detail::require_map(kv.second, section);
        for (const auto& tkv : kv.second) {
            const std::string name = tkv.first.Scalar();
            if (!names.insert(name).second)
                throw DuplicateTypeError("type '" + name + "' defined twice");
            out.types.push_back(detail::parse_type(name, it->second, tkv.second, out.warnings));
        }
    }
    return out;
}

/// Parses a topology_template document. Inputs with defaults (or values from
/// `input_overrides`) are substituted into property values; groups and
/// policies are captured raw.
inline Topology parse_topology(const std::string& yaml_text,
                               const std::map<std::string, std::string>& input_overrides = {}) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw YamlError(std::string("YAML parse failure: ") + e.what());
    }
    if (!root.IsMap())
        throw SchemaError("topology document root must be a mapping");

    Topology topo;
    topo.name = "topology";
    if (root["metadata"] && root["metadata"]["template_name"])
        topo.name = root["metadata"]["template_name"].Scalar();

    for (const auto& kv : root) {
        const std::string section = kv.first.Scalar();
        if (section == "tosca_definitions_version" || section == "metadata" ||
            section == "description")
            continue;
        if (section == "imports") {
            topo.warnings.push_back("imports section ignored");
            continue;
        }
        if (section == "node_types" || section == "relationship_types" ||
            section == "capability_types" || section == "interface_types" ||
            section == "data_types") {
            topo.warnings.push_back("inline " + section + " ignored; parse them as a type document");
            continue;
        }
        if (section != "topology_template")
            throw SchemaError("unknown section '" + section + "' in topology document");
    }
    YAML::Node tt = root["topology_template"];
    if (!tt || !tt.IsMap())
        throw SchemaError("document has no topology_template section");

    if (tt["inputs"])
        for (const auto& ikv : tt["inputs"])
            topo.inputs.emplace_back(ikv.first.Scalar(),
                                     detail::parse_property(ikv.first.Scalar(), ikv.second));

    // resolves {get_input: x} against declared inputs and CLI overrides
    auto resolve_input = [&](const std::string& input_name) -> Json {
        const PropertyDef* def = nullptr;
        for (const auto& [n, d] : topo.inputs)
            if (n == input_name)
                def = &d;
        auto ov = input_overrides.find(input_name);
        if (ov != input_overrides.end()) {
            const std::string& raw = ov->second;
            if (def && def->tosca_type == "integer")
                return static_cast<std::int64_t>(std::stoll(raw));
            if (def && def->tosca_type == "float")
                return std::stod(raw);
            if (def && def->tosca_type == "boolean")
                return raw == "true";
            return detail::normalize_scalar_unit(Json(raw));
        }
        if (def && def->default_value)
            return *def->default_value;
        throw MissingInputError("input '" + input_name +
                                "' has no default and was not provided (--input " + input_name +
                                "=...)");
    };

    std::function<Json(const YAML::Node&)> value_of = [&](const YAML::Node& n) -> Json {
        if (n.IsMap() && n.size() == 1) {
            const auto& kv = *n.begin();
            const std::string fn = kv.first.Scalar();
            if (fn == "get_input")
                return resolve_input(kv.second.Scalar());
            if (fn.rfind("get_", 0) == 0 || fn == "concat") {
                topo.warnings.push_back("intrinsic function '" + fn + "' kept as raw value");
                return detail::value_from_yaml(n);
            }
        }
        if (n.IsMap()) {
            Json o = Json::object();
            for (const auto& kv : n)
                o[kv.first.Scalar()] = value_of(kv.second);
            return o;
        }
        if (n.IsSequence()) {
            Json a = Json::array();
            for (const auto& item : n)
                a.push_back(value_of(item));
            return a;
        }
        return detail::value_from_yaml(n);
    };

    for (const auto& kv : tt) {
        const std::string section = kv.first.Scalar();
        if (section == "inputs" || section == "description")
            continue;
        if (section == "outputs" || section == "substitution_mappings" || section == "policies") {
            topo.warnings.push_back(section + " section ignored");
            continue;
        }
        if (section == "node_templates") {
            detail::require_map(kv.second, "node_templates");
            for (const auto& nkv : kv.second) {
                NodeTemplate nt;
                nt.name = nkv.first.Scalar();
                if (topo.find_template(nt.name))
                    throw DuplicateTemplateError("node template '" + nt.name + "' defined twice");
                detail::require_map(nkv.second, "node template '" + nt.name + "'");
                for (const auto& fkv : nkv.second) {
                    const std::string field = fkv.first.Scalar();
                    if (field == "type")
                        nt.type_name = fkv.second.Scalar();
                    else if (field == "description")
                        continue;
                    else if (field == "properties") {
                        for (const auto& pkv : fkv.second)
                            nt.properties[pkv.first.Scalar()] = value_of(pkv.second);
                    } else if (field == "capabilities") {
                        for (const auto& ckv : fkv.second) {
                            std::map<std::string, Json> props;
                            if (ckv.second["properties"])
                                for (const auto& pkv : ckv.second["properties"])
                                    props[pkv.first.Scalar()] = value_of(pkv.second);
                            nt.capability_properties[ckv.first.Scalar()] = std::move(props);
                        }
                    } else if (field == "requirements") {
                        for (const auto& item : fkv.second) {
                            detail::require_map(item, "requirement of '" + nt.name + "'");
                            for (const auto& rkv : item) {
                                RequirementBinding b;
                                b.name = rkv.first.Scalar();
                                if (rkv.second.IsScalar()) {
                                    b.target = rkv.second.Scalar();
                                } else {
                                    detail::require_map(rkv.second,
                                                        "requirement '" + b.name + "'");
                                    for (const auto& bkv : rkv.second) {
                                        const std::string bf = bkv.first.Scalar();
                                        if (bf == "node")
                                            b.target = bkv.second.Scalar();
                                        else if (bf == "relationship")
                                            b.relationship = bkv.second.IsScalar()
                                                                 ? bkv.second.Scalar()
                                                                 : bkv.second["type"].Scalar();
                                        else if (bf == "capability")
                                            continue;
                                        else
                                            topo.warnings.push_back("requirement '" + b.name +
                                                                    "': field '" + bf +
                                                                    "' ignored");
                                    }
                                }
                                if (b.target.empty())
                                    throw SchemaError("requirement '" + b.name + "' of '" +
                                                      nt.name + "' names no target node");
                                nt.requirements.push_back(std::move(b));
                            }
                        }
                    } else if (field == "interfaces" || field == "artifacts") {
                        topo.warnings.push_back("template '" + nt.name + "': " + field +
                                                " ignored");
                    } else {
                        throw SchemaError("unknown field '" + field + "' on template '" +
                                          nt.name + "'");
                    }
                }
                if (nt.type_name.empty())
                    throw SchemaError("node template '" + nt.name + "' has no type");
                topo.node_templates.push_back(std::move(nt));
            }
        } else if (section == "relationship_templates") {
            for (const auto& rkv : kv.second) {
                RelationshipTemplate rt;
                rt.name = rkv.first.Scalar();
                detail::require_map(rkv.second, "relationship template '" + rt.name + "'");
                for (const auto& fkv : rkv.second) {
                    const std::string field = fkv.first.Scalar();
                    if (field == "type")
                        rt.type_name = fkv.second.Scalar();
                    else if (field == "source")
                        rt.source = fkv.second.Scalar();
                    else if (field == "target")
                        rt.target = fkv.second.Scalar();
                    else if (field == "properties")
                        for (const auto& pkv : fkv.second)
                            rt.properties[pkv.first.Scalar()] = value_of(pkv.second);
                    else
                        throw SchemaError("unknown field '" + field +
                                          "' on relationship template '" + rt.name + "'");
                }
                topo.relationship_templates.push_back(std::move(rt));
            }
        } else if (section == "groups") {
            for (const auto& gkv : kv.second)
                topo.groups.emplace_back(gkv.first.Scalar(), detail::yaml_to_json(gkv.second));
            if (!topo.groups.empty())
                topo.warnings.push_back("groups parsed but not mapped");
        } else {
            throw SchemaError("unknown section '" + section + "' in topology_template");
        }
    }

    // referential checks
    for (const auto& nt : topo.node_templates)
        for (const auto& b : nt.requirements)
            if (!topo.find_template(b.target))
                throw DanglingReferenceError("template '" + nt.name + "' requirement '" + b.name +
                                             "' targets unknown template '" + b.target + "'");
    for (const auto& rt : topo.relationship_templates) {
        if (!topo.find_template(rt.source))
            throw DanglingReferenceError("relationship template '" + rt.name +
                                         "' has unknown source '" + rt.source + "'");
        if (!topo.find_template(rt.target))
            throw DanglingReferenceError("relationship template '" + rt.name +
                                         "' has unknown target '" + rt.target + "'");
    }
    return topo;
}

// ---------------------------------------------------------------------------
// canonical YAML emission (used for round-trip checks and model inspection)

namespace detail {

inline void emit_json(YAML::Emitter& out, const Json& v) {
    switch (v.type()) {
    case Json::value_t::null:
        out << YAML::Null;
        break;
    case Json::value_t::boolean:
        out << v.get<bool>();
        break;
    case Json::value_t::number_integer:
        out << v.get<std::int64_t>();
        break;
    case Json::value_t::number_unsigned:
        out << static_cast<std::int64_t>(v.get<std::uint64_t>());
        break;
    case Json::value_t::number_float:
        out << v.get<double>();
        break;
    case Json::value_t::string: {
        const auto s = v.get<std::string>();
        // quote anything a reparse would coerce away from string
        if (s.empty() || s == "null" || s == "~" || s == "true" || s == "false" ||
            looks_like_int(s) || looks_like_float(s))
            out << YAML::DoubleQuoted << s;
        else
            out << s;
        break;
    }
    case Json::value_t::array:
        out << YAML::BeginSeq;
        for (const auto& item : v)
            emit_json(out, item);
        out << YAML::EndSeq;
        break;
    case Json::value_t::object:
        out << YAML::BeginMap;
        for (const auto& [k, val] : v.items()) {
            out << YAML::Key << k << YAML::Value;
            emit_json(out, val);
        }
        out << YAML::EndMap;
        break;
    default:
        out << YAML::Null;
    }
}

inline void emit_property(YAML::Emitter& out, const PropertyDef& p) {
    out << YAML::BeginMap;
    out << YAML::Key << "type" << YAML::Value << p.tosca_type;
    if (!p.entry_type.empty()) {
        out << YAML::Key << "entry_schema" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "type" << YAML::Value << p.entry_type << YAML::EndMap;
    }
    if (!p.description.empty())
        out << YAML::Key << "description" << YAML::Value << p.description;
    if (!p.required)
        out << YAML::Key << "required" << YAML::Value << false;
    if (p.default_value) {
        out << YAML::Key << "default" << YAML::Value;
        emit_json(out, *p.default_value);
    }
    if (!p.constraints.empty()) {
        out << YAML::Key << "constraints" << YAML::Value << YAML::BeginSeq;
        for (const auto& c : p.constraints) {
            out << YAML::BeginMap << YAML::Key << to_string(c.kind) << YAML::Value;
            emit_json(out, c.operand);
            out << YAML::EndMap;
        }
        out << YAML::EndSeq;
    }
    out << YAML::EndMap;
}

} // namespace detail

/// Canonical YAML for a set of type definitions; parse_types(emit_types(x))
/// is structurally equal to x.
inline std::string emit_types(const std::vector<TypeDef>& types) {
    static const std::vector<std::pair<std::string, TypeClass>> sections = {
        {"node_types", TypeClass::Node},
        {"relationship_types", TypeClass::Relationship},
        {"capability_types", TypeClass::Capability},
        {"interface_types", TypeClass::Interface},
        {"data_types", TypeClass::Datatype},
    };
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "tosca_definitions_version" << YAML::Value << "tosca_simple_yaml_1_0";
    for (const auto& [section, cls] : sections) {
        bool any = false;
        for (const auto& t : types)
            any = any || t.type_class == cls;
        if (!any)
            continue;
        out << YAML::Key << section << YAML::Value << YAML::BeginMap;
        for (const auto& t : types) {
            if (t.type_class != cls)
                continue;
            out << YAML::Key << t.name << YAML::Value << YAML::BeginMap;
            if (!t.derived_from.empty())
                out << YAML::Key << "derived_from" << YAML::Value << t.derived_from;
            if (!t.description.empty())
                out << YAML::Key << "description" << YAML::Value << t.description;
            if (!t.properties.empty()) {
                out << YAML::Key << "properties" << YAML::Value << YAML::BeginMap;
                for (const auto& p : t.properties) {
                    out << YAML::Key << p.name << YAML::Value;
                    detail::emit_property(out, p);
                }
                out << YAML::EndMap;
            }
            if (!t.attributes.empty()) {
                out << YAML::Key << "attributes" << YAML::Value << YAML::BeginMap;
                for (const auto& p : t.attributes) {
                    out << YAML::Key << p.name << YAML::Value;
                    detail::emit_property(out, p);
                }
                out << YAML::EndMap;
            }
            if (!t.requirements.empty()) {
                out << YAML::Key << "requirements" << YAML::Value << YAML::BeginSeq;
                for (const auto& r : t.requirements) {
                    out << YAML::BeginMap << YAML::Key << r.name << YAML::Value << YAML::BeginMap;
                    if (!r.capability.empty())
                        out << YAML::Key << "capability" << YAML::Value << r.capability;
                    if (!r.node.empty())
                        out << YAML::Key << "node" << YAML::Value << r.node;
                    if (!r.relationship.empty())
                        out << YAML::Key << "relationship" << YAML::Value << r.relationship;
                    if (r.occurrences) {
                        out << YAML::Key << "occurrences" << YAML::Value << YAML::Flow
                            << YAML::BeginSeq << r.occurrences->first;
                        if (r.occurrences->second < 0)
                            out << "UNBOUNDED";
                        else
                            out << r.occurrences->second;
                        out << YAML::EndSeq;
                    }
                    out << YAML::EndMap << YAML::EndMap;
                }
                out << YAML::EndSeq;
            }
            if (!t.capabilities.empty()) {
                out << YAML::Key << "capabilities" << YAML::Value << YAML::BeginMap;
                for (const auto& [cn, ct] : t.capabilities)
                    out << YAML::Key << cn << YAML::Value << ct;
                out << YAML::EndMap;
            }
            if (!t.interfaces.empty()) {
                out << YAML::Key << "interfaces" << YAML::Value << YAML::BeginMap;
                for (const auto& [in, ops] : t.interfaces) {
                    out << YAML::Key << in << YAML::Value << YAML::Flow << YAML::BeginSeq;
                    for (const auto& op : ops)
                        out << op;
                    out << YAML::EndSeq;
                }
                out << YAML::EndMap;
            }
            out << YAML::EndMap;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

/// Canonical YAML for a topology; parse_topology(emit_topology(x)) is
/// structurally equal to x (inputs already substituted stay substituted).
inline std::string emit_topology(const Topology& topo) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "tosca_definitions_version" << YAML::Value << "tosca_simple_yaml_1_0";
    out << YAML::Key << "metadata" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "template_name" << YAML::Value << topo.name << YAML::EndMap;
    out << YAML::Key << "topology_template" << YAML::Value << YAML::BeginMap;
    if (!topo.inputs.empty()) {
        out << YAML::Key << "inputs" << YAML::Value << YAML::BeginMap;
        for (const auto& [name, def] : topo.inputs) {
            out << YAML::Key << name << YAML::Value;
            detail::emit_property(out, def);
        }
        out << YAML::EndMap;
    }
    out << YAML::Key << "node_templates" << YAML::Value << YAML::BeginMap;
    for (const auto& nt : topo.node_templates) {
        out << YAML::Key << nt.name << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "type" << YAML::Value << nt.type_name;
        if (!nt.properties.empty()) {
            out << YAML::Key << "properties" << YAML::Value << YAML::BeginMap;
            for (const auto& [k, v] : nt.properties) {
                out << YAML::Key << k << YAML::Value;
                detail::emit_json(out, v);
            }
            out << YAML::EndMap;
        }
        if (!nt.capability_properties.empty()) {
            out << YAML::Key << "capabilities" << YAML::Value << YAML::BeginMap;
            for (const auto& [cap, props] : nt.capability_properties) {
                out << YAML::Key << cap << YAML::Value << YAML::BeginMap;
                out << YAML::Key << "properties" << YAML::Value << YAML::BeginMap;
                for (const auto& [k, v] : props) {
                    out << YAML::Key << k << YAML::Value;
                    detail::emit_json(out, v);
                }
                out << YAML::EndMap << YAML::EndMap;
            }
            out << YAML::EndMap;
        }
        if (!nt.requirements.empty()) {
            out << YAML::Key << "requirements" << YAML::Value << YAML::BeginSeq;
            for (const auto& b : nt.requirements) {
                out << YAML::BeginMap << YAML::Key << b.name << YAML::Value << YAML::BeginMap;
                out << YAML::Key << "node" << YAML::Value << b.target;
                if (!b.relationship.empty())
                    out << YAML::Key << "relationship" << YAML::Value << b.relationship;
                out << YAML::EndMap << YAML::EndMap;
            }
            out << YAML::EndSeq;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    if (!topo.relationship_templates.empty()) {
        out << YAML::Key << "relationship_templates" << YAML::Value << YAML::BeginMap;
        for (const auto& rt : topo.relationship_templates) {
            out << YAML::Key << rt.name << YAML::Value << YAML::BeginMap;
            out << YAML::Key << "type" << YAML::Value << rt.type_name;
            out << YAML::Key << "source" << YAML::Value << rt.source;
            out << YAML::Key << "target" << YAML::Value << rt.target;
            if (!rt.properties.empty()) {
                out << YAML::Key << "properties" << YAML::Value << YAML::BeginMap;
                for (const auto& [k, v] : rt.properties) {
                    out << YAML::Key << k << YAML::Value;
                    detail::emit_json(out, v);
                }
                out << YAML::EndMap;
            }
            out << YAML::EndMap;
        }
        out << YAML::EndMap;
    }
    if (!topo.groups.empty()) {
        out << YAML::Key << "groups" << YAML::Value << YAML::BeginMap;
        for (const auto& [name, raw] : topo.groups) {
            out << YAML::Key << name << YAML::Value;
            detail::emit_json(out, raw);
        }
        out << YAML::EndMap;
    }
    out << YAML::EndMap << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

// JSON projection of the parsed models, used by the CLI

inline Json to_json(const TypeDef& t) {
    Json j;
    j["name"] = t.name;
    j["class"] = to_string(t.type_class);
    if (!t.derived_from.empty())
        j["derived_from"] = t.derived_from;
    if (!t.description.empty())
        j["description"] = t.description;
    j["properties"] = Json::array();
    for (const auto& p : t.properties) {
        Json pj{{"name", p.name}, {"type", p.tosca_type}, {"required", p.required}};
        if (p.default_value)
            pj["default"] = *p.default_value;
        if (!p.constraints.empty()) {
            pj["constraints"] = Json::array();
            for (const auto& c : p.constraints)
                pj["constraints"].push_back({{to_string(c.kind), c.operand}});
        }
        j["properties"].push_back(pj);
    }
    j["requirements"] = Json::array();
    for (const auto& r : t.requirements) {
        Json rj{{"name", r.name}};
        if (!r.capability.empty())
            rj["capability"] = r.capability;
        if (!r.node.empty())
            rj["node"] = r.node;
        if (!r.relationship.empty())
            rj["relationship"] = r.relationship;
        j["requirements"].push_back(rj);
    }
    j["capabilities"] = Json::object();
    for (const auto& [n, c] : t.capabilities)
        j["capabilities"][n] = c;
    return j;
}

inline Json to_json(const Topology& topo) {
    Json j;
    j["name"] = topo.name;
    j["node_templates"] = Json::array();
    for (const auto& nt : topo.node_templates) {
        Json tj{{"name", nt.name}, {"type", nt.type_name}};
        tj["properties"] = nt.properties;
        tj["requirements"] = Json::array();
        for (const auto& b : nt.requirements) {
            Json bj{{"name", b.name}, {"node", b.target}};
            if (!b.relationship.empty())
                bj["relationship"] = b.relationship;
            tj["requirements"].push_back(bj);
        }
        if (!nt.capability_properties.empty()) {
            tj["capabilities"] = Json::object();
            for (const auto& [cap, props] : nt.capability_properties)
                tj["capabilities"][cap] = props;
        }
        j["node_templates"].push_back(tj);
    }
    j["relationship_templates"] = Json::array();
    for (const auto& rt : topo.relationship_templates)
        j["relationship_templates"].push_back({{"name", rt.name},
                                               {"type", rt.type_name},
                                               {"source", rt.source},
                                               {"target", rt.target},
                                               {"properties", rt.properties}});
    j["groups"] = Json::array();
    for (const auto& [name, raw] : topo.groups)
        j["groups"].push_back({{"name", name}, {"value", raw}});
    if (!topo.warnings.empty())
        j["warnings"] = topo.warnings;
    return j;
}

} // namespace tosca2occi::tosca
