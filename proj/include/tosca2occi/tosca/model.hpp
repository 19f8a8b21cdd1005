#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace tosca2occi::tosca {

using Json = nlohmann::json;

enum class TypeClass { Node, Relationship, Capability, Interface, Datatype };

inline const char* to_string(TypeClass c) {
    switch (c) {
    case TypeClass::Node: return "node";
    case TypeClass::Relationship: return "relationship";
    case TypeClass::Capability: return "capability";
    case TypeClass::Interface: return "interface";
    case TypeClass::Datatype: return "datatype";
    }
    return "?";
}

struct Constraint {
    enum class Kind {
        ValidValues,
        GreaterOrEqual,
        LessOrEqual,
        MinLength,
        MaxLength,
        Pattern,
        InRange
    };
    Kind kind = Kind::ValidValues;
    Json operand;
    bool operator==(const Constraint&) const = default;
};

inline const char* to_string(Constraint::Kind k) {
    switch (k) {
    case Constraint::Kind::ValidValues: return "valid_values";
    case Constraint::Kind::GreaterOrEqual: return "greater_or_equal";
    case Constraint::Kind::LessOrEqual: return "less_or_equal";
    case Constraint::Kind::MinLength: return "min_length";
    case Constraint::Kind::MaxLength: return "max_length";
    case Constraint::Kind::Pattern: return "pattern";
    case Constraint::Kind::InRange: return "in_range";
    }
    return "?";
}

struct PropertyDef {
    std::string name;
    std::string tosca_type; // string|integer|float|boolean|version|list|map|scalar-unit.*|named datatype
    std::string entry_type; // element type for list/map
    bool required = true;
    std::optional<Json> default_value;
    std::vector<Constraint> constraints;
    std::string description;
    bool operator==(const PropertyDef&) const = default;
};

struct RequirementDef {
    std::string name;
    std::string capability;
    std::string node;
    std::string relationship;
    std::optional<std::pair<int, int>> occurrences; // max == -1 means UNBOUNDED
    bool operator==(const RequirementDef&) const = default;
};

struct TypeDef {
    std::string name; // dotted, e.g. tosca.nodes.Compute
    TypeClass type_class = TypeClass::Node;
    std::string derived_from; // empty = root type
    std::string description;
    std::vector<PropertyDef> properties;
    std::vector<PropertyDef> attributes;
    std::vector<RequirementDef> requirements;
    std::vector<std::pair<std::string, std::string>> capabilities; // name -> capability type
    std::vector<std::pair<std::string, std::vector<std::string>>> interfaces; // name -> ops
    bool operator==(const TypeDef&) const = default;
};

struct RequirementBinding {
    std::string name;
    std::string target;       // template name
    std::string relationship; // relationship type name, may be empty until mapping
    bool operator==(const RequirementBinding&) const = default;
};

struct NodeTemplate {
    std::string name;
    std::string type_name;
    std::map<std::string, Json> properties;
    std::vector<RequirementBinding> requirements;
    std::map<std::string, std::map<std::string, Json>> capability_properties;
    bool operator==(const NodeTemplate&) const = default;
};

struct RelationshipTemplate {
    std::string name;
    std::string type_name;
    std::string source; // template name
    std::string target; // template name
    std::map<std::string, Json> properties;
    bool operator==(const RelationshipTemplate&) const = default;
};

struct Topology {
    std::string name;
    std::vector<std::pair<std::string, PropertyDef>> inputs;
    std::vector<NodeTemplate> node_templates;
    std::vector<RelationshipTemplate> relationship_templates;
    std::vector<std::pair<std::string, Json>> groups; // parsed raw, never mapped
    std::vector<std::string> warnings;

    const NodeTemplate* find_template(const std::string& name) const {
        for (const auto& t : node_templates)
            if (t.name == name)
                return &t;
        return nullptr;
    }
};

inline bool structurally_equal(const Topology& a, const Topology& b) {
    return a.name == b.name && a.inputs == b.inputs && a.node_templates == b.node_templates &&
           a.relationship_templates == b.relationship_templates && a.groups == b.groups;
}

} // namespace tosca2occi::tosca
