#pragma once

#include <cctype>
#include <cstdio>
#include <functional>
#include <map>
#include <set>

#include "tosca2occi/errors.hpp"
#include "tosca2occi/mapping/rules.hpp"
#include "tosca2occi/occi/model.hpp"
#include "tosca2occi/tosca/registry.hpp"

// Metamodel-level mapping: compiles a resolved TOSCA type registry into the
// generated OCCI extension. Node, relationship, capability and interface
// types become mixins; datatype types become record types; property
// constraints fold into the DataType system.

namespace tosca2occi::mapping {

using occi::DataType;
using occi::Json;

struct MappingReport {
    struct Census {
        int total = 0;
        int infrastructure = 0;
        int modmacao = 0;
        int sla = 0;
        int core = 0;
    };
    std::vector<std::pair<std::string, std::string>> errors; // type name, message
    std::vector<std::string> warnings;
    Census census;

    Json to_json() const {
        Json j;
        j["errors"] = Json::array();
        for (const auto& [name, msg] : errors)
            j["errors"].push_back({{"type", name}, {"message", msg}});
        j["warnings"] = warnings;
        j["census"] = {{"total", census.total},
                       {"infrastructure", census.infrastructure},
                       {"modmacao", census.modmacao},
                       {"sla", census.sla},
                       {"core", census.core}};
        return j;
    }
};

namespace detail {

inline std::string number_word(double v) {
    static const char* words[] = {"Zero", "One", "Two",   "Three", "Four",  "Five",  "Six",
                                  "Seven", "Eight", "Nine", "Ten",  "Eleven", "Twelve"};
    if (v >= 0 && v <= 12 && v == static_cast<double>(static_cast<int>(v)))
        return words[static_cast<int>(v)];
    char buf[32];
    if (v == static_cast<double>(static_cast<long long>(v)))
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
    else
        std::snprintf(buf, sizeof buf, "%g", v);
    std::string s = buf;
    for (auto& c : s)
        if (c == '.' || c == '-' || c == '+')
            c = '_';
    return s;
}

inline std::string camel(const std::string& s) {
    std::string out;
    bool up = true;
    for (char c : s) {
        if (c == '_' || c == '-' || c == '.' || c == ' ') {
            up = true;
            continue;
        }
        out += up ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
        up = false;
    }
    return out;
}

inline std::string short_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%08llx", static_cast<unsigned long long>(h & 0xffffffffull));
    return buf;
}

/// Deterministic content-derived name for a constraint-folded datatype,
/// e.g. NumericType{integer, min 1} built from a scalar-unit.size property
/// becomes "scalarSizeMinOneMB".
inline std::string synth_name(const DataType& dt, const std::string& base_label) {
    std::string unit;
    std::string label = base_label;
    if (base_label == "scalarSize")
        unit = "MB";
    else if (base_label == "scalarFrequency")
        unit = "MHz";
    return std::visit(
        [&](const auto& t) -> std::string {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, occi::NumericType>) {
                std::string n = label;
                if (t.min_inclusive)
                    n += "Min" + number_word(*t.min_inclusive);
                if (t.max_inclusive)
                    n += "Max" + number_word(*t.max_inclusive);
                return n + unit;
            } else if constexpr (std::is_same_v<T, occi::StringType>) {
                std::string n = "string";
                if (t.min_length)
                    n += "MinLen" + number_word(static_cast<double>(*t.min_length));
                if (t.pattern)
                    n += "Pattern" + short_hash(*t.pattern);
                return n;
            } else if constexpr (std::is_same_v<T, occi::EnumerationType>) {
                std::string n = "enum";
                for (const auto& lit : t.literals)
                    n += camel(lit);
                return n;
            } else if constexpr (std::is_same_v<T, occi::ArrayType>) {
                return "arrayOf" + camel(t.element_type);
            } else {
                return label;
            }
        },
        dt);
}

} // namespace detail

/// Datatype pool for the extension under construction. Interns structurally
/// equal definitions under one name; primitives resolve to the base
/// extension's names.
class DataTypePool {
public:
    explicit DataTypePool(const occi::ExtensionSet& base) : base_(&base) {}

    /// Name under which `dt` is available; adds a pool entry when new.
    std::string intern(const DataType& dt, const std::string& base_label) {
        for (const char* prim : {"string", "integer", "float", "boolean", "short"}) {
            const DataType* b = base_->find_datatype(prim);
            if (b && *b == dt)
                return prim;
        }
        for (const auto& [name, existing] : entries_)
            if (existing == dt)
                return name;
        std::string name = detail::synth_name(dt, base_label);
        add(name, dt);
        return name;
    }

    /// Adds a named entry (used for mapped TOSCA datatypes).
    void add(const std::string& name, const DataType& dt) {
        for (const auto& [n, d] : entries_)
            if (n == name) {
                if (d == dt)
                    return;
                throw TypeMappingError("datatype name collision on '" + name + "'");
            }
        entries_.emplace_back(name, dt);
    }

    bool has(const std::string& name) const {
        if (base_->find_datatype(name))
            return true;
        for (const auto& [n, d] : entries_)
            if (n == name)
                return true;
        return false;
    }

    const std::vector<std::pair<std::string, DataType>>& entries() const { return entries_; }

private:
    const occi::ExtensionSet* base_;
    std::vector<std::pair<std::string, DataType>> entries_;
};

namespace detail {

struct BaseKind {
    enum class Class { String, Numeric, Boolean, Named, Array } cls;
    occi::NumericKind numeric = occi::NumericKind::Integer;
    std::string label;   // synth-name label
    std::string named;   // mangled name for named datatypes
    std::string element; // element type for list/map
};

inline BaseKind classify_base(const tosca::PropertyDef& prop) {
    const std::string& t = prop.tosca_type;
    if (t == "string" || t == "version")
        return {BaseKind::Class::String, {}, "string", "", ""};
    if (t == "integer")
        return {BaseKind::Class::Numeric, occi::NumericKind::Integer, "integer", "", ""};
    if (t == "float")
        return {BaseKind::Class::Numeric, occi::NumericKind::Float, "float", "", ""};
    if (t == "boolean")
        return {BaseKind::Class::Boolean, {}, "boolean", "", ""};
    if (t == "scalar-unit.size")
        return {BaseKind::Class::Numeric, occi::NumericKind::Integer, "scalarSize", "", ""};
    if (t == "scalar-unit.frequency")
        return {BaseKind::Class::Numeric, occi::NumericKind::Integer, "scalarFrequency", "", ""};
    if (t == "list" || t == "map") {
        std::string elem = prop.entry_type.empty() ? "string" : prop.entry_type;
        return {BaseKind::Class::Array, {}, "array", "", elem};
    }
    return {BaseKind::Class::Named, {}, "named", mangle_name(t), ""};
}

inline double numeric_operand(const tosca::Constraint& c, const std::string& prop) {
    if (!c.operand.is_number())
        throw TypeMappingError("constraint " + std::string(to_string(c.kind)) + " on '" + prop +
                               "' needs a numeric operand");
    return c.operand.get<double>();
}

} // namespace detail

/// Maps one TOSCA property definition to an OCCI attribute, folding its
/// constraints into the DataType: valid_values -> EnumerationType,
/// greater_or_equal -> minInclusive, less_or_equal -> maxInclusive,
/// min_length -> minLength, pattern -> regular expression.
inline occi::AttributeDef map_property(const tosca::PropertyDef& prop, DataTypePool& pool,
                                       MappingReport* report = nullptr) {
    using tosca::Constraint;
    auto base = detail::classify_base(prop);

    occi::AttributeDef attr;
    attr.name = prop.name;
    attr.required = prop.required;
    attr.mutable_ = true;
    attr.default_value = prop.default_value;
    attr.description = prop.description;

    if (base.cls == detail::BaseKind::Class::Named) {
        if (!prop.constraints.empty())
            throw TypeMappingError("constraints on named datatype property '" + prop.name +
                                   "' cannot be folded");
        attr.datatype = base.named;
        return attr;
    }
    if (base.cls == detail::BaseKind::Class::Array) {
        occi::ArrayType arr;
        tosca::PropertyDef elem;
        elem.name = prop.name + "[]";
        elem.tosca_type = base.element;
        auto elem_base = detail::classify_base(elem);
        arr.element_type = elem_base.cls == detail::BaseKind::Class::Named
                               ? elem_base.named
                               : pool.intern(elem_base.cls == detail::BaseKind::Class::String
                                                 ? DataType(occi::StringType{})
                                             : elem_base.cls == detail::BaseKind::Class::Boolean
                                                 ? DataType(occi::BooleanType{})
                                                 : DataType(occi::NumericType{elem_base.numeric,
                                                                              {},
                                                                              {}}),
                                             elem_base.label);
        if (!prop.constraints.empty())
            throw TypeMappingError("constraints on list/map property '" + prop.name +
                                   "' cannot be folded");
        attr.datatype = pool.intern(arr, "array");
        return attr;
    }

    if (base.cls == detail::BaseKind::Class::Boolean) {
        if (!prop.constraints.empty())
            throw TypeMappingError("constraints on boolean property '" + prop.name +
                                   "' are not type-compatible");
        attr.datatype = pool.intern(occi::BooleanType{}, "boolean");
        return attr;
    }

    if (base.cls == detail::BaseKind::Class::Numeric) {
        occi::NumericType num{base.numeric, {}, {}};
        for (const auto& c : prop.constraints) {
            switch (c.kind) {
            case Constraint::Kind::GreaterOrEqual:
                num.min_inclusive = detail::numeric_operand(c, prop.name);
                break;
            case Constraint::Kind::LessOrEqual:
                num.max_inclusive = detail::numeric_operand(c, prop.name);
                break;
            case Constraint::Kind::InRange:
                if (!c.operand.is_array() || c.operand.size() != 2)
                    throw TypeMappingError("in_range on '" + prop.name + "' needs [lo, hi]");
                num.min_inclusive = c.operand[0].get<double>();
                num.max_inclusive = c.operand[1].get<double>();
                break;
            default:
                throw TypeMappingError(std::string("constraint ") + to_string(c.kind) + " on '" +
                                       prop.name + "' is not compatible with a numeric type");
            }
        }
        if (num.min_inclusive && num.max_inclusive && *num.min_inclusive > *num.max_inclusive)
            throw TypeMappingError("empty numeric range on '" + prop.name + "'");
        attr.datatype = pool.intern(num, base.label);
        return attr;
    }

    // string base
    occi::StringType str;
    std::optional<occi::EnumerationType> enumeration;
    for (const auto& c : prop.constraints) {
        switch (c.kind) {
        case Constraint::Kind::ValidValues: {
            occi::EnumerationType e;
            if (!c.operand.is_array() || c.operand.empty())
                throw TypeMappingError("valid_values on '" + prop.name +
                                       "' needs a nonempty list");
            for (const auto& lit : c.operand) {
                if (!lit.is_string())
                    throw TypeMappingError("valid_values on '" + prop.name +
                                           "' must be string literals");
                e.literals.push_back(lit.get<std::string>());
            }
            enumeration = std::move(e);
            break;
        }
        case Constraint::Kind::MinLength:
            str.min_length = c.operand.get<std::int64_t>();
            break;
        case Constraint::Kind::Pattern:
            str.pattern = c.operand.get<std::string>();
            break;
        case Constraint::Kind::MaxLength:
            if (report)
                report->warnings.push_back("max_length on '" + prop.name +
                                           "' has no DataType slot, dropped");
            break;
        default:
            throw TypeMappingError(std::string("constraint ") + to_string(c.kind) + " on '" +
                                   prop.name + "' is not compatible with a string type");
        }
    }
    if (enumeration) {
        if (str.pattern || str.min_length)
            throw TypeMappingError("valid_values on '" + prop.name +
                                   "' cannot combine with other string constraints");
        attr.datatype = pool.intern(*enumeration, "enum");
    } else {
        attr.datatype = pool.intern(str, "string");
    }
    return attr;
}

/// Maps a TOSCA datatype definition: RecordType with one field per property,
/// unless a builtin rule overrides the variant (PortSpec -> SHORT).
inline DataType map_datatype(const tosca::TypeDef& def, const tosca::TypeRegistry& registry,
                             const RuleTable& rules, DataTypePool& pool,
                             MappingReport* report = nullptr) {
    if (def.type_class != tosca::TypeClass::Datatype)
        throw TypeMappingError("'" + def.name + "' is not a datatype type");
    if (const MappingRule* rule = rules.find(def.name); rule && rule->datatype_variant == "short")
        return occi::NumericType{occi::NumericKind::Short, {}, {}};

    occi::RecordType rec;
    for (const auto& prop : registry.effective_properties(def.name)) {
        auto attr = map_property(prop, pool, report);
        rec.fields.push_back({prop.name, attr.datatype});
    }
    if (rec.fields.empty())
        throw TypeMappingError("datatype '" + def.name + "' has no properties; RecordType needs "
                               "at least one field");
    return rec;
}

namespace detail {

inline std::string lifecycle_rename(const std::string& op, const occi::KindRef& anchor) {
    if (anchor == kinds::storage) {
        if (op == "start")
            return "online";
        if (op == "stop")
            return "offline";
    }
    return op;
}

inline occi::ActionDef make_action(const std::string& mixin_term, const std::string& op) {
    occi::ActionDef a;
    a.category.term = op;
    a.category.scheme = std::string(schemes::tosca).substr(0, std::string(schemes::tosca).size() -
                                                                  1) +
                        "/" + mixin_term + "/action#";
    return a;
}

inline std::string camel_constraint_name(const std::string& req_name) {
    return "Requires" + camel(req_name);
}

} // namespace detail

/// Maps one TOSCA type to a mixin: term from mangle_name, derived_from as a
/// depends edge, builtin anchors for applies, declared capabilities as
/// further depends plus capability-prefixed attribute redeclarations,
/// lifecycle interface operations as actions (renamed per anchor kind), and
/// mandatory requirements compiled to exists_link constraints.
inline occi::Mixin map_type(const tosca::TypeDef& def, const tosca::TypeRegistry& registry,
                            const RuleTable& rules, const occi::ExtensionSet& exts,
                            DataTypePool& pool, MappingReport* report = nullptr) {
    const MappingRule* rule = rules.find(def.name);
    if (def.derived_from.empty() && !rule &&
        (def.type_class == tosca::TypeClass::Node ||
         def.type_class == tosca::TypeClass::Relationship))
        throw UnmappedTypeError("type '" + def.name +
                                "' has no mapping rule and no mapped parent");

    occi::Mixin mixin;
    mixin.category.term = mangle_name(def.name);
    mixin.category.scheme = schemes::tosca;
    mixin.category.title = def.description.empty() ? def.name : def.description;

    if (!def.derived_from.empty())
        mixin.depends.push_back(tosca_mixin_ref(def.derived_from));
    if (rule)
        for (const auto& extra : rule->extra_depends)
            mixin.depends.push_back(tosca_mixin_ref(extra));
    for (const auto& [cap_name, cap_type] : def.capabilities) {
        auto ref = tosca_mixin_ref(cap_type);
        if (std::find(mixin.depends.begin(), mixin.depends.end(), ref) == mixin.depends.end())
            mixin.depends.push_back(ref);
    }
    if (rule)
        mixin.applies = rule->applies;

    // own properties and attributes
    for (const auto& p : def.properties)
        mixin.category.attributes.push_back(map_property(p, pool, report));
    for (const auto& p : def.attributes) {
        auto attr = map_property(p, pool, report);
        attr.required = false;
        attr.mutable_ = false;
        mixin.category.attributes.push_back(attr);
    }

    // capability properties, redeclared with capability-prefixed names so a
    // template's flattened capability values validate on this mixin
    for (const auto& [cap_name, cap_type] : def.capabilities) {
        if (!registry.contains(cap_type))
            throw UnmappedTypeError("capability type '" + cap_type + "' of '" + def.name +
                                    "' is not in the registry");
        for (const auto& p : registry.effective_properties(cap_type)) {
            auto attr = map_property(p, pool, report);
            attr.name = cap_name + "." + p.name;
            attr.required = false;
            mixin.category.attributes.push_back(attr);
        }
    }

    // interface operations -> actions; lifecycle renaming follows the anchor
    if (def.type_class == tosca::TypeClass::Node ||
        def.type_class == tosca::TypeClass::Relationship ||
        def.type_class == tosca::TypeClass::Interface) {
        occi::KindRef anchor;
        if (rule && !rule->applies.empty()) {
            anchor = rule->applies.front();
        } else {
            // anchor inherited through the ancestry
            for (const auto* t : registry.ancestry(def.name))
                if (const MappingRule* r = rules.find(t->name); r && !r->applies.empty()) {
                    anchor = r->applies.front();
                    break;
                }
        }
        auto interfaces = def.type_class == tosca::TypeClass::Interface
                              ? def.interfaces
                              : registry.effective_interfaces(def.name);
        std::set<std::string> emitted;
        for (const auto& [iface, ops] : interfaces)
            for (const auto& op : ops) {
                auto term = detail::lifecycle_rename(op, anchor);
                if (emitted.insert(term).second)
                    mixin.actions.push_back(detail::make_action(mixin.category.term, term));
            }
    }

    // requirements with a mandatory lower bound compile to constraints
    for (const auto& req : def.requirements) {
        if (!req.occurrences || req.occurrences->first < 1)
            continue;
        if (req.relationship.empty()) {
            if (report)
                report->warnings.push_back("requirement '" + req.name + "' of '" + def.name +
                                           "' has no relationship, no constraint compiled");
            continue;
        }
        occi::ConstraintExpr expr;
        if (!req.node.empty() && registry.contains(req.node) &&
            registry.derives_from(req.node, "tosca.nodes.Compute")) {
            // placement requirements materialize as placement links
            expr = occi::ConstraintExpr::exists_link(occi::LinkDirection::Out,
                                                     kinds::placementlink,
                                                     tosca_mixin_ref("tosca.nodes.Compute"));
        } else {
            std::string peer;
            if (!req.node.empty()) {
                peer = tosca_mixin_ref(req.node);
            } else if (!req.capability.empty()) {
                for (const auto& name : registry.names()) {
                    for (const auto& [cn, ct] : registry.effective_capabilities(name))
                        if (ct == req.capability && peer.empty())
                            peer = tosca_mixin_ref(name);
                }
                if (peer.empty())
                    throw ConstraintCompileError("requirement '" + req.name + "' of '" +
                                                 def.name + "': no type declares capability '" +
                                                 req.capability + "'");
            } else {
                throw ConstraintCompileError("requirement '" + req.name + "' of '" + def.name +
                                             "' names neither capability nor node");
            }
            expr = occi::ConstraintExpr::exists_link(
                occi::LinkDirection::Out, tosca_mixin_ref(req.relationship), peer);
        }
        mixin.constraints.push_back({detail::camel_constraint_name(req.name), expr});
    }

    // Not derivable from any requirement: a compute cannot run until a
    // software component is placed on it.
    if (def.name == "tosca.nodes.Compute")
        mixin.constraints.push_back(
            {"SourceMustBeSoftwareComponent",
             occi::ConstraintExpr::exists_link(occi::LinkDirection::In, kinds::placementlink,
                                               tosca_mixin_ref("tosca.nodes.SoftwareComponent"))});

    (void)exts;
    return mixin;
}

/// Runs the whole registry through the mapper: datatypes first (two-pass,
/// forward references resolved after the group), then capabilities,
/// interfaces, relationships and nodes, parents before children, names
/// sorted. Per-type failures land in the report; the call only fails when a
/// node or relationship type stays unmapped.
inline std::pair<occi::Extension, MappingReport>
generate_extension(const tosca::TypeRegistry& registry, const RuleTable& rules,
                   const occi::ExtensionSet& base_exts) {
    MappingReport report;
    occi::Extension ext;
    ext.name = "tosca";
    ext.scheme = schemes::tosca;
    ext.imports = {"core", "infrastructure", "modmacao", "sla"};

    DataTypePool pool(base_exts);

    auto of_class = [&](tosca::TypeClass cls) {
        std::vector<std::string> names;
        for (const auto& name : registry.names())
            if (registry.find(name)->type_class == cls)
                names.push_back(name);
        return names;
    };

    // pass 1: datatypes (sorted); record fields may reference later names
    for (const auto& name : of_class(tosca::TypeClass::Datatype)) {
        try {
            pool.add(mangle_name(name),
                     map_datatype(*registry.find(name), registry, rules, pool, &report));
        } catch (const Error& e) {
            report.errors.emplace_back(name, e.what());
        }
    }

    // mixins: capabilities, interfaces, relationships, nodes; parents first
    std::set<std::string> mapped;
    std::function<void(const std::string&)> map_one = [&](const std::string& name) {
        if (mapped.count(name))
            return;
        const tosca::TypeDef* def = registry.find(name);
        if (!def->derived_from.empty())
            map_one(def->derived_from);
        mapped.insert(name);
        try {
            ext.mixins.push_back(map_type(*def, registry, rules, base_exts, pool, &report));
        } catch (const Error& e) {
            report.errors.emplace_back(name, e.what());
        }
    };
    for (auto cls : {tosca::TypeClass::Capability, tosca::TypeClass::Interface,
                     tosca::TypeClass::Relationship, tosca::TypeClass::Node})
        for (const auto& name : of_class(cls))
            map_one(name);

    ext.datatypes = pool.entries();

    // pass 2: no dangling deferred datatype references may remain
    auto resolvable = [&](const std::string& ref) {
        return pool.has(ref) || base_exts.find_datatype(ref) != nullptr;
    };
    for (const auto& [name, dt] : ext.datatypes)
        if (const auto* rec = std::get_if<occi::RecordType>(&dt))
            for (const auto& f : rec->fields)
                if (!resolvable(f.type))
                    report.errors.emplace_back(name, "record field '" + f.name +
                                                         "' references undefined datatype '" +
                                                         f.type + "'");
    for (const auto& m : ext.mixins)
        for (const auto& a : m.category.attributes)
            if (!resolvable(a.datatype))
                report.errors.emplace_back(m.category.term,
                                           "attribute '" + a.name +
                                               "' references undefined datatype '" + a.datatype +
                                               "'");

    // census: classify each mixin by the extension owning its anchor kind.
    // The anchor needs the linked set, so link a scratch copy.
    bool link_failed = false;
    try {
        occi::ExtensionSet linked;
        for (const auto& e : base_exts.extensions())
            linked.add(e);
        linked.add(ext);
        for (const auto& m : ext.mixins) {
            report.census.total++;
            auto anchors = linked.anchor_kinds(m.category.ref());
            std::string bucket = "core";
            if (!anchors.empty()) {
                const std::string& anchor = anchors.front();
                if (anchor.starts_with(schemes::infrastructure))
                    bucket = "infrastructure";
                else if (anchor.starts_with(schemes::modmacao))
                    bucket = "modmacao";
                else if (anchor.starts_with(schemes::sla))
                    bucket = "sla";
            }
            if (bucket == "infrastructure")
                report.census.infrastructure++;
            else if (bucket == "modmacao")
                report.census.modmacao++;
            else if (bucket == "sla")
                report.census.sla++;
            else
                report.census.core++;
        }
    } catch (const Error& e) {
        link_failed = true;
        report.errors.emplace_back("(extension)", e.what());
    }

    // unmapped node or relationship types are fatal
    std::string fatal;
    for (const auto& [name, msg] : report.errors) {
        const tosca::TypeDef* def = registry.find(name);
        if (def && (def->type_class == tosca::TypeClass::Node ||
                    def->type_class == tosca::TypeClass::Relationship))
            fatal += (fatal.empty() ? "" : "; ") + name + ": " + msg;
    }
    if (!fatal.empty())
        throw UnmappedTypeError("unmapped node/relationship types: " + fatal);
    if (link_failed)
        throw LinkError("generated extension does not link: " +
                        report.errors.back().second);

    return {std::move(ext), std::move(report)};
}

} // namespace tosca2occi::mapping
