#pragma once

#include "tosca2occi/occi/model.hpp"

namespace tosca2occi::occi {

struct Violation {
    std::string entity_id;
    std::string name; // constraint or attribute name
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

namespace detail {

/// True when `peer` counts as an instance of `peer_mixin`: it carries the
/// mixin in some depends closure, or its kind is (or derives from) a kind the
/// mixin applies to. The second clause makes "is a SoftwareComponent" hold
/// for every entity of the component kind, not only for entities that carry
/// the mixin explicitly.
inline bool peer_satisfies(const Resource& peer, const MixinRef& peer_mixin,
                           const ExtensionSet& exts) {
    for (const auto& mb : peer.mixin_bases) {
        auto closure = exts.mixin_closure(mb.mixin);
        if (std::find(closure.begin(), closure.end(), peer_mixin) != closure.end())
            return true;
    }
    if (const Mixin* m = exts.find_mixin(peer_mixin))
        for (const auto& k : m->applies)
            if (exts.kind_is_a(peer.kind, k))
                return true;
    return false;
}

inline bool link_matches_category(const Link& link, const CategoryRef& category,
                                  const ExtensionSet& exts) {
    if (exts.kind_is_a(link.kind, category))
        return true;
    for (const auto& mb : link.mixin_bases) {
        auto closure = exts.mixin_closure(mb.mixin);
        if (std::find(closure.begin(), closure.end(), category) != closure.end())
            return true;
    }
    return false;
}

inline bool eval_constraint(const ConstraintExpr& e, const Resource& entity,
                            const Configuration& cfg, const ExtensionSet& exts) {
    switch (e.op) {
    case ConstraintExpr::Op::ExistsLink: {
        for (const auto& link : cfg.links) {
            const bool attached = e.direction == LinkDirection::Out ? link.source == entity.id
                                                                    : link.target == entity.id;
            if (!attached)
                continue;
            if (!link_matches_category(link, e.link_category, exts))
                continue;
            const std::string peer_id =
                e.direction == LinkDirection::Out ? link.target : link.source;
            const Resource* peer = cfg.find_resource(peer_id);
            if (!peer)
                continue;
            if (e.peer_mixin.empty() || peer_satisfies(*peer, e.peer_mixin, exts))
                return true;
        }
        return false;
    }
    case ConstraintExpr::Op::AttrMatches: {
        auto attrs = merged_attributes(entity);
        auto it = attrs.find(e.attr_name);
        if (it == attrs.end() || !it->second.is_string())
            return false;
        return std::regex_match(it->second.get<std::string>(), std::regex(e.pattern));
    }
    case ConstraintExpr::Op::And:
        for (const auto& o : e.operands)
            if (!eval_constraint(o, entity, cfg, exts))
                return false;
        return true;
    case ConstraintExpr::Op::Or:
        for (const auto& o : e.operands)
            if (eval_constraint(o, entity, cfg, exts))
                return true;
        return false;
    case ConstraintExpr::Op::Not:
        return !e.operands.empty() && !eval_constraint(e.operands.front(), entity, cfg, exts);
    }
    return false;
}

/// Attribute definitions visible on an entity: its kind chain plus the
/// depends closure of each carried mixin.
inline std::map<std::string, const AttributeDef*> visible_attribute_defs(const Resource& entity,
                                                                         const ExtensionSet& exts) {
    std::map<std::string, const AttributeDef*> defs;
    for (const auto& kref : exts.kind_chain(entity.kind))
        if (const Kind* k = exts.find_kind(kref))
            for (const auto& a : k->category.attributes)
                defs.emplace(a.name, &a);
    for (const auto& mb : entity.mixin_bases)
        for (const auto& mref : exts.mixin_closure(mb.mixin))
            if (const Mixin* m = exts.find_mixin(mref))
                for (const auto& a : m->category.attributes)
                    defs.emplace(a.name, &a);
    return defs;
}

inline void validate_entity(const Resource& entity, const Configuration& cfg,
                            const ExtensionSet& exts, ValidationReport& report) {
    const Kind* kind = exts.find_kind(entity.kind);
    if (!kind) {
        report.violations.push_back({entity.id, "kind", "unresolved kind " + entity.kind});
        return;
    }
    for (const auto& mb : entity.mixin_bases) {
        const Mixin* m = exts.find_mixin(mb.mixin);
        if (!m) {
            report.violations.push_back({entity.id, "mixin", "unresolved mixin " + mb.mixin});
            continue;
        }
        // the mixin's anchor (if any) must admit this entity's kind
        auto anchors = exts.anchor_kinds(mb.mixin);
        if (!anchors.empty()) {
            bool admitted = false;
            for (const auto& a : anchors)
                if (exts.kind_is_a(entity.kind, a))
                    admitted = true;
            if (!admitted)
                report.violations.push_back(
                    {entity.id, m->category.term,
                     "mixin " + mb.mixin + " does not apply to kind " + entity.kind});
        }
    }

    // attribute declaredness and datatype conformance
    auto defs = visible_attribute_defs(entity, exts);
    auto resolver = exts.datatype_resolver();
    auto check_values = [&](const std::map<std::string, Json>& values, const std::string& where) {
        for (const auto& [name, value] : values) {
            auto it = defs.find(name);
            if (it == defs.end()) {
                report.violations.push_back(
                    {entity.id, name, "attribute " + name + " not declared for " + where});
                continue;
            }
            const DataType* dt = resolver(it->second->datatype);
            if (!dt || !check_datatype(value, *dt, resolver))
                report.violations.push_back(
                    {entity.id, name,
                     "value " + value.dump() + " does not conform to " + it->second->datatype});
        }
    };
    check_values(entity.attribute_values, entity.kind);
    for (const auto& mb : entity.mixin_bases)
        check_values(mb.attribute_values, mb.mixin);

    // constraints from the full mixin closure
    std::set<MixinRef> seen;
    for (const auto& mb : entity.mixin_bases) {
        for (const auto& mref : exts.mixin_closure(mb.mixin)) {
            if (!seen.insert(mref).second)
                continue;
            const Mixin* m = exts.find_mixin(mref);
            if (!m)
                continue;
            for (const auto& c : m->constraints)
                if (!eval_constraint(c.body, entity, cfg, exts))
                    report.violations.push_back(
                        {entity.id, c.name, "constraint " + c.name + " violated (" + mref + ")"});
        }
    }
}

} // namespace detail

/// Checks a configuration against the loaded extension set. Problems are
/// report entries, never exceptions; an empty report means the configuration
/// is valid.
inline ValidationReport validate_configuration(const Configuration& cfg,
                                               const ExtensionSet& exts) {
    ValidationReport report;

    std::set<std::string> ids;
    auto check_id = [&](const std::string& id) {
        if (!ids.insert(id).second)
            report.violations.push_back({id, "id", "duplicate entity id " + id});
    };
    for (const auto& r : cfg.resources)
        check_id(r.id);
    for (const auto& l : cfg.links)
        check_id(l.id);

    for (const auto& l : cfg.links) {
        if (!cfg.find_resource(l.source))
            report.violations.push_back(
                {l.id, "source", "link source " + l.source + " not in configuration"});
        if (!cfg.find_resource(l.target))
            report.violations.push_back(
                {l.id, "target", "link target " + l.target + " not in configuration"});
    }

    for (const auto& r : cfg.resources)
        detail::validate_entity(r, cfg, exts, report);
    for (const auto& l : cfg.links)
        detail::validate_entity(l, cfg, exts, report);

    return report;
}

} // namespace tosca2occi::occi
