#pragma once

#include "tosca2occi/mapping/type_mapper.hpp"
#include "tosca2occi/occi/validate.hpp"
#include "tosca2occi/tosca/model.hpp"

// Modeling-level mapping: turns a parsed topology into an OCCI configuration
// against the generated extension. Node templates become resources of their
// mixin's anchor kind, requirement bindings become links, one application
// resource is synthesized per topology and wired to every component.

namespace tosca2occi::mapping {

/// Deterministic ids: urn:tosca:<topology>:<template>. Synthesized entities
/// use the reserved suffixes ":app" and ":link:<n>".
inline std::map<std::string, std::string> assign_ids(const tosca::Topology& topo) {
    std::map<std::string, std::string> ids;
    for (const auto& nt : topo.node_templates) {
        if (ids.count(nt.name))
            throw DuplicateTemplateError("template '" + nt.name + "' occurs twice");
        ids[nt.name] = "urn:tosca:" + topo.name + ":" + nt.name;
    }
    for (const auto& rt : topo.relationship_templates) {
        if (ids.count(rt.name))
            throw DuplicateTemplateError("template '" + rt.name + "' occurs twice");
        ids[rt.name] = "urn:tosca:" + topo.name + ":" + rt.name;
    }
    return ids;
}

namespace detail {

inline const occi::Mixin* require_mixin(const occi::ExtensionSet& exts,
                                        const std::string& type_name) {
    const occi::Mixin* m = exts.find_mixin(tosca_mixin_ref(type_name));
    if (!m)
        throw UnmappedTemplateError("no mixin for TOSCA type '" + type_name + "'");
    return m;
}

inline occi::KindRef anchor_of(const occi::ExtensionSet& exts, const std::string& type_name) {
    auto anchors = exts.anchor_kinds(tosca_mixin_ref(type_name));
    if (anchors.size() != 1)
        throw UnmappedTemplateError("type '" + type_name + "' resolves to " +
                                    std::to_string(anchors.size()) +
                                    " anchor kinds, expected exactly one");
    return anchors.front();
}

/// Validates one mixin-base value set against the attribute definitions
/// visible through the mixin's depends closure.
inline void check_values(const occi::ExtensionSet& exts, const occi::MixinRef& mixin,
                         const std::map<std::string, occi::Json>& values,
                         const std::string& where) {
    std::map<std::string, const occi::AttributeDef*> defs;
    for (const auto& mref : exts.mixin_closure(mixin))
        if (const occi::Mixin* m = exts.find_mixin(mref))
            for (const auto& a : m->category.attributes)
                defs.emplace(a.name, &a);
    auto resolver = exts.datatype_resolver();
    for (const auto& [name, value] : values) {
        auto it = defs.find(name);
        if (it == defs.end())
            throw AttributeValidationError("attribute '" + name + "' on " + where +
                                           " is not declared by " + mixin +
                                           " or its dependencies");
        const occi::DataType* dt = resolver(it->second->datatype);
        if (!dt || !occi::check_datatype(value, *dt, resolver))
            throw AttributeValidationError("value " + value.dump() + " for '" + name + "' on " +
                                           where + " does not conform to '" +
                                           it->second->datatype + "'");
    }
}

inline std::string resolve_binding_relationship(const tosca::RequirementBinding& binding,
                                                const tosca::NodeTemplate& tmpl,
                                                const tosca::TypeRegistry& registry) {
    if (!binding.relationship.empty())
        return binding.relationship;
    for (const auto& req : registry.effective_requirements(tmpl.type_name))
        if (req.name == binding.name && !req.relationship.empty())
            return req.relationship;
    return "tosca.relationships.DependsOn";
}

} // namespace detail

/// Table-3 instantiation. `ext` is the generated TOSCA extension, already
/// linked into `exts` together with its imports.
inline occi::Configuration generate_configuration(const tosca::Topology& topo,
                                                  const occi::Extension& ext,
                                                  const occi::ExtensionSet& exts,
                                                  const tosca::TypeRegistry& registry) {
    occi::Configuration cfg;
    cfg.use = ext.imports;
    cfg.use.push_back(ext.name);

    auto ids = assign_ids(topo);
    const std::string app_id = "urn:tosca:" + topo.name + ":app";

    // the synthesized application resource comes first
    occi::Resource app;
    app.id = app_id;
    app.kind = kinds::application;
    app.title = topo.name;
    cfg.resources.push_back(app);

    // node templates -> resources with one mixin base each
    for (const auto& nt : topo.node_templates) {
        if (!registry.contains(nt.type_name))
            throw UnmappedTemplateError("template '" + nt.name + "' uses unknown type '" +
                                        nt.type_name + "'");
        detail::require_mixin(exts, nt.type_name);

        occi::Resource r;
        r.id = ids.at(nt.name);
        r.kind = detail::anchor_of(exts, nt.type_name);
        r.title = nt.name;

        occi::MixinBase mb;
        mb.mixin = tosca_mixin_ref(nt.type_name);
        for (const auto& [k, v] : nt.properties)
            mb.attribute_values[k] = v;
        for (const auto& [cap, props] : nt.capability_properties)
            for (const auto& [k, v] : props)
                mb.attribute_values[cap + "." + k] = v;
        detail::check_values(exts, mb.mixin, mb.attribute_values, "template '" + nt.name + "'");
        r.mixin_bases.push_back(std::move(mb));
        cfg.resources.push_back(std::move(r));
    }

    auto kind_of_template = [&](const std::string& name) -> occi::KindRef {
        auto id = ids.find(name);
        if (id != ids.end())
            for (const auto& r : cfg.resources)
                if (r.id == id->second)
                    return r.kind;
        throw DanglingBindingError("binding targets unknown template '" + name + "'");
    };

    int c_counter = 0;
    auto make_link = [&](const std::string& label, const occi::KindRef& kind,
                         const std::string& source, const std::string& target) {
        occi::Link l;
        l.id = "urn:tosca:" + topo.name + ":link:" + label;
        l.kind = kind;
        l.title = label;
        l.source = source;
        l.target = target;
        return l;
    };

    // application -> component links, in template declaration order
    for (const auto& nt : topo.node_templates) {
        if (!exts.kind_is_a(kind_of_template(nt.name), kinds::component))
            continue;
        ++c_counter;
        cfg.links.push_back(
            make_link("c" + std::to_string(c_counter), kinds::componentlink, app_id,
                      ids.at(nt.name)));
    }

    // requirement bindings: compute targets become placements, everything
    // else a link of the relationship mixin's anchor kind
    struct PendingPlacement {
        std::string source, target;
    };
    std::vector<PendingPlacement> placements;
    for (const auto& nt : topo.node_templates) {
        for (const auto& binding : nt.requirements) {
            const auto target_kind = kind_of_template(binding.target);
            if (exts.kind_is_a(target_kind, kinds::compute)) {
                placements.push_back({ids.at(nt.name), ids.at(binding.target)});
                continue;
            }
            const std::string rel = detail::resolve_binding_relationship(binding, nt, registry);
            detail::require_mixin(exts, rel);
            ++c_counter;
            auto link = make_link("c" + std::to_string(c_counter), detail::anchor_of(exts, rel),
                                  ids.at(nt.name), ids.at(binding.target));
            link.mixin_bases.push_back({tosca_mixin_ref(rel), {}});
            cfg.links.push_back(std::move(link));
        }
    }

    // explicit relationship templates keep their own names
    for (const auto& rt : topo.relationship_templates) {
        detail::require_mixin(exts, rt.type_name);
        occi::Link l;
        l.id = ids.at(rt.name);
        l.kind = detail::anchor_of(exts, rt.type_name);
        l.title = rt.name;
        l.source = ids.at(rt.source);
        l.target = ids.at(rt.target);
        occi::MixinBase mb;
        mb.mixin = tosca_mixin_ref(rt.type_name);
        for (const auto& [k, v] : rt.properties)
            mb.attribute_values[k] = v;
        detail::check_values(exts, mb.mixin, mb.attribute_values,
                             "relationship template '" + rt.name + "'");
        l.mixin_bases.push_back(std::move(mb));
        cfg.links.push_back(std::move(l));
    }

    int p_counter = 0;
    for (const auto& p : placements) {
        ++p_counter;
        cfg.links.push_back(
            make_link("p" + std::to_string(p_counter), kinds::placementlink, p.source, p.target));
    }

    return cfg;
}

} // namespace tosca2occi::mapping
