#pragma once

#include <map>
#include <set>

#include "tosca2occi/errors.hpp"
#include "tosca2occi/tosca/model.hpp"

namespace tosca2occi::tosca {

/// Type registry closed under derived_from. Effective members are computed
/// root-first so own declarations shadow inherited ones on name collision.
class TypeRegistry {
public:
    TypeRegistry() = default;

    /// Builds a registry from type definitions (builtins plus customs).
    /// Throws DuplicateTypeError, UnresolvedParentError or
    /// InheritanceCycleError.
    static TypeRegistry build(const std::vector<TypeDef>& defs) {
        TypeRegistry reg;
        for (const auto& d : defs) {
            if (d.name.empty())
                throw SchemaError("type with empty name");
            if (d.derived_from == d.name)
                throw InheritanceCycleError("type '" + d.name + "' derives from itself");
            if (!reg.types_.emplace(d.name, d).second)
                throw DuplicateTypeError("type '" + d.name + "' defined twice");
        }
        for (const auto& [name, d] : reg.types_) {
            if (!d.derived_from.empty() && !reg.types_.count(d.derived_from))
                throw UnresolvedParentError("type '" + name + "' derives from unknown '" +
                                            d.derived_from + "'");
        }
        for (const auto& [name, d] : reg.types_)
            reg.ancestry(name); // forces cycle detection everywhere
        return reg;
    }

    const TypeDef* find(const std::string& name) const {
        auto it = types_.find(name);
        return it == types_.end() ? nullptr : &it->second;
    }

    bool contains(const std::string& name) const { return types_.count(name) > 0; }

    /// All type names, sorted.
    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(types_.size());
        for (const auto& [name, d] : types_)
            out.push_back(name);
        return out;
    }

    /// Chain from the type itself up to its root, self first.
    std::vector<const TypeDef*> ancestry(const std::string& name) const {
        std::vector<const TypeDef*> chain;
        std::set<std::string> seen;
        const TypeDef* cur = find(name);
        while (cur) {
            if (!seen.insert(cur->name).second)
                throw InheritanceCycleError("derived_from cycle involving '" + cur->name + "'");
            chain.push_back(cur);
            if (cur->derived_from.empty())
                break;
            cur = find(cur->derived_from);
        }
        return chain;
    }

    bool derives_from(const std::string& name, const std::string& ancestor) const {
        for (const auto* t : ancestry(name))
            if (t->name == ancestor)
                return true;
        return false;
    }

    std::vector<PropertyDef> effective_properties(const std::string& name) const {
        return merge_members<PropertyDef>(name, [](const TypeDef& t) { return t.properties; },
                                          [](const PropertyDef& p) { return p.name; });
    }

    std::vector<PropertyDef> effective_attributes(const std::string& name) const {
        return merge_members<PropertyDef>(name, [](const TypeDef& t) { return t.attributes; },
                                          [](const PropertyDef& p) { return p.name; });
    }

    std::vector<RequirementDef> effective_requirements(const std::string& name) const {
        return merge_members<RequirementDef>(name,
                                             [](const TypeDef& t) { return t.requirements; },
                                             [](const RequirementDef& r) { return r.name; });
    }

    std::vector<std::pair<std::string, std::string>>
    effective_capabilities(const std::string& name) const {
        return merge_members<std::pair<std::string, std::string>>(
            name, [](const TypeDef& t) { return t.capabilities; },
            [](const std::pair<std::string, std::string>& c) { return c.first; });
    }

    std::vector<std::pair<std::string, std::vector<std::string>>>
    effective_interfaces(const std::string& name) const {
        return merge_members<std::pair<std::string, std::vector<std::string>>>(
            name, [](const TypeDef& t) { return t.interfaces; },
            [](const std::pair<std::string, std::vector<std::string>>& i) { return i.first; });
    }

private:
    /// Walks root -> self collecting members; later (more derived)
    /// declarations replace earlier ones with the same key, order of first
    /// appearance is kept.
    template <typename T, typename Getter, typename KeyFn>
    std::vector<T> merge_members(const std::string& name, Getter get, KeyFn key_of) const {
        auto chain = ancestry(name);
        std::vector<T> out;
        std::map<std::string, std::size_t> index;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            for (const auto& member : get(**it)) {
                auto key = key_of(member);
                auto found = index.find(key);
                if (found == index.end()) {
                    index[key] = out.size();
                    out.push_back(member);
                } else {
                    out[found->second] = member;
                }
            }
        }
        return out;
    }

    std::map<std::string, TypeDef> types_;
};

/// Spec operation: resolve a parsed type list against already-resolved
/// builtins into one closed registry.
inline TypeRegistry resolve_registry(const std::vector<TypeDef>& defs,
                                     const std::vector<TypeDef>& builtins = {}) {
    std::vector<TypeDef> all = builtins;
    all.insert(all.end(), defs.begin(), defs.end());
    return TypeRegistry::build(all);
}

} // namespace tosca2occi::tosca
