#pragma once

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tosca2occi/errors.hpp"
#include "tosca2occi/occi/datatype.hpp"

namespace tosca2occi::occi {

/// Fully qualified category reference: scheme immediately followed by term,
/// e.g. "http://schemas.ogf.org/occi/infrastructure#compute".
using CategoryRef = std::string;
using KindRef = CategoryRef;
using MixinRef = CategoryRef;

struct AttributeDef {
    std::string name; // dotted identifier, e.g. "occi.compute.cores"
    DataTypeRef datatype;
    bool required = false;
    bool mutable_ = true;
    std::optional<Json> default_value;
    std::string description;
};

struct Category {
    std::string term;   // [A-Za-z_][A-Za-z0-9_]*
    std::string scheme; // URI ending in '#'
    std::string title;
    std::vector<AttributeDef> attributes;

    CategoryRef ref() const { return scheme + term; }
};

struct ActionDef {
    Category category; // term is the action name
    std::vector<AttributeDef> parameters;
};

enum class LinkDirection { In, Out };

/// Minimal constraint expression language: exists_link / attr_matches plus
/// boolean combinators. Serializable and directly evaluable on a configuration.
struct ConstraintExpr {
    enum class Op { ExistsLink, AttrMatches, And, Or, Not };

    Op op = Op::ExistsLink;
    // exists_link
    LinkDirection direction = LinkDirection::Out;
    CategoryRef link_category; // kind or mixin the link must carry
    MixinRef peer_mixin;       // mixin the peer entity must satisfy
    // attr_matches
    std::string attr_name;
    std::string pattern;
    // combinators
    std::vector<ConstraintExpr> operands;

    static ConstraintExpr exists_link(LinkDirection dir, CategoryRef link, MixinRef peer) {
        ConstraintExpr e;
        e.op = Op::ExistsLink;
        e.direction = dir;
        e.link_category = std::move(link);
        e.peer_mixin = std::move(peer);
        return e;
    }
    static ConstraintExpr attr_matches(std::string attr, std::string regex) {
        ConstraintExpr e;
        e.op = Op::AttrMatches;
        e.attr_name = std::move(attr);
        e.pattern = std::move(regex);
        return e;
    }
    static ConstraintExpr any_of(std::vector<ConstraintExpr> ops) {
        ConstraintExpr e;
        e.op = Op::Or;
        e.operands = std::move(ops);
        return e;
    }
    static ConstraintExpr all_of(std::vector<ConstraintExpr> ops) {
        ConstraintExpr e;
        e.op = Op::And;
        e.operands = std::move(ops);
        return e;
    }
    static ConstraintExpr negate(ConstraintExpr inner) {
        ConstraintExpr e;
        e.op = Op::Not;
        e.operands.push_back(std::move(inner));
        return e;
    }
};

struct ConstraintDef {
    std::string name;
    ConstraintExpr body;
};

enum class EntityRole { Resource, Link };

struct Kind {
    Category category;
    std::optional<KindRef> parent;
    std::vector<ActionDef> actions;
    EntityRole entity_role = EntityRole::Resource;
};

struct Mixin {
    Category category;
    std::vector<MixinRef> depends;
    std::vector<KindRef> applies;
    std::vector<ActionDef> actions;
    std::vector<ConstraintDef> constraints;
};

struct Extension {
    std::string name;
    std::string scheme;
    std::vector<std::string> imports; // extension names
    std::vector<Kind> kinds;
    std::vector<Mixin> mixins;
    std::vector<std::pair<std::string, DataType>> datatypes; // named, declaration order
};

/// Instance-level carrier of one mixin's attribute values on an entity.
struct MixinBase {
    MixinRef mixin;
    std::map<std::string, Json> attribute_values;
};

struct Resource {
    std::string id;
    KindRef kind;
    std::string title;
    std::vector<MixinBase> mixin_bases;
    std::map<std::string, Json> attribute_values;
};

struct Link : Resource {
    std::string source;
    std::string target;
};

struct Configuration {
    std::vector<std::string> use; // extension names
    std::vector<Resource> resources;
    std::vector<Link> links;

    const Resource* find_resource(const std::string& id) const {
        for (const auto& r : resources)
            if (r.id == id)
                return &r;
        return nullptr;
    }
    const Link* find_link(const std::string& id) const {
        for (const auto& l : links)
            if (l.id == id)
                return &l;
        return nullptr;
    }
};

/// Flat view of an entity's own attributes plus all mixin-base values.
/// Mixin-base values win over entity attributes on name collision.
inline std::map<std::string, Json> merged_attributes(const Resource& entity) {
    std::map<std::string, Json> out = entity.attribute_values;
    for (const auto& mb : entity.mixin_bases)
        for (const auto& [k, v] : mb.attribute_values)
            out[k] = v;
    return out;
}

inline std::vector<MixinRef> mixin_refs(const Resource& entity) {
    std::vector<MixinRef> out;
    out.reserve(entity.mixin_bases.size());
    for (const auto& mb : entity.mixin_bases)
        out.push_back(mb.mixin);
    return out;
}

inline bool valid_term(const std::string& term) {
    if (term.empty())
        return false;
    if (!(std::isalpha(static_cast<unsigned char>(term[0])) || term[0] == '_'))
        return false;
    return std::all_of(term.begin(), term.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

/// A linked set of extensions. Owns nothing beyond the Extension values;
/// after add() all cross-references in the added extension are guaranteed to
/// resolve and the mixin dependency graph is guaranteed acyclic.
class ExtensionSet {
public:
    ExtensionSet() = default;
    // the index maps point into extensions_, so copying would dangle;
    // moving a deque keeps element addresses stable
    ExtensionSet(const ExtensionSet&) = delete;
    ExtensionSet& operator=(const ExtensionSet&) = delete;
    ExtensionSet(ExtensionSet&&) = default;
    ExtensionSet& operator=(ExtensionSet&&) = default;

    const Extension& add(Extension ext) {
        for (const auto& e : extensions_)
            if (e.name == ext.name)
                throw LinkError("extension '" + ext.name + "' already loaded");
        for (const auto& imp : ext.imports)
            if (!find_extension(imp))
                throw LinkError("extension '" + ext.name + "' imports unknown extension '" + imp +
                                "'");
        extensions_.push_back(std::move(ext));
        try {
            index(extensions_.back());
            link_check(extensions_.back());
        } catch (...) {
            // keep the set consistent on failure
            deindex(extensions_.back());
            extensions_.pop_back();
            throw;
        }
        return extensions_.back();
    }

    const Extension* find_extension(const std::string& name) const {
        for (const auto& e : extensions_)
            if (e.name == name)
                return &e;
        return nullptr;
    }

    const std::deque<Extension>& extensions() const { return extensions_; }

    const Kind* find_kind(const KindRef& ref) const {
        auto it = kinds_.find(ref);
        return it == kinds_.end() ? nullptr : it->second;
    }

    const Mixin* find_mixin(const MixinRef& ref) const {
        auto it = mixins_.find(ref);
        return it == mixins_.end() ? nullptr : it->second;
    }

    const DataType* find_datatype(const DataTypeRef& name) const {
        auto it = datatypes_.find(name);
        return it == datatypes_.end() ? nullptr : it->second;
    }

    /// Extension owning the category with this ref, or nullptr.
    const Extension* owner_of(const CategoryRef& ref) const {
        for (const auto& e : extensions_)
            if (ref.starts_with(e.scheme) && (find_kind(ref) || find_mixin(ref)))
                return &e;
        return nullptr;
    }

    DataTypeResolver datatype_resolver() const {
        return [this](const DataTypeRef& name) { return find_datatype(name); };
    }

    /// Kind parent chain starting at `ref` (inclusive), root last.
    std::vector<KindRef> kind_chain(const KindRef& ref) const {
        std::vector<KindRef> chain;
        const Kind* k = find_kind(ref);
        while (k) {
            chain.push_back(k->category.ref());
            if (!k->parent)
                break;
            k = find_kind(*k->parent);
        }
        return chain;
    }

    /// Transitive depends closure of a mixin, including the mixin itself.
    /// Deterministic order: depth-first in declaration order.
    std::vector<MixinRef> mixin_closure(const MixinRef& ref) const {
        std::vector<MixinRef> out;
        std::set<MixinRef> seen;
        closure_walk(ref, seen, out);
        return out;
    }

    /// The kinds referenced by nonempty applies lists in the mixin's depends
    /// closure. For a well-formed generated mixin this has exactly one entry.
    std::vector<KindRef> anchor_kinds(const MixinRef& ref) const {
        std::vector<KindRef> anchors;
        for (const auto& m : mixin_closure(ref)) {
            const Mixin* mx = find_mixin(m);
            if (!mx)
                continue;
            for (const auto& k : mx->applies)
                if (std::find(anchors.begin(), anchors.end(), k) == anchors.end())
                    anchors.push_back(k);
        }
        return anchors;
    }

    /// True when `kind` equals `target` or derives from it.
    bool kind_is_a(const KindRef& kind, const KindRef& target) const {
        auto chain = kind_chain(kind);
        return std::find(chain.begin(), chain.end(), target) != chain.end();
    }

private:
    void index(const Extension& ext) {
        for (const auto& k : ext.kinds) {
            auto ref = k.category.ref();
            if (kinds_.count(ref) || mixins_.count(ref))
                throw LinkError("duplicate category " + ref);
            kinds_[ref] = &k;
        }
        for (const auto& m : ext.mixins) {
            auto ref = m.category.ref();
            if (kinds_.count(ref) || mixins_.count(ref))
                throw LinkError("duplicate category " + ref);
            mixins_[ref] = &m;
        }
        for (const auto& [name, dt] : ext.datatypes) {
            if (datatypes_.count(name))
                throw LinkError("duplicate datatype name '" + name + "'");
            datatypes_[name] = &dt;
        }
    }

    void deindex(const Extension& ext) {
        for (const auto& k : ext.kinds)
            kinds_.erase(k.category.ref());
        for (const auto& m : ext.mixins)
            mixins_.erase(m.category.ref());
        for (const auto& [name, dt] : ext.datatypes)
            datatypes_.erase(name);
    }

    void link_check(const Extension& ext) const {
        auto check_attrs = [&](const std::vector<AttributeDef>& attrs, const std::string& where) {
            for (const auto& a : attrs) {
                const DataType* dt = find_datatype(a.datatype);
                if (!dt)
                    throw LinkError("unresolved datatype '" + a.datatype + "' on " + where + "." +
                                    a.name);
                if (a.default_value &&
                    !check_datatype(*a.default_value, *dt, datatype_resolver()))
                    throw LinkError("default for " + where + "." + a.name +
                                    " does not validate against its datatype");
            }
        };
        for (const auto& k : ext.kinds) {
            if (!valid_term(k.category.term))
                throw ParseError("invalid kind term '" + k.category.term + "'");
            if (k.parent && !find_kind(*k.parent))
                throw LinkError("kind " + k.category.ref() + " has unresolved parent " +
                                *k.parent);
            check_attrs(k.category.attributes, k.category.term);
            // parent chain must be acyclic and reach a root kind
            std::set<KindRef> seen;
            const Kind* cur = &k;
            while (cur->parent) {
                if (!seen.insert(cur->category.ref()).second)
                    throw CycleError("kind parent cycle at " + cur->category.ref());
                cur = find_kind(*cur->parent);
            }
        }
        for (const auto& m : ext.mixins) {
            if (!valid_term(m.category.term))
                throw ParseError("invalid mixin term '" + m.category.term + "'");
            for (const auto& d : m.depends)
                if (!find_mixin(d))
                    throw LinkError("mixin " + m.category.ref() + " depends on unresolved " + d);
            for (const auto& a : m.applies)
                if (!find_kind(a))
                    throw LinkError("mixin " + m.category.ref() + " applies to unresolved " + a);
            check_attrs(m.category.attributes, m.category.term);
        }
        // depends acyclicity over the whole set, DFS with colors
        std::map<MixinRef, int> color; // 0 white, 1 grey, 2 black
        for (const auto& m : ext.mixins)
            depends_dfs(m.category.ref(), color);
    }

    void depends_dfs(const MixinRef& ref, std::map<MixinRef, int>& color) const {
        auto& c = color[ref];
        if (c == 1)
            throw CycleError("mixin depends cycle at " + ref);
        if (c == 2)
            return;
        c = 1;
        if (const Mixin* m = find_mixin(ref))
            for (const auto& d : m->depends)
                depends_dfs(d, color);
        color[ref] = 2;
    }

    void closure_walk(const MixinRef& ref, std::set<MixinRef>& seen,
                      std::vector<MixinRef>& out) const {
        if (!seen.insert(ref).second)
            return;
        out.push_back(ref);
        if (const Mixin* m = find_mixin(ref))
            for (const auto& d : m->depends)
                closure_walk(d, seen, out);
    }

    // deque: element addresses stay stable across add(), the index maps hold
    // pointers into it
    std::deque<Extension> extensions_;
    std::map<CategoryRef, const Kind*> kinds_;
    std::map<CategoryRef, const Mixin*> mixins_;
    std::map<std::string, const DataType*> datatypes_;
};

} // namespace tosca2occi::occi
