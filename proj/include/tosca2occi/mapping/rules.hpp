#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tosca2occi/occi/model.hpp"

namespace tosca2occi::mapping {

namespace schemes {
inline constexpr const char* core = "http://schemas.ogf.org/occi/core#";
inline constexpr const char* infrastructure = "http://schemas.ogf.org/occi/infrastructure#";
inline constexpr const char* modmacao = "http://schemas.modmacao.org/modmacao#";
inline constexpr const char* sla = "http://schemas.ogf.org/occi/sla#";
inline constexpr const char* tosca = "http://occiware.org/tosca#";
inline constexpr const char* psm = "http://occiware.org/psm#";
} // namespace schemes

namespace kinds {
inline const std::string resource = std::string(schemes::core) + "resource";
inline const std::string link = std::string(schemes::core) + "link";
inline const std::string compute = std::string(schemes::infrastructure) + "compute";
inline const std::string network = std::string(schemes::infrastructure) + "network";
inline const std::string storage = std::string(schemes::infrastructure) + "storage";
inline const std::string storagelink = std::string(schemes::infrastructure) + "storagelink";
inline const std::string networkinterface =
    std::string(schemes::infrastructure) + "networkinterface";
inline const std::string application = std::string(schemes::modmacao) + "application";
inline const std::string component = std::string(schemes::modmacao) + "component";
inline const std::string componentlink = std::string(schemes::modmacao) + "componentlink";
inline const std::string placementlink = std::string(schemes::modmacao) + "placementlink";
} // namespace kinds

/// Turns a dotted TOSCA name into a valid OCCI category term:
/// "tosca.nodes.Compute" -> "tosca_nodes_Compute".
inline std::string mangle_name(const std::string& tosca_name) {
    std::string out = tosca_name;
    for (auto& c : out)
        if (c == '.')
            c = '_';
    return out;
}

/// Fully qualified mixin ref for a TOSCA type name in the generated extension.
inline occi::MixinRef tosca_mixin_ref(const std::string& tosca_name) {
    return schemes::tosca + mangle_name(tosca_name);
}

/// One row of the builtin mapping table: a TOSCA concept and its fixed OCCI
/// target. Rules cover the anchors and special dependencies that plain
/// derived_from inheritance cannot produce.
struct MappingRule {
    std::string tosca_name;
    std::vector<occi::KindRef> applies;      // mixin applied to kind(s)
    std::vector<std::string> extra_depends;  // additional TOSCA type dependencies
    std::string datatype_variant;            // "short" overrides the record mapping
    std::string note;
};

struct RuleTable {
    std::vector<MappingRule> rules;

    const MappingRule* find(const std::string& tosca_name) const {
        for (const auto& r : rules)
            if (r.tosca_name == tosca_name)
                return &r;
        return nullptr;
    }

    /// The builtin table: normative-type anchors, the special dual
    /// dependencies, the datatype exceptions and the interface anchors.
    static RuleTable builtin() {
        RuleTable t;
        auto rule = [&](std::string name, std::vector<occi::KindRef> applies,
                        std::vector<std::string> extra = {}, std::string variant = "",
                        std::string note = "") {
            t.rules.push_back({std::move(name), std::move(applies), std::move(extra),
                               std::move(variant), std::move(note)});
        };

        // roots carry no anchor of their own
        rule("tosca.nodes.Root", {});
        rule("tosca.relationships.Root", {});
        rule("tosca.capabilities.Root", {});

        // node types
        rule("tosca.nodes.Compute", {kinds::compute});
        rule("tosca.nodes.BlockStorage", {kinds::storage});
        rule("tosca.nodes.ObjectStorage", {kinds::storage});
        rule("tosca.nodes.SoftwareComponent", {kinds::component});
        rule("tosca.nodes.WebApplication", {kinds::component});
        rule("tosca.nodes.Database", {kinds::component});
        // DBMS keeps its inherited SoftwareComponent dependency and adds Database
        rule("tosca.nodes.DBMS", {}, {"tosca.nodes.Database"});
        rule("tosca.nodes.LoadBalancer", {kinds::resource});
        rule("tosca.nodes.container.Application", {kinds::component});
        rule("tosca.nodes.network.Network", {kinds::network});
        rule("tosca.nodes.network.Port", {kinds::network});

        // relationship types
        rule("tosca.relationships.AttachesTo", {kinds::storagelink});
        rule("tosca.relationships.ConnectsTo", {kinds::componentlink});
        rule("tosca.relationships.DependsOn", {kinds::componentlink});
        rule("tosca.relationships.HostedOn", {kinds::componentlink});

        // interface types
        rule("tosca.interfaces.node.lifecycle.Standard", {kinds::resource});
        rule("tosca.interfaces.relationship.Configure", {kinds::componentlink});

        // datatype exception
        rule("tosca.datatypes.network.PortSpec", {}, {}, "short");

        return t;
    }
};

} // namespace tosca2occi::mapping
