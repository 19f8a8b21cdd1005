#pragma once

#include "tosca2occi/errors.hpp"
#include "tosca2occi/mapping/rules.hpp"
#include "tosca2occi/orch/diff.hpp"

// Provisioning order graph: dependencies between the entities to be created,
// derived from the kind of links between them. Updated and existing entities
// are not part of the graph.

namespace tosca2occi::orch {

struct ProvisioningOrderGraph {
    struct Edge {
        std::string from; // the dependent
        std::string to;   // the dependency
        std::string reason; // link-endpoint | placement | connects | hosted | depends
    };
    std::vector<std::string> nodes; // sorted entity ids, to-create only
    std::vector<Edge> edges;

    bool has_node(const std::string& id) const {
        return std::binary_search(nodes.begin(), nodes.end(), id);
    }

    std::vector<std::string> dependencies_of(const std::string& id) const {
        std::vector<std::string> out;
        for (const auto& e : edges)
            if (e.from == id)
                out.push_back(e.to);
        return out;
    }
};

namespace detail {

inline std::string link_reason(const occi::Link& link, const occi::ExtensionSet& exts) {
    if (exts.kind_is_a(link.kind, mapping::kinds::placementlink))
        return "placement";
    for (const auto& mb : link.mixin_bases) {
        auto closure = exts.mixin_closure(mb.mixin);
        auto carries = [&](const char* type_name) {
            return std::find(closure.begin(), closure.end(), mapping::tosca_mixin_ref(type_name)) !=
                   closure.end();
        };
        if (carries("tosca.relationships.HostedOn"))
            return "hosted";
        if (carries("tosca.relationships.ConnectsTo"))
            return "connects";
        if (carries("tosca.relationships.DependsOn"))
            return "depends";
    }
    return "";
}

inline void cycle_check(const ProvisioningOrderGraph& g) {
    std::map<std::string, std::vector<std::string>> deps;
    for (const auto& e : g.edges)
        deps[e.from].push_back(e.to);
    std::map<std::string, int> color; // 0 white, 1 grey, 2 black
    std::vector<std::string> stack;
    std::function<void(const std::string&)> dfs = [&](const std::string& n) {
        color[n] = 1;
        stack.push_back(n);
        for (const auto& d : deps[n]) {
            if (color[d] == 1) {
                std::string cycle = d;
                for (auto it = stack.rbegin(); it != stack.rend() && *it != d; ++it)
                    cycle += " <- " + *it;
                cycle += " <- " + d;
                throw CyclicDependencyError("provisioning order graph has a cycle: " + cycle);
            }
            if (color[d] == 0)
                dfs(d);
        }
        stack.pop_back();
        color[n] = 2;
    };
    for (const auto& n : g.nodes)
        if (color[n] == 0)
            dfs(n);
}

} // namespace detail

/// Nodes are the entities to create. Every link depends on both endpoints;
/// placement, hosted, connects and depends links additionally order their
/// endpoint resources (the source waits for the target). Throws
/// CyclicDependencyError with the offending cycle listed.
inline ProvisioningOrderGraph build_graph(const DiffResult& diff,
                                          const occi::Configuration& desired,
                                          const occi::ExtensionSet& exts) {
    ProvisioningOrderGraph g;
    for (const auto& e : diff.to_create)
        g.nodes.push_back(e.id);
    std::sort(g.nodes.begin(), g.nodes.end());

    auto add_edge = [&](const std::string& from, const std::string& to,
                        const std::string& reason) {
        if (!g.has_node(from) || !g.has_node(to) || from == to)
            return;
        for (const auto& e : g.edges)
            if (e.from == from && e.to == to && e.reason == reason)
                return;
        g.edges.push_back({from, to, reason});
    };

    for (const auto& link : desired.links) {
        if (g.has_node(link.id)) {
            add_edge(link.id, link.source, "link-endpoint");
            add_edge(link.id, link.target, "link-endpoint");
        }
        const std::string reason = detail::link_reason(link, exts);
        if (!reason.empty())
            add_edge(link.source, link.target, reason);
    }

    detail::cycle_check(g);
    return g;
}

/// Deterministic topological order: among the ready nodes the
/// lexicographically smallest goes first. Precondition: acyclic.
inline std::vector<std::string> topological_order(const ProvisioningOrderGraph& g) {
    std::map<std::string, std::set<std::string>> waiting_on;
    std::map<std::string, std::vector<std::string>> dependents;
    for (const auto& n : g.nodes)
        waiting_on[n];
    for (const auto& e : g.edges) {
        waiting_on[e.from].insert(e.to);
        dependents[e.to].push_back(e.from);
    }
    std::set<std::string> ready;
    for (const auto& [n, deps] : waiting_on)
        if (deps.empty())
            ready.insert(n);
    std::vector<std::string> order;
    while (!ready.empty()) {
        std::string n = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(n);
        for (const auto& d : dependents[n]) {
            waiting_on[d].erase(n);
            if (waiting_on[d].empty())
                ready.insert(d);
        }
    }
    if (order.size() != g.nodes.size())
        throw CyclicDependencyError("topological order does not cover the graph");
    return order;
}

} // namespace tosca2occi::orch
