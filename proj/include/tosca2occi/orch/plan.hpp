#pragma once

#include "tosca2occi/occi/json_io.hpp"
#include "tosca2occi/orch/graph.hpp"

// Plan generation. Step order: deletes (links before their endpoint
// resources), updates, resource creates in topological order, link creates
// gated on compute activation, and finally a start action per affected
// application. Ties break lexicographically by entity id, so plans are
// deterministic.

namespace tosca2occi::orch {

enum class Verb { Create, Update, Delete, Action };

inline const char* to_string(Verb v) {
    switch (v) {
    case Verb::Create: return "CREATE";
    case Verb::Update: return "UPDATE";
    case Verb::Delete: return "DELETE";
    case Verb::Action: return "ACTION";
    }
    return "?";
}

struct StateGate {
    std::string entity_id;
    std::string required_state;
};

struct Request {
    Verb verb = Verb::Create;
    std::string entity_id;
    Json payload;            // CREATE: entity body; UPDATE: changed attributes
    std::string action_name; // ACTION only
    std::optional<StateGate> gate;
};

struct ProvisioningPlan {
    std::vector<Request> steps;
};

inline Json to_json(const Request& r) {
    Json j;
    j["verb"] = to_string(r.verb);
    j["entity"] = r.entity_id;
    j["payload"] = r.payload.is_null() ? Json::object() : r.payload;
    j["action"] = r.action_name.empty() ? Json() : Json(r.action_name);
    j["gate"] = r.gate ? Json{{"entity", r.gate->entity_id}, {"state", r.gate->required_state}}
                       : Json();
    return j;
}

inline Json to_json(const ProvisioningPlan& p) {
    Json arr = Json::array();
    for (const auto& s : p.steps)
        arr.push_back(to_json(s));
    return arr;
}

inline Request request_from_json(const Json& j) {
    Request r;
    const auto verb = j.at("verb").get<std::string>();
    r.verb = verb == "CREATE"   ? Verb::Create
             : verb == "UPDATE" ? Verb::Update
             : verb == "DELETE" ? Verb::Delete
                                : Verb::Action;
    r.entity_id = j.at("entity").get<std::string>();
    r.payload = j.value("payload", Json::object());
    if (j.contains("action") && !j.at("action").is_null())
        r.action_name = j.at("action").get<std::string>();
    if (j.contains("gate") && !j.at("gate").is_null())
        r.gate = StateGate{j.at("gate").at("entity").get<std::string>(),
                           j.at("gate").at("state").get<std::string>()};
    return r;
}

inline ProvisioningPlan plan_from_json(const Json& arr) {
    ProvisioningPlan p;
    for (const auto& j : arr)
        p.steps.push_back(request_from_json(j));
    return p;
}

namespace detail {

inline Json create_payload(const DiffEntry& e) {
    Json j;
    j["kind"] = e.kind;
    j["mixins"] = Json::array();
    for (const auto& mb : e.data.mixin_bases)
        j["mixins"].push_back(mb.mixin);
    j["attributes"] = Json::object();
    for (const auto& [k, v] : comparable_attributes(e.data))
        j["attributes"][k] = v;
    if (!e.data.title.empty())
        j["title"] = e.data.title;
    if (e.is_link) {
        j["source"] = e.data.source;
        j["target"] = e.data.target;
    }
    return j;
}

} // namespace detail

/// Sequences the diff against the provisioning order graph. Compute gates on
/// link creates establish infrastructure conformance before the action phase
/// starts: by the time the last link request went through, every compute a
/// component sits on reported active.
inline ProvisioningPlan plan(const DiffResult& diff, const ProvisioningOrderGraph& graph,
                             const occi::ExtensionSet& exts) {
    ProvisioningPlan out;

    // (1) deletes: links first, then resources, each lexicographic
    std::vector<const DiffEntry*> del_links, del_resources;
    for (const auto& e : diff.to_delete)
        (e.is_link ? del_links : del_resources).push_back(&e);
    auto by_id = [](const DiffEntry* a, const DiffEntry* b) { return a->id < b->id; };
    std::sort(del_links.begin(), del_links.end(), by_id);
    std::sort(del_resources.begin(), del_resources.end(), by_id);
    for (const auto* e : del_links)
        out.steps.push_back({Verb::Delete, e->id, {}, "", {}});
    for (const auto* e : del_resources)
        out.steps.push_back({Verb::Delete, e->id, {}, "", {}});

    // (2) updates, lexicographic
    auto updates = diff.to_update;
    std::sort(updates.begin(), updates.end(),
              [](const auto& a, const auto& b) { return a.first.id < b.first.id; });
    for (const auto& [e, changed] : updates) {
        Json payload;
        payload["attributes"] = Json::object();
        for (const auto& [k, v] : changed)
            payload["attributes"][k] = v;
        out.steps.push_back({Verb::Update, e.id, payload, "", {}});
    }

    // (3) resource creates in topological order, (4) link creates after
    auto order = topological_order(graph);
    auto is_compute = [&](const occi::KindRef& kind) {
        return exts.kind_is_a(kind, mapping::kinds::compute);
    };
    std::map<std::string, occi::KindRef> kind_of;
    for (const auto& e : diff.to_create)
        kind_of[e.id] = e.kind;
    for (const auto& e : diff.unchanged)
        kind_of.emplace(e.id, e.kind);
    for (const auto& [e, changed] : diff.to_update)
        kind_of.emplace(e.id, e.kind);

    for (bool links_pass : {false, true}) {
        for (const auto& id : order) {
            const DiffEntry* e = diff.find_create(id);
            if (!e || e->is_link != links_pass)
                continue;
            Request req{Verb::Create, e->id, detail::create_payload(*e), "", {}};
            if (e->is_link) {
                // a link touching a compute waits for that compute to be active
                auto src_kind = kind_of.find(e->data.source);
                auto dst_kind = kind_of.find(e->data.target);
                if (src_kind != kind_of.end() && is_compute(src_kind->second))
                    req.gate = StateGate{e->data.source, "active"};
                else if (dst_kind != kind_of.end() && is_compute(dst_kind->second))
                    req.gate = StateGate{e->data.target, "active"};
            }
            out.steps.push_back(std::move(req));
        }
    }

    // (5) start each application the delta touches
    std::vector<std::string> app_ids;
    auto consider_app = [&](const DiffEntry& e, bool created) {
        if (!exts.kind_is_a(e.kind, mapping::kinds::application))
            return;
        bool touched = created;
        if (!touched) {
            // an existing application restarts when a component link of its
            // or a freshly created entity hangs off it
            for (const auto& c : diff.to_create)
                if (c.is_link && c.data.source == e.id)
                    touched = true;
        }
        if (touched)
            app_ids.push_back(e.id);
    };
    for (const auto& e : diff.to_create)
        consider_app(e, true);
    for (const auto& e : diff.unchanged)
        consider_app(e, false);
    for (const auto& [e, changed] : diff.to_update)
        consider_app(e, false);
    std::sort(app_ids.begin(), app_ids.end());
    app_ids.erase(std::unique(app_ids.begin(), app_ids.end()), app_ids.end());
    for (const auto& id : app_ids)
        out.steps.push_back({Verb::Action, id, {}, "start", {}});

    return out;
}

} // namespace tosca2occi::orch
