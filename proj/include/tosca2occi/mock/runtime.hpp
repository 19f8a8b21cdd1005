#pragma once

#include <chrono>
#include <mutex>

#include "tosca2occi/mock/fsm.hpp"
#include "tosca2occi/occi/validate.hpp"
#include "tosca2occi/orch/client.hpp"

// In-process simulated OCCI runtime. Maintains a runtime model with
// lifecycle FSMs per kind, assigns provider ids at creation, auto-activates
// infrastructure after a configurable simulated delay and interprets the
// application start action as a deploy/start cascade over component links in
// dependency order. All mutations are serialized through one mutex; the
// request log makes runs replayable.

namespace tosca2occi::mock {

using occi::Json;

struct FaultSpec {
    enum class Kind { HoldState, RejectCreate, DropAction };
    Kind kind = Kind::HoldState;
    std::string entity_id; // HoldState / DropAction
    int nth = 0;           // RejectCreate: which create fails, 1-based

    static FaultSpec from_json(const Json& j) {
        FaultSpec f;
        const auto k = j.at("kind").get<std::string>();
        f.kind = k == "hold-state"      ? Kind::HoldState
                 : k == "reject-create" ? Kind::RejectCreate
                                        : Kind::DropAction;
        f.entity_id = j.value("entity", "");
        f.nth = j.value("nth", 0);
        return f;
    }
};

struct RuntimeOptions {
    int activation_delay_ms = 20;
    bool deterministic = false; // zero delay, immediate activation
};

class MockRuntime {
public:
    using Options = RuntimeOptions;

    MockRuntime(const occi::ExtensionSet& exts, Options options = Options())
        : exts_(&exts), options_(options) {}

    // -- request surface ----------------------------------------------------

    void create(const std::string& id, const Json& payload) {
        std::scoped_lock lock(mu_);
        ++create_counter_;
        for (const auto& f : faults_)
            if (f.kind == FaultSpec::Kind::RejectCreate && f.nth == create_counter_)
                throw RequestError(500, "injected fault: create #" +
                                            std::to_string(create_counter_) + " rejected");
        if (entities_.count(id))
            throw RequestError(409, "entity " + id + " already exists");

        Entity e;
        e.id = id;
        e.kind = payload.value("kind", "");
        const occi::Kind* kind = exts_->find_kind(e.kind);
        if (!kind)
            throw RequestError(400, "unknown kind '" + e.kind + "'");
        e.is_link = kind->entity_role == occi::EntityRole::Link;
        e.title = payload.value("title", "");
        for (const auto& m : payload.value("mixins", Json::array())) {
            const auto ref = m.get<std::string>();
            if (!exts_->find_mixin(ref))
                throw RequestError(400, "unknown mixin '" + ref + "'");
            e.mixins.push_back(ref);
        }
        if (e.is_link) {
            e.source = payload.value("source", "");
            e.target = payload.value("target", "");
            if (!entities_.count(e.source) || !entities_.count(e.target))
                throw RequestError(409, "link " + id + " references a missing endpoint");
        } else if (payload.contains("source") || payload.contains("target")) {
            throw RequestError(400, "resource " + id + " cannot carry link endpoints");
        }
        const Json attrs = payload.value("attributes", Json::object());
        for (const auto& [k, v] : attrs.items()) {
            validate_attribute(e, k, v);
            e.attributes[k] = v;
        }

        const auto& fsm = fsms_.for_kind(e.kind, *exts_);
        e.state = fsm.initial;
        e.provider_id = "prov-" + std::to_string(++provider_counter_);
        if (!fsm.provisioned.empty()) {
            e.pending_state = fsm.provisioned;
            e.settle_at = now() + std::chrono::milliseconds(
                                      options_.deterministic ? 0 : options_.activation_delay_ms);
        }
        transitions_.emplace_back(e.id, e.state);
        entities_[id] = std::move(e);
        log_.push_back({{"op", "create"}, {"id", id}, {"payload", payload}});
        settle_locked();
    }

    void update(const std::string& id, const Json& attributes) {
        std::scoped_lock lock(mu_);
        settle_locked();
        auto it = entities_.find(id);
        if (it == entities_.end())
            throw RequestError(404, "unknown entity " + id);
        for (const auto& [k, v] : attributes.items()) {
            if (v.is_null()) {
                it->second.attributes.erase(k);
                continue;
            }
            validate_attribute(it->second, k, v);
            it->second.attributes[k] = v;
        }
        log_.push_back({{"op", "update"}, {"id", id}, {"payload", attributes}});
    }

    void remove(const std::string& id) {
        std::scoped_lock lock(mu_);
        settle_locked();
        auto it = entities_.find(id);
        if (it == entities_.end())
            throw RequestError(404, "unknown entity " + id);
        if (!it->second.is_link)
            for (const auto& [other_id, other] : entities_)
                if (other.is_link && (other.source == id || other.target == id))
                    throw RequestError(409, "entity " + id + " still referenced by link " +
                                                other_id);
        entities_.erase(it);
        log_.push_back({{"op", "delete"}, {"id", id}});
    }

    void action(const std::string& id, const std::string& name) {
        std::scoped_lock lock(mu_);
        settle_locked();
        auto it = entities_.find(id);
        if (it == entities_.end())
            throw RequestError(404, "unknown entity " + id);
        for (const auto& f : faults_)
            if (f.kind == FaultSpec::Kind::DropAction &&
                (f.entity_id.empty() || f.entity_id == id)) {
                log_.push_back({{"op", "action"}, {"id", id}, {"action", name}, {"dropped", true}});
                return;
            }
        if (name == "start" && exts_->kind_is_a(it->second.kind, mapping::kinds::application))
            start_application_locked(it->second);
        else
            apply_transition_locked(it->second, name);
        log_.push_back({{"op", "action"}, {"id", id}, {"action", name}});
    }

    Json get_entity(const std::string& id) {
        std::scoped_lock lock(mu_);
        settle_locked();
        auto it = entities_.find(id);
        if (it == entities_.end())
            throw RequestError(404, "unknown entity " + id);
        return entity_json_locked(it->second);
    }

    std::string state_of(const std::string& id) {
        std::scoped_lock lock(mu_);
        settle_locked();
        auto it = entities_.find(id);
        return it == entities_.end() ? "" : it->second.state;
    }

    /// Consistent point-in-time configuration including state attributes.
    occi::Configuration snapshot() {
        std::scoped_lock lock(mu_);
        settle_locked();
        occi::Configuration cfg;
        for (const auto& e : exts_->extensions())
            cfg.use.push_back(e.name);
        for (const auto& [id, e] : entities_) {
            if (e.is_link) {
                occi::Link l;
                fill_entity_locked(e, l);
                l.source = e.source;
                l.target = e.target;
                cfg.links.push_back(std::move(l));
            } else {
                occi::Resource r;
                fill_entity_locked(e, r);
                cfg.resources.push_back(std::move(r));
            }
        }
        return cfg;
    }

    void inject_fault(const FaultSpec& fault) {
        std::scoped_lock lock(mu_);
        faults_.push_back(fault);
    }

    void clear_faults() {
        std::scoped_lock lock(mu_);
        faults_.clear();
    }

    /// Applied mutating requests, in order.
    std::vector<Json> request_log() {
        std::scoped_lock lock(mu_);
        return log_;
    }

    /// Every state ever entered, in order: (entity id, state).
    std::vector<std::pair<std::string, std::string>> transition_log() {
        std::scoped_lock lock(mu_);
        settle_locked();
        return transitions_;
    }

    /// Blocks until pending auto-activations are due, then applies them.
    void settle() {
        std::scoped_lock lock(mu_);
        settle_locked();
    }

private:
    struct Entity {
        std::string id;
        occi::KindRef kind;
        bool is_link = false;
        std::string title;
        std::vector<occi::MixinRef> mixins;
        std::map<std::string, Json> attributes;
        std::string source, target;
        std::string state;
        std::string provider_id;
        std::string pending_state; // auto-activation target, empty when settled
        std::chrono::steady_clock::time_point settle_at{};
    };

    static std::chrono::steady_clock::time_point now() {
        return std::chrono::steady_clock::now();
    }

    bool held(const std::string& id) const {
        for (const auto& f : faults_)
            if (f.kind == FaultSpec::Kind::HoldState && f.entity_id == id)
                return true;
        return false;
    }

    void settle_locked() {
        const auto t = now();
        for (auto& [id, e] : entities_) {
            if (e.pending_state.empty() || held(id))
                continue;
            if (t >= e.settle_at) {
                e.state = e.pending_state;
                e.pending_state.clear();
                transitions_.emplace_back(id, e.state);
            }
        }
    }

    void validate_attribute(const Entity& e, const std::string& name, const Json& value) const {
        // runtime-owned attributes are not writable from outside
        if (name == "state" || name == "providerid")
            throw RequestError(400, "attribute '" + name + "' is runtime-owned");
        std::map<std::string, const occi::AttributeDef*> defs;
        for (const auto& kref : exts_->kind_chain(e.kind))
            if (const occi::Kind* k = exts_->find_kind(kref))
                for (const auto& a : k->category.attributes)
                    defs.emplace(a.name, &a);
        for (const auto& m : e.mixins)
            for (const auto& mref : exts_->mixin_closure(m))
                if (const occi::Mixin* mx = exts_->find_mixin(mref))
                    for (const auto& a : mx->category.attributes)
                        defs.emplace(a.name, &a);
        auto it = defs.find(name);
        if (it == defs.end())
            return; // undeclared attributes are stored as-is
        auto resolver = exts_->datatype_resolver();
        const occi::DataType* dt = resolver(it->second->datatype);
        if (!dt || !occi::check_datatype(value, *dt, resolver))
            throw RequestError(400, "value " + value.dump() + " for '" + name +
                                        "' fails datatype validation");
    }

    void apply_transition_locked(Entity& e, const std::string& action) {
        const auto& fsm = fsms_.for_kind(e.kind, *exts_);
        const std::string* next = fsm.next(e.state, action);
        if (!next)
            throw RequestError(409, "action '" + action + "' invalid in state '" + e.state +
                                        "' for " + e.id);
        e.pending_state.clear(); // an explicit action overrides auto-activation
        if (*next != e.state)
            transitions_.emplace_back(e.id, *next);
        e.state = *next;
    }

    /// MoDMaCAO-style composite: deploy and start every component connected
    /// via component links, respecting hosted/connects/depends order between
    /// components, then bring the application itself up.
    void start_application_locked(Entity& app) {
        std::vector<std::string> components;
        for (const auto& [id, e] : entities_)
            if (e.is_link && e.source == app.id &&
                exts_->kind_is_a(e.kind, mapping::kinds::componentlink))
                if (entities_.count(e.target))
                    components.push_back(e.target);
        std::sort(components.begin(), components.end());

        // every component's hosting compute must be active first
        for (const auto& cid : components)
            for (const auto& [lid, l] : entities_)
                if (l.is_link && l.source == cid &&
                    exts_->kind_is_a(l.kind, mapping::kinds::placementlink)) {
                    auto host = entities_.find(l.target);
                    if (host != entities_.end() && host->second.state != "active")
                        throw RequestError(409, "cannot start " + app.id + ": compute " +
                                                    l.target + " is " + host->second.state);
                }

        // dependency order: the source of a hosted/connects/depends link
        // starts after its target
        std::map<std::string, std::set<std::string>> waits;
        for (const auto& c : components)
            waits[c];
        for (const auto& [lid, l] : entities_) {
            if (!l.is_link || !waits.count(l.source) || !waits.count(l.target))
                continue;
            for (const auto& m : l.mixins) {
                auto closure = exts_->mixin_closure(m);
                for (const char* t : {"tosca.relationships.HostedOn",
                                      "tosca.relationships.ConnectsTo",
                                      "tosca.relationships.DependsOn"})
                    if (std::find(closure.begin(), closure.end(), mapping::tosca_mixin_ref(t)) !=
                        closure.end())
                        waits[l.source].insert(l.target);
            }
        }
        std::vector<std::string> order;
        std::set<std::string> done;
        while (order.size() < waits.size()) {
            std::string picked;
            for (const auto& [c, deps] : waits) {
                if (done.count(c))
                    continue;
                bool ready = std::all_of(deps.begin(), deps.end(),
                                         [&](const std::string& d) { return done.count(d) > 0; });
                if (ready) {
                    picked = c;
                    break;
                }
            }
            if (picked.empty())
                throw RequestError(409, "component dependency cycle under " + app.id);
            done.insert(picked);
            order.push_back(picked);
        }

        for (const auto& cid : order) {
            Entity& c = entities_.at(cid);
            if (c.state == "undeployed")
                apply_transition_locked(c, "deploy");
            if (c.state == "deployed")
                apply_transition_locked(c, "start");
        }
        if (app.state == "undeployed")
            apply_transition_locked(app, "deploy");
        if (app.state == "deployed")
            apply_transition_locked(app, "start");
    }

    void fill_entity_locked(const Entity& e, occi::Resource& out) const {
        out.id = e.id;
        out.kind = e.kind;
        out.title = e.title;
        for (const auto& m : e.mixins)
            out.mixin_bases.push_back({m, {}});
        out.attribute_values = e.attributes;
        out.attribute_values["state"] = e.state;
        out.attribute_values["providerid"] = e.provider_id;
    }

    Json entity_json_locked(const Entity& e) const {
        occi::Link tmp;
        fill_entity_locked(e, tmp);
        Json j;
        j["id"] = e.id;
        j["kind"] = e.kind;
        j["mixins"] = e.mixins;
        j["attributes"] = tmp.attribute_values;
        j["state"] = e.state;
        if (e.is_link) {
            j["source"] = e.source;
            j["target"] = e.target;
        }
        return j;
    }

    const occi::ExtensionSet* exts_;
    Options options_;
    FsmTable fsms_;
    mutable std::mutex mu_;
    std::map<std::string, Entity> entities_;
    std::vector<FaultSpec> faults_;
    std::vector<Json> log_;
    std::vector<std::pair<std::string, std::string>> transitions_;
    int create_counter_ = 0;
    int provider_counter_ = 0;
};

/// RuntimeClient over an embedded MockRuntime.
class InProcessClient : public orch::RuntimeClient {
public:
    explicit InProcessClient(MockRuntime& rt) : rt_(&rt) {}

    occi::Configuration get_configuration() override { return rt_->snapshot(); }
    void create_entity(const std::string& id, const Json& payload) override {
        rt_->create(id, payload);
    }
    void update_entity(const std::string& id, const Json& attributes) override {
        rt_->update(id, attributes);
    }
    void delete_entity(const std::string& id) override { rt_->remove(id); }
    void trigger_action(const std::string& id, const std::string& action) override {
        rt_->action(id, action);
    }
    std::string entity_state(const std::string& id) override { return rt_->state_of(id); }

private:
    MockRuntime* rt_;
};

} // namespace tosca2occi::mock
