#pragma once

#include <map>
#include <set>
#include <string>

#include "tosca2occi/mapping/rules.hpp"

namespace tosca2occi::mock {

/// Lifecycle state machine of one kind. `provisioned` is the state an entity
/// settles into on its own after creation; empty means no auto-activation.
struct LifecycleFsm {
    std::string initial;
    std::string provisioned;
    std::set<std::string> states;
    std::map<std::pair<std::string, std::string>, std::string> transitions;

    const std::string* next(const std::string& state, const std::string& action) const {
        auto it = transitions.find({state, action});
        return it == transitions.end() ? nullptr : &it->second;
    }
};

/// FSMs per kind. Computes run inactive/active/suspended/error, storage
/// offline/online/error, networks inactive/active, applications and
/// components undeployed/deployed/active/error. Anything else settles from
/// inactive to active with no actions.
class FsmTable {
public:
    FsmTable() {
        LifecycleFsm compute;
        compute.initial = "inactive";
        compute.provisioned = "active";
        compute.states = {"inactive", "active", "suspended", "error"};
        compute.transitions[{"inactive", "start"}] = "active";
        compute.transitions[{"suspended", "start"}] = "active";
        compute.transitions[{"active", "stop"}] = "inactive";
        compute.transitions[{"active", "suspend"}] = "suspended";
        table_[mapping::kinds::compute] = compute;

        LifecycleFsm storage;
        storage.initial = "offline";
        storage.provisioned = "online";
        storage.states = {"offline", "online", "error"};
        storage.transitions[{"offline", "online"}] = "online";
        storage.transitions[{"online", "offline"}] = "offline";
        table_[mapping::kinds::storage] = storage;

        LifecycleFsm network;
        network.initial = "inactive";
        network.provisioned = "active";
        network.states = {"inactive", "active"};
        network.transitions[{"inactive", "up"}] = "active";
        network.transitions[{"active", "down"}] = "inactive";
        table_[mapping::kinds::network] = network;

        LifecycleFsm component;
        component.initial = "undeployed";
        component.provisioned = ""; // components wait for deploy
        component.states = {"undeployed", "deployed", "active", "error"};
        component.transitions[{"undeployed", "deploy"}] = "deployed";
        component.transitions[{"deployed", "configure"}] = "deployed";
        component.transitions[{"deployed", "start"}] = "active";
        component.transitions[{"active", "start"}] = "active";
        component.transitions[{"active", "stop"}] = "deployed";
        component.transitions[{"deployed", "undeploy"}] = "undeployed";
        table_[mapping::kinds::component] = component;
        table_[mapping::kinds::application] = component;

        default_.initial = "inactive";
        default_.provisioned = "active";
        default_.states = {"inactive", "active"};
    }

    /// FSM for a kind, walking the parent chain to find the closest match.
    const LifecycleFsm& for_kind(const occi::KindRef& kind,
                                 const occi::ExtensionSet& exts) const {
        for (const auto& k : exts.kind_chain(kind)) {
            auto it = table_.find(k);
            if (it != table_.end())
                return it->second;
        }
        return default_;
    }

private:
    std::map<occi::KindRef, LifecycleFsm> table_;
    LifecycleFsm default_;
};

} // namespace tosca2occi::mock
