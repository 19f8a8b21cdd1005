#pragma once

#include <chrono>
#include <thread>

#include "tosca2occi/orch/client.hpp"
#include "tosca2occi/orch/plan.hpp"

// Reconciliation engine: extract the current deployment, compare against the
// desired one, derive the provisioning order graph, sequence a plan, send the
// requests, then extract again and record whether the runtime converged.

namespace tosca2occi::orch {

struct GateOptions {
    int interval_ms = 50;
    int timeout_ms = 10000;
};

struct StepResult {
    Request request;
    std::string status; // ok | failed | skipped
    std::string message;
    double duration_ms = 0;
};

struct ExecutionReport {
    std::vector<StepResult> steps;
    bool success = true;
    bool conformance = false; // filled by reconcile
    double total_ms = 0;
    ProvisioningPlan plan;

    Json to_json() const {
        Json j;
        j["success"] = success;
        j["conformance"] = conformance;
        j["total_ms"] = total_ms;
        j["steps"] = Json::array();
        for (const auto& s : steps) {
            Json sj = orch::to_json(s.request);
            sj["status"] = s.status;
            if (!s.message.empty())
                sj["message"] = s.message;
            sj["duration_ms"] = s.duration_ms;
            j["steps"].push_back(sj);
        }
        return j;
    }
};

/// Current cloud deployment as an OCCI configuration, lifecycle states
/// included.
inline occi::Configuration extract(RuntimeClient& runtime) {
    return runtime.get_configuration();
}

namespace detail {

inline void wait_for_gate(const StateGate& gate, RuntimeClient& runtime,
                          const GateOptions& opts) {
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::milliseconds(opts.timeout_ms);
    for (;;) {
        if (runtime.entity_state(gate.entity_id) == gate.required_state)
            return;
        if (clock::now() >= deadline)
            throw GateTimeoutError(gate.entity_id,
                                   "gate timed out waiting for " + gate.entity_id +
                                       " to reach state '" + gate.required_state + "'");
        std::this_thread::sleep_for(std::chrono::milliseconds(opts.interval_ms));
    }
}

} // namespace detail

/// Runs the plan in order. A rejected request fails its step and marks every
/// later step skipped; a gate that never opens raises GateTimeoutError
/// naming the gated entity.
inline ExecutionReport execute(const ProvisioningPlan& plan, RuntimeClient& runtime,
                               const GateOptions& gates = {}) {
    using clock = std::chrono::steady_clock;
    ExecutionReport report;
    report.plan = plan;
    const auto t0 = clock::now();
    bool halted = false;

    for (const auto& step : plan.steps) {
        StepResult res;
        res.request = step;
        if (halted) {
            res.status = "skipped";
            report.steps.push_back(std::move(res));
            continue;
        }
        const auto s0 = clock::now();
        try {
            if (step.gate)
                detail::wait_for_gate(*step.gate, runtime, gates);
            switch (step.verb) {
            case Verb::Create:
                runtime.create_entity(step.entity_id, step.payload);
                break;
            case Verb::Update:
                runtime.update_entity(step.entity_id, step.payload.value("attributes",
                                                                         Json::object()));
                break;
            case Verb::Delete:
                runtime.delete_entity(step.entity_id);
                break;
            case Verb::Action:
                runtime.trigger_action(step.entity_id, step.action_name);
                break;
            }
            res.status = "ok";
        } catch (const RequestError& e) {
            res.status = "failed";
            res.message = e.what();
            report.success = false;
            halted = true;
        }
        res.duration_ms =
            std::chrono::duration<double, std::milli>(clock::now() - s0).count();
        report.steps.push_back(std::move(res));
    }
    report.total_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    return report;
}

/// True when `current` realizes `desired`: same entity ids, kinds, mixin
/// sets and non-runtime attributes.
inline bool conforms(const occi::Configuration& desired, const occi::Configuration& current) {
    auto diff = compare(desired, current);
    if (!diff.empty_delta())
        return false;
    auto mixin_set = [](const occi::Resource& e) {
        std::set<std::string> out;
        for (const auto& mb : e.mixin_bases)
            out.insert(mb.mixin);
        return out;
    };
    for (const auto& e : diff.unchanged) {
        const occi::Resource* mine = e.is_link
                                         ? static_cast<const occi::Resource*>(
                                               current.find_link(e.id))
                                         : current.find_resource(e.id);
        if (!mine)
            return false;
        if (mixin_set(e.data) != mixin_set(*mine))
            return false;
    }
    return true;
}

/// extract -> compare -> build_graph -> plan -> execute, then a final
/// extract to record convergence.
inline ExecutionReport reconcile(const occi::Configuration& desired, RuntimeClient& runtime,
                                 const occi::ExtensionSet& exts, const GateOptions& gates = {}) {
    auto current = extract(runtime);
    auto diff = compare(desired, current);
    auto graph = build_graph(diff, desired, exts);
    auto steps = plan(diff, graph, exts);
    auto report = execute(steps, runtime, gates);
    report.conformance = report.success && conforms(desired, extract(runtime));
    return report;
}

} // namespace tosca2occi::orch
