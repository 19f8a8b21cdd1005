#pragma once

#include "tosca2occi/occi/model.hpp"

namespace tosca2occi::orch {

using occi::Json;

/// Runtime access used by the orchestrator. One thread at a time.
/// Implementations throw RequestError for rejected requests and
/// RuntimeUnreachableError when the runtime cannot be reached.
class RuntimeClient {
public:
    virtual ~RuntimeClient() = default;

    virtual occi::Configuration get_configuration() = 0;
    virtual void create_entity(const std::string& id, const Json& payload) = 0;
    virtual void update_entity(const std::string& id, const Json& attributes) = 0;
    virtual void delete_entity(const std::string& id) = 0;
    virtual void trigger_action(const std::string& id, const std::string& action) = 0;

    /// Current lifecycle state, empty when the entity is unknown.
    virtual std::string entity_state(const std::string& id) = 0;
};

} // namespace tosca2occi::orch
