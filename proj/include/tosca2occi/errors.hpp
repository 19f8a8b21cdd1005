#pragma once

#include <stdexcept>
#include <string>

namespace tosca2occi {

/// Base class for all toolchain errors. Everything user-facing derives from
/// this so the CLI can map any failure to exit code 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// occi-model
struct ParseError : Error { using Error::Error; };
struct LinkError : Error { using Error::Error; };
struct CycleError : Error { using Error::Error; };

// tosca-parser
struct YamlError : Error { using Error::Error; };
struct SchemaError : Error { using Error::Error; };
struct DuplicateTypeError : Error { using Error::Error; };
struct DanglingReferenceError : Error { using Error::Error; };
struct MissingInputError : Error { using Error::Error; };
struct UnresolvedParentError : Error { using Error::Error; };
struct InheritanceCycleError : Error { using Error::Error; };

// type-mapper
struct TypeMappingError : Error { using Error::Error; };
struct UnmappedTypeError : Error { using Error::Error; };
struct ConstraintCompileError : Error { using Error::Error; };

// config-generator
struct UnmappedTemplateError : Error { using Error::Error; };
struct AttributeValidationError : Error { using Error::Error; };
struct DuplicateTemplateError : Error { using Error::Error; };
struct DanglingBindingError : Error { using Error::Error; };

// orchestrator / runtime
struct CyclicDependencyError : Error { using Error::Error; };
struct GateTimeoutError : Error {
    explicit GateTimeoutError(const std::string& entity, const std::string& msg)
        : Error(msg), entity_id(entity) {}
    std::string entity_id;
};
struct RequestError : Error {
    explicit RequestError(int code, const std::string& msg) : Error(msg), status(code) {}
    int status;
};
struct RuntimeUnreachableError : Error { using Error::Error; };

} // namespace tosca2occi
