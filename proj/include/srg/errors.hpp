// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace srg {

/// Base of every error raised by the engine. `kind()` is the stable,
/// machine-readable name used in CLI stderr output and HTTP error bodies.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define SRG_DEFINE_ERROR(Name, Base)                                          \
    class Name : public Base {                                                \
    public:                                                                   \
        explicit Name(const std::string& message) : Base(#Name, message) {}   \
                                                                              \
    protected:                                                                \
        Name(std::string kind, const std::string& message)                    \
            : Base(std::move(kind), message) {}                               \
    };

// srg-core
SRG_DEFINE_ERROR(SchemaError, Error)
SRG_DEFINE_ERROR(IntegrityError, Error)
SRG_DEFINE_ERROR(ValueError, Error)

// ontology
SRG_DEFINE_ERROR(CycleError, SchemaError)
SRG_DEFINE_ERROR(MultipleRootsError, SchemaError)
SRG_DEFINE_ERROR(UnknownConcept, Error)

// ged / scoring
SRG_DEFINE_ERROR(SizeLimitExceeded, Error)
SRG_DEFINE_ERROR(EmptyTrainingSet, Error)

// feedback
SRG_DEFINE_ERROR(MissingTemplate, Error)

// agents
SRG_DEFINE_ERROR(BackendUnavailable, Error)
SRG_DEFINE_ERROR(SchemaViolation, Error)
SRG_DEFINE_ERROR(IncompleteMapping, Error)
SRG_DEFINE_ERROR(NetworkError, Error)
SRG_DEFINE_ERROR(Timeout, Error)

// harness
SRG_DEFINE_ERROR(LayoutError, Error)
SRG_DEFINE_ERROR(SpecValidationError, Error)

#undef SRG_DEFINE_ERROR

}  // namespace srg
