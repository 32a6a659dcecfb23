// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include "bioie/extraction_result.hpp"
#include "bioie/schema_model.hpp"

#include <string>
#include <vector>

namespace bioie {

enum class Severity { Error, Warning };

struct Violation {
    Severity severity = Severity::Error;
    std::string code;     ///< stable identifier, e.g. "unknown_field"
    std::string message;  ///< human-readable, names the offending entry
    bool operator==(const Violation&) const = default;
};

struct ValidationVerdict {
    std::vector<Violation> violations;

    /// True when there are no Error-severity violations. Warnings (non-core
    /// roles, dangling habitat→ecosystem links) do not fail a result.
    bool ok() const;
    std::size_t error_count() const;
    bool has(std::string_view code) const;
};

/// Checks a result against a schema. Total and side-effect free.
///
/// Errors: entities on an out-of-scope result, unknown blocks and fields,
/// closed-enumeration violations, missing names, relationship endpoints that
/// name no entity of the result.
/// Warnings: species roles outside the core vocabulary, habitats whose
/// subcomponent_of names no ecosystem of the result, relationships without
/// endpoints.
ValidationVerdict validate_result(const ExtractionResult& result, const StandardizedSchema& schema);

}  // namespace bioie
