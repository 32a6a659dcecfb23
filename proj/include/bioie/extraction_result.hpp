// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include "bioie/schema_model.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace bioie {

/// Properties present on an entry but not among its block's core fields.
using ExtraFields = std::map<std::string, nlohmann::ordered_json>;

struct SpeciesEntry {
    std::string name;
    std::string role;
    std::string taxonomy_level;
    ExtraFields extra;
    bool operator==(const SpeciesEntry&) const = default;
};

struct LocationEntry {
    std::string name;
    std::string category;
    std::string geopolitical_info;
    std::string additional_details;
    ExtraFields extra;
    bool operator==(const LocationEntry&) const = default;
};

struct EcosystemEntry {
    std::string name;
    std::string type;
    std::string scope;
    ExtraFields extra;
    bool operator==(const EcosystemEntry&) const = default;
};

struct HabitatEntry {
    std::string name;
    std::string type;
    std::string subcomponent_of;
    std::string specifics;
    ExtraFields extra;
    bool operator==(const HabitatEntry&) const = default;
};

/// A relationship endpoint, by entity name. `kind` is resolved against the
/// entities of the same result and stays empty when nothing matches.
struct EntityRef {
    std::string name;
    std::optional<EntityKind> kind;
    bool operator==(const EntityRef&) const = default;
};

struct RelationshipEntry {
    std::vector<EntityRef> related_entities;
    std::string name;
    std::string type;
    std::string directionality;
    std::string context;
    ExtraFields extra;
    bool operator==(const RelationshipEntry&) const = default;
};

enum class ResultStatus { Extracted, OutOfScope };

struct ExtractionResult {
    std::string paper_doi;
    ResultStatus status = ResultStatus::Extracted;
    std::vector<SpeciesEntry> species;
    std::vector<LocationEntry> locations;
    std::vector<EcosystemEntry> ecosystems;
    std::vector<HabitatEntry> habitats;
    std::vector<RelationshipEntry> relationships;
    /// Top-level keys that are not one of the five blocks.
    std::map<std::string, nlohmann::ordered_json> extra_blocks;

    bool has_entities() const;
    bool operator==(const ExtractionResult&) const = default;
};

/// Trim and collapse internal whitespace; case is preserved.
std::string normalize_name(std::string_view name);

/// normalize_name, then ASCII case folding. Counting and matching key.
std::string fold_key(std::string_view name);

/// Provider response to result. "N/A" (after fence stripping and trimming,
/// any case) yields an out-of-scope result; a JSON object yields an extracted
/// result. Anything else throws QuarantineError carrying the raw text.
ExtractionResult parse_result(std::string_view raw, const std::string& doi);

/// The five blocks in model-output form (what parse_result reads).
nlohmann::ordered_json result_blocks_to_json(const ExtractionResult& result);

/// Results-file line: {"doi", "status", <blocks>}.
nlohmann::ordered_json result_to_json(const ExtractionResult& result);
ExtractionResult result_from_json(const nlohmann::ordered_json& j);

/// Fill EntityRef::kind from the result's own entities (species, location,
/// ecosystem, habitat precedence; case-insensitive name match).
void resolve_references(ExtractionResult& result);

}  // namespace bioie
