// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace bioie {

enum class EntityKind { Species, Location, Ecosystem, Habitat };

/// The five blocks of the standardized extraction schema, in serialization order.
enum class Block { Species, Location, Ecosystem, Habitat, Relationships };

inline constexpr std::array<Block, 5> kAllBlocks = {Block::Species, Block::Location, Block::Ecosystem,
                                                    Block::Habitat, Block::Relationships};

/// "Species", "Location", "Ecosystem", "Habitat", "Relationships".
std::string_view block_name(Block b);
std::string_view entity_kind_name(EntityKind k);

enum class FieldKind { Text, Enum, List, Reference };

std::string_view field_kind_name(FieldKind k);

struct FieldDescriptor {
    std::string name;
    FieldKind kind = FieldKind::Text;
    std::vector<std::string> values;  ///< enum alternatives, or list placeholders
    std::string target;               ///< referenced block name, Reference only
    std::string note;                 ///< free text; also holds unrecognized constructs

    bool operator==(const FieldDescriptor&) const = default;
};

struct SchemaBlock {
    Block block = Block::Species;
    std::vector<FieldDescriptor> fields;

    const FieldDescriptor* field(std::string_view name) const;
    bool operator==(const SchemaBlock&) const = default;
};

/// The corpus-wide extraction target. All five blocks are always present.
struct StandardizedSchema {
    std::array<SchemaBlock, 5> blocks;

    StandardizedSchema();
    const SchemaBlock& block(Block b) const { return blocks[static_cast<std::size_t>(b)]; }
    SchemaBlock& block(Block b) { return blocks[static_cast<std::size_t>(b)]; }

    bool operator==(const StandardizedSchema&) const = default;
};

/// The reference schema: entity blocks with their mandatory properties and
/// core vocabularies. Merged schemas always contain every field listed here.
const StandardizedSchema& reference_schema();

/// Fields of `reference_schema()` for `b`, in order.
const std::vector<FieldDescriptor>& mandatory_fields(Block b);

/// Fields whose enumeration is open: values outside the core set are allowed.
bool is_open_vocabulary(Block b, std::string_view field);

/// Compact form: enum fields as "a/b/c", text as its note, lists as arrays,
/// references as {"kind": "reference", "target": ..., "note": ...}.
nlohmann::ordered_json schema_to_json(const StandardizedSchema& schema);

/// Inverse of schema_to_json. Block keys are matched case-insensitively.
/// Throws ParseError on unknown or missing blocks.
StandardizedSchema schema_from_json(const nlohmann::ordered_json& j);

/// Structural problems (missing mandatory field, duplicate field, enum
/// without values). Empty when the schema is usable for extraction.
std::vector<std::string> check_schema(const StandardizedSchema& schema);

/// Stable hash of the compact serialization.
std::string schema_fingerprint(const StandardizedSchema& schema);

/// A per-paper schema proposal, captured as parsed: block names and field
/// names are kept exactly as the model wrote them.
struct CandidateBlock {
    std::string name;
    std::vector<FieldDescriptor> fields;
    bool operator==(const CandidateBlock&) const = default;
};

struct CandidateSchema {
    std::string paper_doi;
    std::vector<CandidateBlock> blocks;
    std::vector<std::string> notes;  ///< top-level constructs that are not blocks
    bool operator==(const CandidateSchema&) const = default;
};

/// Parses one schema document (code fences allowed). Accepts blocks given as
/// field maps, arrays of example instances, or JSON-Schema style
/// {"type": "object", "properties": ...}. Throws ParseError with the byte
/// offset for malformed documents and for empty input.
CandidateSchema parse_candidate(std::string_view raw, std::string doi);

/// Explicit-descriptor serialization; parse_candidate reads it back.
nlohmann::ordered_json candidate_to_json(const CandidateSchema& candidate);

/// Remove one surrounding ``` / ```json fence and outer whitespace.
std::string strip_code_fence(std::string_view text);

}  // namespace bioie
