// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include "bioie/schema_model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bioie {

/// A field survives the merge when at least ceil(n * numerator / denominator)
/// of the n candidates propose it (never less than one candidate).
struct MergeOptions {
    std::size_t numerator = 1;
    std::size_t denominator = 3;

    std::size_t min_support(std::size_t candidates) const;
};

struct DroppedField {
    Block block = Block::Species;
    std::string field;
    std::size_t count = 0;
    bool operator==(const DroppedField&) const = default;
};

struct MergeReport {
    std::size_t candidates = 0;
    std::size_t min_support = 0;
    /// Block order, then descending count, then field name.
    std::vector<DroppedField> dropped;
    /// "<doi>: <block name>" for blocks that map to no canonical block; sorted.
    std::vector<std::string> unmapped_blocks;
    /// DOIs of candidates that contributed nothing; sorted.
    std::vector<std::string> empty_candidates;
    bool operator==(const MergeReport&) const = default;
};

struct MergeOutcome {
    StandardizedSchema schema;
    MergeReport report;
};

/// Maps a free-form block name ("Organisms", "study_sites", "interactions")
/// onto a canonical block.
std::optional<Block> canonical_block(std::string_view name);

/// snake_case, lowercase: "taxonomyLevel" and "Taxonomy Level" both become
/// "taxonomy_level".
std::string canonical_field_name(std::string_view name);

/// Deterministic, order-insensitive merge of candidate schemas.
///
/// Per canonical block a field is counted once per candidate that proposes
/// it. Kept fields: every reference field, plus fields reaching the support
/// threshold. Reference fields come first in reference order, then kept extras
/// by descending support and name. Kind is the most common proposed kind
/// (reference kind for reference fields); enumeration values are the core
/// values followed by the union of proposed values by descending frequency,
/// ties alphabetical. Requires at least two candidates.
MergeOutcome merge_candidates(std::span<const CandidateSchema> candidates, const MergeOptions& options = {});

/// The single-candidate form of merge_candidates: merging n copies of a
/// candidate yields exactly this schema.
StandardizedSchema canonicalize(const CandidateSchema& candidate);

}  // namespace bioie
