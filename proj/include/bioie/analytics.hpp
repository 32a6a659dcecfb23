// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include "bioie/extraction_result.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace bioie {

struct FrequencyRow {
    std::string key;      ///< fold_key of the name
    std::string display;  ///< most frequent surface form (ties: smallest)
    std::size_t count = 0;
    bool operator==(const FrequencyRow&) const = default;
};

/// Rows by descending count, ties by key.
struct FrequencyTable {
    std::string label;
    std::vector<FrequencyRow> rows;
    std::size_t total = 0;  ///< mentions counted before any top-k cut

    /// First k rows; label and total unchanged. Throws PreconditionError for k == 0.
    FrequencyTable top(std::size_t k) const;
    const FrequencyRow* find(std::string_view name) const;
    bool operator==(const FrequencyTable&) const = default;
};

/// Counting unit: an entity named in one paper's result counts once for that
/// paper, however many entries repeat it. Species are deduplicated on
/// (name, role), other entities on name.
struct AnalyticsOptions {
    /// Drop species whose folded name is in `stoplist`.
    bool apply_stoplist = false;
    std::set<std::string> stoplist = default_stoplist();

    /// Generic terms that show up as species names: "native species",
    /// "native plants", "invasive species".
    static std::set<std::string> default_stoplist();
};

/// One row per distinct folded role over all species entries.
FrequencyTable role_inventory(std::span<const ExtractionResult> results, const AnalyticsOptions& opts = {});

/// Species whose role folds to `role`, top k. Unknown roles give an empty table.
FrequencyTable top_species(std::span<const ExtractionResult> results, std::string_view role, std::size_t k,
                           const AnalyticsOptions& opts = {});

enum class Granularity { Country, Region, City, All };

std::string_view granularity_name(Granularity g);
std::optional<Granularity> parse_granularity(std::string_view s);

/// Location names, restricted to the geopolitical level unless All.
FrequencyTable location_frequencies(std::span<const ExtractionResult> results, Granularity granularity);

struct EcosystemFrequencies {
    FrequencyTable names;
    /// Over aquatic/terrestrial/marine only; sums to the ecosystem mentions
    /// that carry one of those types.
    FrequencyTable types;
};

EcosystemFrequencies ecosystem_frequencies(std::span<const ExtractionResult> results);

struct LinkagePair {
    std::string habitat;
    std::string ecosystem;
    std::size_t count = 0;
    bool operator==(const LinkagePair&) const = default;
};

/// Distinct (habitat, subcomponent_of) pairs, descending count then folded
/// names. Habitats without subcomponent_of are skipped; targets that name no
/// ecosystem are kept verbatim.
std::vector<LinkagePair> habitat_linkages(std::span<const ExtractionResult> results);

}  // namespace bioie
