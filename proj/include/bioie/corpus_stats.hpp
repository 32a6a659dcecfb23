// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include "bioie/corpus_store.hpp"
#include "bioie/kernels.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace bioie {

/// Availability partition plus per-text-kind token statistics. Tokens are
/// maximal runs of non-whitespace characters.
struct CorpusStats {
    std::size_t total = 0;           ///< records with an abstract or a full text
    std::size_t abstract_only = 0;   ///< abstract present, no full text
    std::size_t with_full_text = 0;  ///< full text present
    kernels::TokenSummary abstract_tokens;
    kernels::TokenSummary full_text_tokens;
};

CorpusStats compute_stats(const CorpusStore& store);

struct AvailabilityCounts {
    std::size_t abstract_count = 0;
    std::size_t fulltext_count = 0;
    bool operator==(const AvailabilityCounts&) const = default;
};

struct PublisherRow {
    std::string publisher;
    AvailabilityCounts counts;
    bool operator==(const PublisherRow&) const = default;
};

struct BibliometricTable {
    std::map<int, AvailabilityCounts> by_year;  ///< ascending year
    /// Descending abstract_count, ties alphabetical.
    std::vector<PublisherRow> by_publisher;
};

/// Records missing a year (or publisher) are left out of that table only.
BibliometricTable bibliometrics(const CorpusStore& store);

}  // namespace bioie
