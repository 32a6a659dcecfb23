// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/corpus_stats.hpp"

#include <algorithm>
#include <string_view>

namespace bioie {

CorpusStats compute_stats(const CorpusStore& store) {
    CorpusStats s;
    std::vector<std::string_view> abstracts;
    std::vector<std::string_view> full_texts;
    for (const auto& [doi, r] : store.records()) {
        if (!r.available()) continue;
        ++s.total;
        if (r.has_full_text()) {
            ++s.with_full_text;
            full_texts.emplace_back(*r.full_text);
        } else {
            ++s.abstract_only;
        }
        if (r.has_abstract()) abstracts.emplace_back(*r.abstract);
    }
    s.abstract_tokens = kernels::token_summary_parallel(abstracts);
    s.full_text_tokens = kernels::token_summary_parallel(full_texts);
    return s;
}

BibliometricTable bibliometrics(const CorpusStore& store) {
    BibliometricTable t;
    std::map<std::string, AvailabilityCounts> publishers;
    for (const auto& [doi, r] : store.records()) {
        if (!r.available()) continue;
        AvailabilityCounts delta{r.has_abstract() ? 1u : 0u, r.has_full_text() ? 1u : 0u};
        if (r.year) {
            auto& c = t.by_year[*r.year];
            c.abstract_count += delta.abstract_count;
            c.fulltext_count += delta.fulltext_count;
        }
        if (r.publisher && !r.publisher->empty()) {
            auto& c = publishers[*r.publisher];
            c.abstract_count += delta.abstract_count;
            c.fulltext_count += delta.fulltext_count;
        }
    }
    for (auto& [name, c] : publishers) t.by_publisher.push_back({name, c});
    std::stable_sort(t.by_publisher.begin(), t.by_publisher.end(), [](const auto& a, const auto& b) {
        return a.counts.abstract_count > b.counts.abstract_count;
    });
    return t;
}

}  // namespace bioie
