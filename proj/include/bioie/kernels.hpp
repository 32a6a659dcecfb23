// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

// Data-parallel aggregation kernels. Each kernel has an OpenMP version used by
// the library and a serial reference that tests and benchmarks compare against.
// Both versions must return identical values for identical inputs.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bioie::kernels {

/// Maximal runs of non-whitespace characters.
std::size_t count_tokens(std::string_view text);

struct TokenSummary {
    std::size_t documents = 0;
    std::uint64_t total_tokens = 0;
    std::optional<std::size_t> min;  ///< absent when documents == 0
    std::optional<std::size_t> max;

    /// total_tokens / documents; nullopt for an empty summary.
    std::optional<double> average() const;

    bool operator==(const TokenSummary&) const = default;
};

TokenSummary token_summary_serial(std::span<const std::string_view> texts);
TokenSummary token_summary_parallel(std::span<const std::string_view> texts);

/// One countable mention: a case-folded counting key plus the surface form.
struct Mention {
    std::string key;
    std::string display;
};

struct MentionTally {
    std::uint64_t count = 0;
    std::map<std::string, std::uint64_t> surface_forms;

    /// Most frequent surface form; ties go to the lexicographically smallest.
    /// Independent of input order.
    const std::string& display() const;

    bool operator==(const MentionTally&) const = default;
};

using MentionCounts = std::map<std::string, MentionTally>;

/// `per_paper[i]` holds the mentions of paper i, already deduplicated.
MentionCounts count_mentions_serial(std::span<const std::vector<Mention>> per_paper);
MentionCounts count_mentions_parallel(std::span<const std::vector<Mention>> per_paper);

}  // namespace bioie::kernels
