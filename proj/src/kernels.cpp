// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <unordered_map>

#include <omp.h>

namespace bioie::kernels {

std::size_t count_tokens(std::string_view text) {
    std::size_t n = 0;
    bool in_token = false;
    for (char c : text) {
        bool ws = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!ws && !in_token) ++n;
        in_token = !ws;
    }
    return n;
}

std::optional<double> TokenSummary::average() const {
    if (documents == 0) return std::nullopt;
    return static_cast<double>(total_tokens) / static_cast<double>(documents);
}

TokenSummary token_summary_serial(std::span<const std::string_view> texts) {
    TokenSummary s;
    for (auto t : texts) {
        auto n = count_tokens(t);
        ++s.documents;
        s.total_tokens += n;
        s.min = s.min ? std::min(*s.min, n) : n;
        s.max = s.max ? std::max(*s.max, n) : n;
    }
    return s;
}

TokenSummary token_summary_parallel(std::span<const std::string_view> texts) {
    const auto n = static_cast<std::int64_t>(texts.size());
    if (n == 0) return {};

    std::uint64_t total = 0;
    std::size_t lo = std::numeric_limits<std::size_t>::max();
    std::size_t hi = 0;

#pragma omp parallel for schedule(dynamic, 64) reduction(+ : total) reduction(min : lo) reduction(max : hi)
    for (std::int64_t i = 0; i < n; ++i) {
        auto c = count_tokens(texts[static_cast<std::size_t>(i)]);
        total += c;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }

    TokenSummary s;
    s.documents = texts.size();
    s.total_tokens = total;
    s.min = lo;
    s.max = hi;
    return s;
}

const std::string& MentionTally::display() const {
    static const std::string kEmpty;
    const std::string* best = &kEmpty;
    std::uint64_t best_count = 0;
    // std::map iterates ascending, so strict '>' keeps the smallest on ties.
    for (const auto& [form, c] : surface_forms) {
        if (c > best_count) {
            best = &form;
            best_count = c;
        }
    }
    return *best;
}

MentionCounts count_mentions_serial(std::span<const std::vector<Mention>> per_paper) {
    MentionCounts out;
    for (const auto& paper : per_paper) {
        for (const auto& m : paper) {
            auto& t = out[m.key];
            ++t.count;
            ++t.surface_forms[m.display];
        }
    }
    return out;
}

MentionCounts count_mentions_parallel(std::span<const std::vector<Mention>> per_paper) {
    const auto n = static_cast<std::int64_t>(per_paper.size());
    MentionCounts out;

#pragma omp parallel
    {
        std::unordered_map<std::string, MentionTally> local;
#pragma omp for schedule(dynamic, 32) nowait
        for (std::int64_t i = 0; i < n; ++i) {
            for (const auto& m : per_paper[static_cast<std::size_t>(i)]) {
                auto& t = local[m.key];
                ++t.count;
                ++t.surface_forms[m.display];
            }
        }
        // Addition is commutative, so merge order does not affect the result.
#pragma omp critical(bioie_mention_merge)
        for (auto& [key, t] : local) {
            auto& dst = out[key];
            dst.count += t.count;
            for (const auto& [form, c] : t.surface_forms) dst.surface_forms[form] += c;
        }
    }
    return out;
}

}  // namespace bioie::kernels
