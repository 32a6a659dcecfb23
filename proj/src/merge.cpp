// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/merge.hpp"

#include "bioie/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

namespace bioie {

namespace {

struct FieldVotes {
    std::size_t support = 0;
    std::map<FieldKind, std::size_t> kinds;
    std::map<std::string, std::size_t> enum_values;
    std::map<std::string, std::size_t> list_values;
    std::map<std::string, std::size_t> targets;
    std::map<std::string, std::size_t> notes;
};

template <typename K>
K most_common(const std::map<K, std::size_t>& votes, K fallback) {
    K best = fallback;
    std::size_t best_n = 0;
    for (const auto& [k, n] : votes) {
        if (n > best_n) {
            best = k;
            best_n = n;
        }
    }
    return best;
}

/// Keys by descending count, ties ascending.
std::vector<std::string> by_frequency(const std::map<std::string, std::size_t>& votes) {
    std::vector<std::pair<std::string, std::size_t>> v(votes.begin(), votes.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> out;
    for (auto& [k, n] : v) out.push_back(std::move(k));
    return out;
}

MergeOutcome merge_impl(std::span<const CandidateSchema> candidates, std::size_t min_support) {
    std::array<std::map<std::string, FieldVotes>, 5> votes;
    MergeReport report;
    report.candidates = candidates.size();
    report.min_support = min_support;

    for (const auto& c : candidates) {
        // One vote per (block, field) per candidate, even if two of its blocks
        // map to the same canonical block.
        std::array<std::map<std::string, const FieldDescriptor*>, 5> proposed;
        for (const auto& block : c.blocks) {
            auto b = canonical_block(block.name);
            if (!b) {
                report.unmapped_blocks.push_back(c.paper_doi + ": " + block.name);
                continue;
            }
            for (const auto& f : block.fields) {
                auto name = canonical_field_name(f.name);
                if (name.empty()) continue;
                proposed[static_cast<std::size_t>(*b)].emplace(name, &f);
            }
        }
        bool contributed = false;
        for (std::size_t b = 0; b < 5; ++b) {
            for (const auto& [name, f] : proposed[b]) {
                contributed = true;
                auto& v = votes[b][name];
                ++v.support;
                ++v.kinds[f->kind];
                if (f->kind == FieldKind::Enum || f->kind == FieldKind::List) {
                    auto& tally = f->kind == FieldKind::Enum ? v.enum_values : v.list_values;
                    std::set<std::string> distinct(f->values.begin(), f->values.end());
                    for (const auto& val : distinct) ++tally[val];
                }
                if (f->kind == FieldKind::Reference && !f->target.empty()) ++v.targets[f->target];
                if (!f->note.empty()) ++v.notes[f->note];
            }
        }
        if (!contributed) report.empty_candidates.push_back(c.paper_doi);
    }

    MergeOutcome out;
    for (auto b : kAllBlocks) {
        auto bi = static_cast<std::size_t>(b);
        auto& fields = out.schema.block(b).fields;
        const auto& mandatory = mandatory_fields(b);

        for (const auto& m : mandatory) {
            FieldDescriptor f = m;
            if (auto it = votes[bi].find(m.name); it != votes[bi].end() && m.kind == FieldKind::Enum) {
                for (const auto& val : by_frequency(it->second.enum_values)) {
                    if (std::find(f.values.begin(), f.values.end(), val) == f.values.end()) f.values.push_back(val);
                }
            }
            fields.push_back(std::move(f));
        }

        std::vector<std::pair<std::string, const FieldVotes*>> extras;
        for (const auto& [name, v] : votes[bi]) {
            bool is_mandatory = std::any_of(mandatory.begin(), mandatory.end(),
                                            [&](const auto& m) { return m.name == name; });
            if (is_mandatory) continue;
            if (v.support >= min_support) {
                extras.emplace_back(name, &v);
            } else {
                report.dropped.push_back({b, name, v.support});
            }
        }
        std::stable_sort(extras.begin(), extras.end(),
                         [](const auto& a, const auto& b2) { return a.second->support > b2.second->support; });
        for (const auto& [name, v] : extras) {
            FieldDescriptor f;
            f.name = name;
            f.kind = most_common(v->kinds, FieldKind::Text);
            if (f.kind == FieldKind::Enum) f.values = by_frequency(v->enum_values);
            if (f.kind == FieldKind::List) f.values = by_frequency(v->list_values);
            if (f.kind == FieldKind::Reference) f.target = most_common(v->targets, std::string{});
            f.note = most_common(v->notes, std::string{});
            fields.push_back(std::move(f));
        }
    }

    std::stable_sort(report.dropped.begin(), report.dropped.end(), [](const auto& a, const auto& b) {
        if (a.block != b.block) return a.block < b.block;
        if (a.count != b.count) return a.count > b.count;
        return a.field < b.field;
    });
    std::sort(report.unmapped_blocks.begin(), report.unmapped_blocks.end());
    std::sort(report.empty_candidates.begin(), report.empty_candidates.end());
    out.report = std::move(report);
    return out;
}

std::string alnum_lower(std::string_view s) {
    std::string out;
    for (char c : s) {
        auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) out.push_back(static_cast<char>(std::tolower(u)));
    }
    return out;
}

}  // namespace

std::size_t MergeOptions::min_support(std::size_t n) const {
    if (denominator == 0) throw PreconditionError("merge threshold denominator is zero");
    auto t = (n * numerator + denominator - 1) / denominator;
    return std::max<std::size_t>(t, 1);
}

std::optional<Block> canonical_block(std::string_view name) {
    auto k = alnum_lower(name);
    if (k.empty()) return std::nullopt;
    if (k != "species" && k.size() > 1 && k.back() == 's') k.pop_back();

    static const std::map<std::string, Block> kSynonyms = {
        {"species", Block::Species},         {"organism", Block::Species},
        {"taxon", Block::Species},           {"taxa", Block::Species},
        {"invasivespecie", Block::Species},  {"location", Block::Location},
        {"site", Block::Location},           {"studysite", Block::Location},
        {"studyarea", Block::Location},      {"geography", Block::Location},
        {"place", Block::Location},          {"region", Block::Location},
        {"ecosystem", Block::Ecosystem},     {"habitat", Block::Habitat},
        {"relationship", Block::Relationships}, {"relation", Block::Relationships},
        {"interaction", Block::Relationships},  {"link", Block::Relationships},
    };
    auto it = kSynonyms.find(k);
    if (it == kSynonyms.end()) return std::nullopt;
    return it->second;
}

std::string canonical_field_name(std::string_view name) {
    std::string out;
    char prev = 0;
    for (char c : name) {
        auto u = static_cast<unsigned char>(c);
        if (std::isupper(u)) {
            if (prev && std::islower(static_cast<unsigned char>(prev))) out.push_back('_');
            out.push_back(static_cast<char>(std::tolower(u)));
        } else if (std::isalnum(u)) {
            out.push_back(c);
        } else if (!out.empty() && out.back() != '_') {
            out.push_back('_');
        }
        prev = c;
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out;
}

MergeOutcome merge_candidates(std::span<const CandidateSchema> candidates, const MergeOptions& options) {
    if (candidates.size() < 2) throw PreconditionError("merging needs at least two candidate schemas");
    return merge_impl(candidates, options.min_support(candidates.size()));
}

StandardizedSchema canonicalize(const CandidateSchema& candidate) {
    return merge_impl(std::span(&candidate, 1), 1).schema;
}

}  // namespace bioie
