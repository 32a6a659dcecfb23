// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include "bioie/analytics.hpp"
#include "bioie/corpus_store.hpp"
#include "bioie/extraction_result.hpp"
#include "bioie/llm_gateway.hpp"
#include "bioie/mock_provider.hpp"
#include "bioie/schema_model.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <mutex>
#include <random>
#include <string>
#include <vector>

namespace bioie::testing {

std::filesystem::path fixture_dir();
std::filesystem::path data_dir();

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Provider driven by a callback; records when each attempt was dispatched.
class ScriptedProvider : public ChatProvider {
public:
    using Script = std::function<ProviderReply(const PromptPair&, std::size_t call)>;

    explicit ScriptedProvider(Script script, std::string id = "scripted");

    std::string id() const override { return id_; }
    ProviderReply send(const PromptPair& prompt) override;

    std::size_t calls() const { return calls_.load(); }
    std::vector<std::chrono::steady_clock::time_point> dispatch_times() const;

private:
    Script script_;
    std::string id_;
    std::atomic<std::size_t> calls_{0};
    mutable std::mutex mu_;
    std::vector<std::chrono::steady_clock::time_point> times_;
};

/// Wraps a provider and answers 503 from attempt `fail_from` on (0-based)
/// until `heal()` is called.
class BreakingProvider : public ChatProvider {
public:
    BreakingProvider(std::shared_ptr<ChatProvider> inner, std::size_t fail_from);
    std::string id() const override { return inner_->id(); }
    ProviderReply send(const PromptPair& prompt) override;
    void heal() { healed_ = true; }

private:
    std::shared_ptr<ChatProvider> inner_;
    std::size_t fail_from_;
    std::atomic<std::size_t> calls_{0};
    std::atomic<bool> healed_{false};
};

/// Fast policy for tests: generous window, no real backoff waiting needed.
RateLimitPolicy fast_policy();

// ---- fixtures ----------------------------------------------------------

/// Results regenerated from tests/fixtures/paper_counts.json: a row with
/// count c appears in papers 0..c-1, so no name repeats within a paper
/// except for the deliberate case-variant duplicates in every 10th paper.
std::vector<ExtractionResult> paper_count_results();

/// Turn a frequency table back into results: row r appears in papers
/// 0..count-1 as a species with `role`.
std::vector<ExtractionResult> results_from_species_table(const FrequencyTable& table, const std::string& role);

/// A generated corpus of `in_scope + out_of_scope` abstracts: in-scope ones
/// name at least one rulebook species, the others name none.
CorpusStore generated_corpus(std::size_t in_scope, std::size_t out_of_scope, std::uint64_t seed);

/// Independent tally of papers whose title or abstract names a rulebook
/// species or alias as a whole word (std::regex based).
std::size_t keyword_tally_in_scope(const CorpusStore& store, const MockRulebook& rules);

// ---- merge oracle ------------------------------------------------------

/// Abstract description of a generated candidate: canonical block, canonical
/// field names, and the descriptors, before surface-form rendering.
struct GenField {
    std::string canonical;
    std::string surface;
    FieldDescriptor descriptor;  ///< name == surface
};
struct GenBlock {
    Block block;
    std::string surface;
    std::vector<GenField> fields;
};
struct GenCandidate {
    std::string doi;
    std::vector<GenBlock> blocks;
    std::vector<std::string> unmapped;  ///< extra block names that map nowhere
};

std::vector<GenCandidate> random_candidate_set(std::mt19937_64& rng, std::size_t max_candidates = 6,
                                               std::size_t max_fields = 8);
CandidateSchema render(const GenCandidate& g);

struct OracleMerge {
    StandardizedSchema schema;
    std::vector<std::tuple<Block, std::string, std::size_t>> dropped;
};

/// Brute-force union with frequency threshold, computed from the abstract
/// descriptions (never from block or field surface names).
OracleMerge oracle_merge(const std::vector<GenCandidate>& set, std::size_t numerator, std::size_t denominator);

}  // namespace bioie::testing
