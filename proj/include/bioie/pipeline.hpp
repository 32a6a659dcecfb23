// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include "bioie/checkpoint.hpp"
#include "bioie/corpus_store.hpp"
#include "bioie/error.hpp"
#include "bioie/extraction_result.hpp"
#include "bioie/llm_gateway.hpp"
#include "bioie/merge.hpp"
#include "bioie/prompts.hpp"
#include "bioie/schema_model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bioie {

struct StageConfig {
    std::size_t sample_size = 10;
    std::size_t generalize_variants = 3;
    std::size_t parallelism = 4;
    RateLimitPolicy rate;
    std::uint64_t rng_seed = 0;
    /// Human-flagged papers: if sampled, they are quarantined instead of sent.
    std::set<std::string> exclude;
    MergeOptions merge;
    /// Variant to extract with; variant 0 (the deterministic merge) if unset.
    std::optional<std::size_t> selected_variant;
    std::size_t checkpoint_every = 25;
    PromptTemplates templates = PromptTemplates::defaults();

    /// Throws PreconditionError unless sample_size >= 2, generalize_variants
    /// >= 1, parallelism >= 1 and checkpoint_every >= 1.
    void check() const;
};

struct QuarantineRecord {
    std::string doi;
    std::string reason;
    std::string raw;
    bool operator==(const QuarantineRecord&) const = default;
};

nlohmann::ordered_json quarantine_to_json(const QuarantineRecord& q);

/// `n` DOIs of records with abstracts, drawn without replacement by a seeded
/// shuffle of the DOI-sorted records. Same seed, same store, same sample on
/// every platform.
std::vector<std::string> sample_dois(const CorpusStore& store, std::size_t n, std::uint64_t seed);

struct SpecializeOutcome {
    std::vector<std::string> sampled;  ///< in draw order
    std::vector<CandidateSchema> candidates;
    std::vector<QuarantineRecord> quarantined;
};

/// Sequential. Unparseable or empty responses are quarantined. Throws
/// PreconditionError when the store has too few abstracts and StageError
/// when fewer than two candidates survive or the gateway fails.
SpecializeOutcome run_specialize(const CorpusStore& store, const StageConfig& config, LlmGateway& gateway);

struct SchemaVariant {
    std::size_t index = 0;
    std::optional<StandardizedSchema> schema;  ///< empty when structurally invalid
    std::string raw;                           ///< provider text; empty for variant 0
    std::vector<std::string> problems;
};

struct GeneralizeOutcome {
    /// variants[0] is merge_candidates over the candidates; variants[i] for
    /// i >= 1 is the i-th LLM run.
    std::vector<SchemaVariant> variants;
    MergeReport oracle_report;
    std::size_t chosen = 0;

    const StandardizedSchema& chosen_schema() const { return *variants.at(chosen).schema; }
};

/// Raised when every LLM variant is structurally invalid; keeps the raw
/// responses for inspection.
class GeneralizeError : public StageError {
public:
    GeneralizeError(const std::string& what, std::vector<std::string> raw)
        : StageError(what), raw_(std::move(raw)) {}
    const std::vector<std::string>& raw_responses() const { return raw_; }

private:
    std::vector<std::string> raw_;
};

GeneralizeOutcome run_generalize(const std::vector<CandidateSchema>& candidates, const StageConfig& config,
                                 LlmGateway& gateway);

struct ExtractionRunSummary {
    std::size_t processed = 0;
    std::size_t extracted = 0;
    std::size_t out_of_scope = 0;
    std::size_t quarantined = 0;
    bool complete = false;

    bool operator==(const ExtractionRunSummary&) const = default;
};

/// Files kept by run_extract inside its working directory.
struct ExtractPaths {
    std::filesystem::path results;     ///< results.jsonl
    std::filesystem::path checkpoint;  ///< checkpoint.json
    std::filesystem::path quarantine;  ///< quarantine.jsonl

    explicit ExtractPaths(const std::filesystem::path& dir);
};

struct ExtractControl {
    /// Stop abruptly after this many commits in this call, without flushing
    /// the checkpoint or compacting, as a killed process would.
    std::optional<std::size_t> halt_after;
};

/// Extracts every record with an abstract that the working directory does
/// not already account for. Up to `parallelism` completions are in flight;
/// one committer appends results and flushes the checkpoint every
/// `checkpoint_every` commits. On completion the results file is rewritten
/// sorted by DOI.
///
/// Resuming: an existing checkpoint must carry the fingerprint of `schema`
/// (StageError otherwise); results already in the log count as done even if
/// the checkpoint predates them. A gateway failure flushes the checkpoint and
/// throws StageError; calling again resumes.
ExtractionRunSummary run_extract(const CorpusStore& store, const StandardizedSchema& schema,
                                 const StageConfig& config, LlmGateway& gateway,
                                 const std::filesystem::path& work_dir, std::size_t schema_variant = 0,
                                 ExtractControl control = {});

/// Committed results of a working directory (or a results file), in file
/// order. Malformed lines are skipped.
std::vector<ExtractionResult> load_results(const std::filesystem::path& results_file);

}  // namespace bioie
