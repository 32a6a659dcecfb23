// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include "bioie/corpus_store.hpp"
#include "bioie/error.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bioie {

/// Looks a paper up by normalized DOI. nullopt means the index has no entry.
/// Implementations throw TransportError once their retry budget is spent and
/// must be safe to call from several threads at once.
class HarvestClient {
public:
    virtual ~HarvestClient() = default;
    virtual std::optional<PaperRecord> fetch(const std::string& doi) = 0;
};

/// Parses a search-API document into a record. Accepts the paper object
/// itself, {"payload": {...}}, or {"items": [...]} (first item). Returns
/// nullopt for an empty result set. Throws ParseError on malformed input.
std::optional<PaperRecord> parse_harvest_document(const std::string& body, const std::string& doi);

struct HttpHarvestConfig {
    std::string base_url;                                 ///< scheme://host[:port]
    std::string path_template = "/api/papers?doi={doi}";  ///< {doi} is URL-encoded
    std::chrono::milliseconds timeout{10000};
    int max_retries = 3;
    std::chrono::milliseconds backoff_base{500};
};

/// HTTP GET against a scholarly-search endpoint. 404 means "not found";
/// 429, 5xx and connection errors are retried with exponential backoff.
class HttpHarvestClient final : public HarvestClient {
public:
    explicit HttpHarvestClient(HttpHarvestConfig config);
    std::optional<PaperRecord> fetch(const std::string& doi) override;

private:
    HttpHarvestConfig config_;
};

/// Reads canned responses from `<dir>/<doi_file_stem(doi)>.json`; a missing
/// file means "not found".
class FixtureHarvestClient final : public HarvestClient {
public:
    explicit FixtureHarvestClient(std::filesystem::path dir);
    std::optional<PaperRecord> fetch(const std::string& doi) override;

private:
    std::filesystem::path dir_;
};

struct IngestSummary {
    std::size_t queried = 0;
    std::size_t found = 0;
    std::size_t abstract_only = 0;
    std::size_t with_full_text = 0;
    std::vector<std::string> missing;    ///< normalized DOIs the index did not have
    std::vector<std::string> malformed;  ///< raw inputs that were not DOIs
};

/// Thrown when the client fails mid-batch. Everything fetched before the
/// failure is already in the store; `summary()` counts it.
class PartialIngestError : public TransportError {
public:
    PartialIngestError(const std::string& what, int last_status, IngestSummary summary)
        : TransportError(what, last_status), summary_(std::move(summary)) {}
    const IngestSummary& summary() const noexcept { return summary_; }

private:
    IngestSummary summary_;
};

struct IngestOptions {
    int parallelism = 4;
    std::optional<std::filesystem::path> skip_log;  ///< "<doi>\t<reason>" per skipped input
};

/// Fetch every DOI and upsert what is found. Workers fetch concurrently; the
/// calling thread is the only one writing to `store`. Duplicate DOIs in the
/// input are queried once.
IngestSummary ingest_dois(const std::vector<std::string>& doi_list, HarvestClient& client,
                          CorpusStore& store, const IngestOptions& options = {});

}  // namespace bioie
