// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/pipeline.hpp"

#include "bioie/io_util.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include <spdlog/spdlog.h>

namespace bioie {

namespace fs = std::filesystem;

namespace {

/// Uniform draw in [0, bound) by rejection; std distributions are not
/// specified bit-for-bit across standard libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const auto limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

struct Outcome {
    std::optional<ExtractionResult> result;
    std::optional<QuarantineRecord> quarantine;
    std::exception_ptr error;
};

std::vector<QuarantineRecord> load_quarantine(const fs::path& path) {
    std::vector<QuarantineRecord> out;
    if (!fs::exists(path)) return out;
    for (const auto& line : read_lines(path)) {
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("doi")) continue;
        out.push_back({j.value("doi", ""), j.value("reason", ""), j.value("raw", "")});
    }
    return out;
}

template <typename T, typename Key, typename Dump>
void rewrite_sorted(const fs::path& path, std::vector<T> items, Key key, Dump dump) {
    std::stable_sort(items.begin(), items.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
    std::string body;
    std::string last;
    bool first = true;
    for (const auto& it : items) {
        if (!first && key(it) == last) continue;
        first = false;
        last = key(it);
        body += dump(it);
        body += '\n';
    }
    write_file_atomic(path, body);
}

}  // namespace

void StageConfig::check() const {
    if (sample_size < 2) throw PreconditionError("sample_size must be at least 2");
    if (generalize_variants < 1) throw PreconditionError("generalize_variants must be at least 1");
    if (parallelism < 1) throw PreconditionError("parallelism must be at least 1");
    if (checkpoint_every < 1) throw PreconditionError("checkpoint_every must be at least 1");
    rate.check();
}

nlohmann::ordered_json quarantine_to_json(const QuarantineRecord& q) {
    return {{"doi", q.doi}, {"reason", q.reason}, {"raw", q.raw}};
}

std::vector<std::string> sample_dois(const CorpusStore& store, std::size_t n, std::uint64_t seed) {
    auto pool = store.with_abstracts();
    if (pool.size() < n) {
        throw PreconditionError("cannot sample " + std::to_string(n) + " papers from " + std::to_string(pool.size()) +
                                " with abstracts");
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        auto j = i + static_cast<std::size_t>(bounded(rng, pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(pool[i]->doi);
    return out;
}

SpecializeOutcome run_specialize(const CorpusStore& store, const StageConfig& config, LlmGateway& gateway) {
    config.check();
    SpecializeOutcome out;
    out.sampled = sample_dois(store, config.sample_size, config.rng_seed);
    for (const auto& doi : out.sampled) {
        if (config.exclude.count(doi)) {
            out.quarantined.push_back({doi, "excluded", ""});
            continue;
        }
        auto prompt = build_specialize_prompt(*store.find(doi), config.templates);
        LlmResponse resp;
        try {
            resp = gateway.complete(prompt);
        } catch (const TransportError& e) {
            throw StageError("specialize: " + doi + ": " + e.what());
        }
        try {
            auto candidate = parse_candidate(resp.raw_text, doi);
            if (candidate.blocks.empty()) {
                out.quarantined.push_back({doi, "response has no schema blocks", resp.raw_text});
                continue;
            }
            out.candidates.push_back(std::move(candidate));
        } catch (const ParseError& e) {
            out.quarantined.push_back({doi, e.what(), resp.raw_text});
        }
    }
    for (const auto& q : out.quarantined) spdlog::info("specialize: quarantined {} ({})", q.doi, q.reason);
    if (out.candidates.size() < 2) {
        throw StageError("specialize produced " + std::to_string(out.candidates.size()) +
                         " usable candidate schemas; at least 2 are needed");
    }
    return out;
}

GeneralizeOutcome run_generalize(const std::vector<CandidateSchema>& candidates, const StageConfig& config,
                                 LlmGateway& gateway) {
    config.check();
    if (candidates.size() < 2) throw PreconditionError("generalize needs at least two candidate schemas");
    GeneralizeOutcome out;
    auto oracle = merge_candidates(candidates, config.merge);
    out.oracle_report = oracle.report;
    out.variants.push_back({0, std::move(oracle.schema), "", {}});

    std::vector<std::string> raws;
    bool any_valid = false;
    const auto total = config.generalize_variants;
    for (std::size_t i = 1; i <= total; ++i) {
        auto prompt = build_generalize_prompt(candidates, {i, total}, config.templates);
        LlmResponse resp;
        try {
            resp = gateway.complete(prompt);
        } catch (const TransportError& e) {
            throw StageError("generalize variant " + std::to_string(i) + ": " + e.what());
        }
        SchemaVariant v;
        v.index = i;
        v.raw = resp.raw_text;
        raws.push_back(resp.raw_text);
        if (!resp.parsed) {
            v.problems.push_back("response is not a single JSON document");
        } else {
            try {
                auto schema = schema_from_json(*resp.parsed);
                v.problems = check_schema(schema);
                if (v.problems.empty()) v.schema = std::move(schema);
            } catch (const ParseError& e) {
                v.problems.push_back(e.what());
            }
        }
        if (v.schema) {
            any_valid = true;
        } else {
            spdlog::warn("generalize variant {} rejected: {}", i, v.problems.front());
        }
        out.variants.push_back(std::move(v));
    }
    if (!any_valid) throw GeneralizeError("every generalized schema variant is structurally invalid", raws);

    out.chosen = config.selected_variant.value_or(0);
    if (out.chosen >= out.variants.size()) {
        throw PreconditionError("selected variant " + std::to_string(out.chosen) + " does not exist");
    }
    if (!out.variants[out.chosen].schema) {
        throw StageError("selected variant " + std::to_string(out.chosen) + " is structurally invalid");
    }
    return out;
}

ExtractPaths::ExtractPaths(const fs::path& dir)
    : results(dir / "results.jsonl"), checkpoint(dir / "checkpoint.json"), quarantine(dir / "quarantine.jsonl") {}

std::vector<ExtractionResult> load_results(const fs::path& results_file) {
    std::vector<ExtractionResult> out;
    if (!fs::exists(results_file)) return out;
    for (const auto& line : read_lines(results_file)) {
        auto j = nlohmann::ordered_json::parse(line, nullptr, false);
        if (j.is_discarded()) continue;
        try {
            out.push_back(result_from_json(j));
        } catch (const ParseError&) {
        }
    }
    return out;
}

ExtractionRunSummary run_extract(const CorpusStore& store, const StandardizedSchema& schema,
                                 const StageConfig& config, LlmGateway& gateway, const fs::path& work_dir,
                                 std::size_t schema_variant, ExtractControl control) {
    config.check();
    if (auto problems = check_schema(schema); !problems.empty()) {
        throw PreconditionError("extraction schema is invalid: " + problems.front());
    }
    fs::create_directories(work_dir);
    const ExtractPaths paths(work_dir);
    const auto fingerprint = schema_fingerprint(schema);

    Checkpoint cp;
    if (auto loaded = load_checkpoint(paths.checkpoint)) {
        if (loaded->schema_fingerprint != fingerprint) {
            throw StageError("checkpoint in " + work_dir.string() + " was written under schema " +
                             loaded->schema_fingerprint + "; refusing to resume under " + fingerprint);
        }
        cp = std::move(*loaded);
    } else {
        cp.schema_fingerprint = fingerprint;
        cp.schema_variant = schema_variant;
    }

    // The logs are ahead of the checkpoint after a crash; they are the truth.
    {
        auto committed = load_results(paths.results);
        for (const auto& r : committed) {
            cp.quarantined.erase(r.paper_doi);
            cp.completed.insert(r.paper_doi);
            if (r.status == ResultStatus::OutOfScope) cp.out_of_scope.insert(r.paper_doi);
        }
        if (fs::exists(paths.results)) {
            rewrite_sorted(
                paths.results, std::move(committed), [](const ExtractionResult& r) { return r.paper_doi; },
                [](const ExtractionResult& r) { return result_to_json(r).dump(); });
        }
        for (const auto& q : load_quarantine(paths.quarantine)) {
            if (!cp.completed.count(q.doi)) cp.quarantined.emplace(q.doi, q.reason);
        }
    }
    save_checkpoint(paths.checkpoint, cp);

    std::vector<const PaperRecord*> pending;
    for (const auto* rec : store.with_abstracts()) {
        if (!cp.contains(rec->doi)) pending.push_back(rec);
    }
    spdlog::info("extract: {} already processed, {} pending", cp.processed(), pending.size());

    std::mutex mu;
    std::condition_variable cv;
    std::deque<Outcome> done;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::size_t live = std::min(config.parallelism, pending.size());

    auto worker = [&] {
        while (!stop.load()) {
            auto i = next.fetch_add(1);
            if (i >= pending.size()) break;
            const auto& paper = *pending[i];
            Outcome o;
            try {
                auto resp = gateway.complete(build_extract_prompt(paper, schema, config.templates));
                try {
                    auto r = parse_result(resp.raw_text, paper.doi);
                    resolve_references(r);
                    o.result = std::move(r);
                } catch (const QuarantineError& e) {
                    o.quarantine = QuarantineRecord{paper.doi, e.what(), e.raw()};
                }
            } catch (...) {
                o.error = std::current_exception();
                stop = true;
            }
            std::lock_guard lock(mu);
            done.push_back(std::move(o));
            cv.notify_one();
        }
        std::lock_guard lock(mu);
        --live;
        cv.notify_one();
    };

    std::exception_ptr failure;
    bool halted = false;
    std::size_t commits = 0;
    {
        std::vector<std::jthread> workers;
        for (std::size_t i = 0; i < std::min(config.parallelism, pending.size()); ++i) workers.emplace_back(worker);

        while (true) {
            Outcome o;
            {
                std::unique_lock lock(mu);
                cv.wait(lock, [&] { return !done.empty() || live == 0; });
                if (done.empty()) break;
                o = std::move(done.front());
                done.pop_front();
            }
            if (o.error) {
                if (!failure) failure = o.error;
                continue;
            }
            if (o.result) {
                append_line(paths.results, result_to_json(*o.result).dump());
                cp.completed.insert(o.result->paper_doi);
                if (o.result->status == ResultStatus::OutOfScope) cp.out_of_scope.insert(o.result->paper_doi);
            } else {
                append_line(paths.quarantine, quarantine_to_json(*o.quarantine).dump());
                cp.quarantined.emplace(o.quarantine->doi, o.quarantine->reason);
                spdlog::warn("extract: quarantined {}: {}", o.quarantine->doi, o.quarantine->reason);
            }
            ++commits;
            if (control.halt_after && commits >= *control.halt_after) {
                halted = true;
                stop = true;
                break;
            }
            if (commits % config.checkpoint_every == 0) {
                save_checkpoint(paths.checkpoint, cp);
                spdlog::info("extract: {} processed", cp.processed());
            }
        }
        stop = true;
    }

    ExtractionRunSummary summary{cp.processed(), cp.extracted(), cp.out_of_scope.size(), cp.quarantined.size(), false};
    if (halted) return summary;

    save_checkpoint(paths.checkpoint, cp);
    if (failure) {
        try {
            std::rethrow_exception(failure);
        } catch (const Error& e) {
            throw StageError(std::string("extract stopped after ") + std::to_string(cp.processed()) +
                             " papers: " + e.what());
        }
    }

    rewrite_sorted(
        paths.results, load_results(paths.results), [](const ExtractionResult& r) { return r.paper_doi; },
        [](const ExtractionResult& r) { return result_to_json(r).dump(); });
    rewrite_sorted(
        paths.quarantine, load_quarantine(paths.quarantine), [](const QuarantineRecord& q) { return q.doi; },
        [](const QuarantineRecord& q) { return quarantine_to_json(q).dump(); });
    summary.complete = true;
    spdlog::info("extract: extracted={} out_of_scope={} quarantined={}", summary.extracted, summary.out_of_scope,
                 summary.quarantined);
    return summary;
}

}  // namespace bioie
