// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/harvest.hpp"

#include "bioie/doi.hpp"
#include "bioie/io_util.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <set>
#include <thread>

namespace bioie {

namespace {

std::optional<std::string> string_field(const nlohmann::json& j, std::initializer_list<const char*> names) {
    for (const char* n : names) {
        auto it = j.find(n);
        if (it != j.end() && it->is_string() && !it->get<std::string>().empty()) return it->get<std::string>();
    }
    return std::nullopt;
}

std::optional<int> year_field(const nlohmann::json& j) {
    for (const char* n : {"year", "publication_year", "date_published"}) {
        auto it = j.find(n);
        if (it == j.end()) continue;
        int y = 0;
        if (it->is_number_integer()) {
            y = it->get<int>();
        } else if (it->is_string()) {
            auto s = it->get<std::string>();
            if (s.size() >= 4 && std::all_of(s.begin(), s.begin() + 4, ::isdigit)) y = std::stoi(s.substr(0, 4));
        }
        if (y >= 1000 && y <= 9999) return y;
    }
    return std::nullopt;
}

std::string url_encode(std::string_view s) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(kHex[c >> 4]);
            out.push_back(kHex[c & 15]);
        }
    }
    return out;
}

}  // namespace

std::optional<PaperRecord> parse_harvest_document(const std::string& body, const std::string& doi) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("harvest response for " + doi + ": " + e.what(), e.byte);
    }
    if (j.is_object() && j.contains("payload") && j["payload"].is_object()) j = j["payload"];
    for (const char* list : {"items", "results"}) {
        if (j.is_object() && j.contains(list) && j[list].is_array()) {
            if (j[list].empty()) return std::nullopt;
            j = j[list].front();
            break;
        }
    }
    if (!j.is_object()) throw ParseError("harvest response for " + doi + " is not an object", 0);

    PaperRecord r;
    r.doi = doi;
    r.title = string_field(j, {"title"}).value_or("");
    r.abstract = string_field(j, {"abstract"});
    r.full_text = string_field(j, {"full_text", "fullText", "fulltext"});
    r.year = year_field(j);
    r.publisher = string_field(j, {"publisher"});
    r.source = RecordSource::Harvested;
    if (!r.available()) return std::nullopt;
    return r;
}

HttpHarvestClient::HttpHarvestClient(HttpHarvestConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty()) throw PreconditionError("harvest base URL is empty");
    if (config_.max_retries < 0) throw PreconditionError("max_retries must be >= 0");
}

std::optional<PaperRecord> HttpHarvestClient::fetch(const std::string& doi) {
    std::string path = config_.path_template;
    if (auto pos = path.find("{doi}"); pos != std::string::npos) path.replace(pos, 5, url_encode(doi));

    httplib::Client client(config_.base_url);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());

    int last_status = 0;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(config_.backoff_base * (1 << std::min(attempt - 1, 10)));
        auto res = client.Get(path);
        if (!res) {
            last_status = 0;
            spdlog::warn("harvest {}: {} (attempt {})", doi, httplib::to_string(res.error()), attempt + 1);
            continue;
        }
        last_status = res->status;
        if (res->status == 200) return parse_harvest_document(res->body, doi);
        if (res->status == 404) return std::nullopt;
        if (res->status == 429 || res->status >= 500) {
            spdlog::warn("harvest {}: HTTP {} (attempt {})", doi, res->status, attempt + 1);
            continue;
        }
        throw TransportError("harvest " + doi + ": HTTP " + std::to_string(res->status), res->status);
    }
    throw TransportError("harvest " + doi + ": retries exhausted", last_status);
}

FixtureHarvestClient::FixtureHarvestClient(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::optional<PaperRecord> FixtureHarvestClient::fetch(const std::string& doi) {
    auto path = dir_ / (doi_file_stem(doi) + ".json");
    if (!std::filesystem::exists(path)) return std::nullopt;
    return parse_harvest_document(read_file(path), doi);
}

namespace {

struct FetchOutcome {
    std::string doi;
    std::optional<PaperRecord> record;
};

}  // namespace

IngestSummary ingest_dois(const std::vector<std::string>& doi_list, HarvestClient& client,
                          CorpusStore& store, const IngestOptions& options) {
    if (doi_list.empty()) throw PreconditionError("DOI list is empty");
    if (options.parallelism < 1) throw PreconditionError("parallelism must be >= 1");

    IngestSummary summary;
    std::vector<std::string> queue;
    std::set<std::string> seen;
    for (const auto& raw : doi_list) {
        auto doi = normalize_doi(raw);
        if (!doi) {
            spdlog::warn("skipping malformed DOI '{}'", raw);
            summary.malformed.push_back(raw);
            continue;
        }
        if (seen.insert(*doi).second) queue.push_back(*doi);
    }
    summary.queried = queue.size();

    std::mutex mu;
    std::condition_variable cv;
    std::deque<FetchOutcome> ready;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    std::optional<TransportError> failure;
    std::size_t finished_workers = 0;

    const auto workers = static_cast<std::size_t>(options.parallelism);
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, queue.size()); ++w) {
        pool.emplace_back([&] {
            while (!abort.load()) {
                auto i = next.fetch_add(1);
                if (i >= queue.size()) break;
                FetchOutcome out{queue[i], std::nullopt};
                try {
                    out.record = client.fetch(queue[i]);
                } catch (const TransportError& e) {
                    std::lock_guard lk(mu);
                    if (!failure) failure = e;
                    abort = true;
                    break;
                } catch (const ParseError& e) {
                    spdlog::warn("unparseable harvest response for {}: {}", queue[i], e.what());
                }
                std::lock_guard lk(mu);
                ready.push_back(std::move(out));
                cv.notify_one();
            }
            std::lock_guard lk(mu);
            ++finished_workers;
            cv.notify_one();
        });
    }
    const std::size_t started = pool.size();

    // Single writer: only this thread touches the store.
    for (;;) {
        std::unique_lock lk(mu);
        cv.wait(lk, [&] { return !ready.empty() || finished_workers == started; });
        if (ready.empty()) break;
        auto out = std::move(ready.front());
        ready.pop_front();
        lk.unlock();

        if (!out.record) {
            summary.missing.push_back(out.doi);
            continue;
        }
        ++summary.found;
        if (out.record->has_full_text()) {
            ++summary.with_full_text;
        } else {
            ++summary.abstract_only;
        }
        store.upsert(std::move(*out.record));
    }
    pool.clear();

    std::sort(summary.missing.begin(), summary.missing.end());
    if (options.skip_log) {
        std::string log;
        for (const auto& m : summary.malformed) log += m + "\tmalformed\n";
        for (const auto& m : summary.missing) log += m + "\tnot_found\n";
        write_file_atomic(*options.skip_log, log);
    }
    if (failure) {
        throw PartialIngestError(std::string("ingest interrupted: ") + failure->what(), failure->last_status(),
                                 summary);
    }
    return summary;
}

}  // namespace bioie
