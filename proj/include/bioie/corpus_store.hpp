// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bioie {

enum class RecordSource { Harvested, Imported };

/// One scholarly document. `doi` is always in normalized form.
struct PaperRecord {
    std::string doi;
    std::string title;
    std::optional<std::string> abstract;
    std::optional<std::string> full_text;
    std::optional<int> year;
    std::optional<std::string> publisher;
    RecordSource source = RecordSource::Imported;

    bool has_abstract() const { return abstract && !abstract->empty(); }
    bool has_full_text() const { return full_text && !full_text->empty(); }
    bool available() const { return has_abstract() || has_full_text(); }

    bool operator==(const PaperRecord&) const = default;
};

/// Absent optionals are omitted from the JSON object, never null-filled.
nlohmann::ordered_json record_to_json(const PaperRecord& record);

/// Throws ParseError on a missing/invalid DOI or a year outside 1000..9999.
PaperRecord record_from_json(const nlohmann::json& j);

/// In-memory corpus keyed by normalized DOI. Iteration order is DOI order.
/// Single-writer: callers serialize mutation; const access is shareable.
class CorpusStore {
public:
    /// Insert or replace by DOI. The DOI is normalized first; throws
    /// PreconditionError when it is not a DOI.
    void upsert(PaperRecord record);

    const PaperRecord* find(const std::string& doi) const;
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }

    const std::map<std::string, PaperRecord>& records() const { return records_; }

    /// Records that carry an abstract, in DOI order.
    std::vector<const PaperRecord*> with_abstracts() const;

    bool operator==(const CorpusStore&) const = default;

private:
    std::map<std::string, PaperRecord> records_;
};

enum class CorpusFormat {
    Lines,    ///< one JSON record per line
    Archive,  ///< single JSON document {"records": [...]}
};

/// Writes via temp file + rename. Returns the number of records written.
std::size_t export_corpus(const CorpusStore& store, const std::filesystem::path& path,
                          CorpusFormat format = CorpusFormat::Lines);

/// Reads either format (detected from the first non-blank character).
/// A missing file is an IoError; an empty file is an empty store.
CorpusStore import_corpus(const std::filesystem::path& path);

}  // namespace bioie
