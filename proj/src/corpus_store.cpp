// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/corpus_store.hpp"

#include "bioie/doi.hpp"
#include "bioie/error.hpp"
#include "bioie/io_util.hpp"

#include <cctype>

namespace bioie {

nlohmann::ordered_json record_to_json(const PaperRecord& r) {
    nlohmann::ordered_json j;
    j["doi"] = r.doi;
    j["title"] = r.title;
    if (r.abstract) j["abstract"] = *r.abstract;
    if (r.full_text) j["full_text"] = *r.full_text;
    if (r.year) j["year"] = *r.year;
    if (r.publisher) j["publisher"] = *r.publisher;
    j["source"] = r.source == RecordSource::Harvested ? "harvested" : "imported";
    return j;
}

PaperRecord record_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("record is not an object", 0);
    PaperRecord r;
    auto doi = normalize_doi(j.value("doi", std::string{}));
    if (!doi) throw ParseError("record has no valid doi", 0);
    r.doi = *doi;
    r.title = j.value("title", std::string{});
    if (auto it = j.find("abstract"); it != j.end() && it->is_string()) r.abstract = it->get<std::string>();
    if (auto it = j.find("full_text"); it != j.end() && it->is_string()) r.full_text = it->get<std::string>();
    if (auto it = j.find("year"); it != j.end() && !it->is_null()) {
        if (!it->is_number_integer()) throw ParseError("year is not an integer for " + r.doi, 0);
        int y = it->get<int>();
        if (y < 1000 || y > 9999) throw ParseError("year out of range for " + r.doi, 0);
        r.year = y;
    }
    if (auto it = j.find("publisher"); it != j.end() && it->is_string()) r.publisher = it->get<std::string>();
    r.source = j.value("source", std::string{"imported"}) == "harvested" ? RecordSource::Harvested
                                                                          : RecordSource::Imported;
    return r;
}

void CorpusStore::upsert(PaperRecord record) {
    auto doi = normalize_doi(record.doi);
    if (!doi) throw PreconditionError("not a DOI: '" + record.doi + "'");
    record.doi = *doi;
    records_.insert_or_assign(record.doi, std::move(record));
}

const PaperRecord* CorpusStore::find(const std::string& doi) const {
    auto key = normalize_doi(doi);
    if (!key) return nullptr;
    auto it = records_.find(*key);
    return it == records_.end() ? nullptr : &it->second;
}

std::vector<const PaperRecord*> CorpusStore::with_abstracts() const {
    std::vector<const PaperRecord*> out;
    for (const auto& [doi, r] : records_) {
        if (r.has_abstract()) out.push_back(&r);
    }
    return out;
}

std::size_t export_corpus(const CorpusStore& store, const std::filesystem::path& path,
                          CorpusFormat format) {
    std::string out;
    if (format == CorpusFormat::Lines) {
        for (const auto& [doi, r] : store.records()) {
            out += record_to_json(r).dump();
            out += '\n';
        }
    } else {
        nlohmann::ordered_json doc;
        doc["records"] = nlohmann::ordered_json::array();
        for (const auto& [doi, r] : store.records()) doc["records"].push_back(record_to_json(r));
        out = doc.dump(2);
        out += '\n';
    }
    write_file_atomic(path, out);
    return store.size();
}

CorpusStore import_corpus(const std::filesystem::path& path) {
    std::string text = read_file(path);
    CorpusStore store;

    std::size_t first = 0;
    while (first < text.size() && std::isspace(static_cast<unsigned char>(text[first]))) ++first;
    if (first == text.size()) return store;

    // An archive is one multi-line document; a lines file has a record per line.
    bool archive = false;
    if (text[first] == '{') {
        auto nl = text.find('\n', first);
        auto head = text.substr(first, nl == std::string::npos ? std::string::npos : nl - first);
        auto probe = nlohmann::json::parse(head, nullptr, false);
        archive = probe.is_discarded() || !probe.is_object() || !probe.contains("doi");
    }

    if (archive) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(path.string() + ": " + e.what(), e.byte);
        }
        if (!doc.contains("records") || !doc["records"].is_array()) {
            throw ParseError(path.string() + ": archive has no records array", 0);
        }
        for (const auto& j : doc["records"]) store.upsert(record_from_json(j));
        return store;
    }

    std::size_t offset = 0;
    std::size_t lineno = 0;
    while (offset < text.size()) {
        auto nl = text.find('\n', offset);
        auto end = nl == std::string::npos ? text.size() : nl;
        std::string_view line(text.data() + offset, end - offset);
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) {
            try {
                store.upsert(record_from_json(nlohmann::json::parse(line)));
            } catch (const nlohmann::json::parse_error& e) {
                throw ParseError(path.string() + " line " + std::to_string(lineno) + ": " + e.what(),
                                 offset + e.byte);
            }
        }
        offset = end + 1;
    }
    return store;
}

}  // namespace bioie
