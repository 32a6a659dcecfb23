// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/corpus_store.hpp"
#include "bioie/error.hpp"
#include "bioie/io_util.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace bioie;
using bioie::testing::TempDir;

namespace {

PaperRecord paper(std::string doi, std::optional<std::string> abstract, std::optional<std::string> full = {}) {
    PaperRecord r;
    r.doi = std::move(doi);
    r.title = "Title of " + r.doi;
    r.abstract = std::move(abstract);
    r.full_text = std::move(full);
    return r;
}

}  // namespace

TEST_CASE("upsert normalizes the DOI and replaces by key", "[corpus_store]") {
    CorpusStore s;
    s.upsert(paper("https://doi.org/10.1/B", "first"));
    s.upsert(paper("10.1/b", "second"));
    REQUIRE(s.size() == 1);
    REQUIRE(s.find("10.1/b"));
    CHECK(s.find("10.1/b")->abstract == "second");
    CHECK(s.find("https://doi.org/10.1/B") == s.find("10.1/b"));
    CHECK(s.find("10.1/zzz") == nullptr);
    CHECK_THROWS_AS(s.upsert(paper("not-a-doi", "x")), PreconditionError);
}

TEST_CASE("records iterate in DOI order and with_abstracts filters", "[corpus_store]") {
    CorpusStore s;
    s.upsert(paper("10.1/c", "abstract"));
    s.upsert(paper("10.1/a", std::nullopt, "body"));
    s.upsert(paper("10.1/b", ""));
    std::vector<std::string> order;
    for (const auto& [doi, r] : s.records()) order.push_back(doi);
    CHECK(order == std::vector<std::string>{"10.1/a", "10.1/b", "10.1/c"});
    auto with = s.with_abstracts();
    REQUIRE(with.size() == 1);
    CHECK(with[0]->doi == "10.1/c");
}

TEST_CASE("absent optionals are omitted from JSON", "[corpus_store]") {
    auto j = record_to_json(paper("10.1/a", "abs"));
    CHECK(j.contains("abstract"));
    CHECK_FALSE(j.contains("full_text"));
    CHECK_FALSE(j.contains("year"));
    CHECK_FALSE(j.contains("publisher"));
}

TEST_CASE("record_from_json rejects bad DOIs and years", "[corpus_store]") {
    CHECK_THROWS_AS(record_from_json({{"title", "t"}}), ParseError);
    CHECK_THROWS_AS(record_from_json({{"doi", "nope"}}), ParseError);
    CHECK_THROWS_AS(record_from_json({{"doi", "10.1/a"}, {"year", 99}}), ParseError);
    auto r = record_from_json({{"doi", "DOI:10.1/A"}, {"year", 2021}, {"publisher", "Elsevier"}});
    CHECK(r.doi == "10.1/a");
    CHECK(r.year == 2021);
}

TEST_CASE("export then import is the identity in both formats", "[corpus_store]") {
    CorpusStore s;
    auto a = paper("10.1/a", "alpha \"quoted\" text", "full body\nwith lines");
    a.year = 2019;
    a.publisher = "Springer";
    s.upsert(a);
    s.upsert(paper("10.1/b", "beta"));
    s.upsert(paper("10.1/c", std::nullopt, "only full text"));
    TempDir dir;
    for (auto fmt : {CorpusFormat::Lines, CorpusFormat::Archive}) {
        auto path = dir / (fmt == CorpusFormat::Lines ? "c.jsonl" : "c.json");
        CHECK(export_corpus(s, path, fmt) == 3);
        CHECK(import_corpus(path) == s);
    }
}

TEST_CASE("import handles empty and missing files", "[corpus_store]") {
    TempDir dir;
    write_file_atomic(dir / "empty.jsonl", "");
    CHECK(import_corpus(dir / "empty.jsonl").empty());
    CHECK_THROWS_AS(import_corpus(dir / "missing.jsonl"), IoError);
    write_file_atomic(dir / "bad.jsonl", "{\"doi\": \"10.1/a\"}\n{broken\n");
    CHECK_THROWS_AS(import_corpus(dir / "bad.jsonl"), ParseError);
}
