// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/error.hpp"
#include "bioie/io_util.hpp"
#include "bioie/pipeline.hpp"
#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <set>

using namespace bioie;
using namespace bioie::testing;

namespace {

StageConfig fast_config() {
    StageConfig c;
    c.rate = fast_policy();
    c.rng_seed = 7;
    return c;
}

CorpusStore synthetic() { return import_corpus(data_dir() / "corpus" / "synthetic20.jsonl"); }

}  // namespace

TEST_CASE("sampling is seeded, without replacement and abstract-only", "[pipeline]") {
    auto store = synthetic();
    PaperRecord no_abstract;
    no_abstract.doi = "10.5555/zzz.none";
    no_abstract.full_text = "body";
    store.upsert(no_abstract);

    auto a = sample_dois(store, 10, 7);
    CHECK(a == sample_dois(store, 10, 7));
    CHECK(a != sample_dois(store, 10, 8));
    CHECK(std::set<std::string>(a.begin(), a.end()).size() == 10);
    CHECK(std::find(a.begin(), a.end(), "10.5555/zzz.none") == a.end());
    auto all = sample_dois(store, 20, 1);
    CHECK(std::set<std::string>(all.begin(), all.end()).size() == 20);
    CHECK_THROWS_AS(sample_dois(store, 21, 1), PreconditionError);
}

TEST_CASE("stage config invariants", "[pipeline]") {
    auto c = fast_config();
    CHECK_NOTHROW(c.check());
    c.sample_size = 1;
    CHECK_THROWS_AS(c.check(), PreconditionError);
    c = fast_config();
    c.checkpoint_every = 0;
    CHECK_THROWS_AS(c.check(), PreconditionError);
}

TEST_CASE("specialize keeps nine candidates and quarantines the N/A paper", "[pipeline]") {
    auto store = synthetic();
    auto cfg = fast_config();
    LlmGateway gw(std::make_shared<MockProvider>(), cfg.rate);
    auto out = run_specialize(store, cfg, gw);
    CHECK(out.sampled.size() == 10);
    CHECK(out.candidates.size() == 9);
    REQUIRE(out.quarantined.size() == 1);
    CHECK(out.quarantined[0].raw == "N/A");

    cfg.exclude = {out.candidates[0].paper_doi};
    auto excluded = run_specialize(store, cfg, gw);
    CHECK(excluded.candidates.size() == 8);
    CHECK(std::any_of(excluded.quarantined.begin(), excluded.quarantined.end(),
                      [](const auto& q) { return q.reason == "excluded"; }));
}

TEST_CASE("specialize needs two usable candidates", "[pipeline]") {
    auto store = synthetic();
    auto cfg = fast_config();
    auto junk = std::make_shared<ScriptedProvider>([](const PromptPair&, std::size_t) -> ProviderReply {
        return {200, "I am not sure."};
    });
    LlmGateway gw(junk, cfg.rate);
    CHECK_THROWS_AS(run_specialize(store, cfg, gw), StageError);
}

TEST_CASE("generalize returns the merge oracle plus each variant", "[pipeline]") {
    auto store = synthetic();
    auto cfg = fast_config();
    LlmGateway gw(std::make_shared<MockProvider>(), cfg.rate);
    auto spec = run_specialize(store, cfg, gw);
    auto gen = run_generalize(spec.candidates, cfg, gw);
    REQUIRE(gen.variants.size() == 4);
    CHECK(gen.chosen == 0);
    CHECK(gen.variants[0].schema == merge_candidates(spec.candidates).schema);
    for (const auto& v : gen.variants) {
        REQUIRE(v.schema);
        CHECK(check_schema(*v.schema).empty());
    }

    cfg.selected_variant = 2;
    auto picked = run_generalize(spec.candidates, cfg, gw);
    CHECK(picked.chosen == 2);
    CHECK(&picked.chosen_schema() == &*picked.variants[2].schema);
    cfg.selected_variant = 9;
    CHECK_THROWS_AS(run_generalize(spec.candidates, cfg, gw), PreconditionError);
}

TEST_CASE("generalize fails when every variant is invalid", "[pipeline]") {
    auto store = synthetic();
    auto cfg = fast_config();
    LlmGateway mock_gw(std::make_shared<MockProvider>(), cfg.rate);
    auto spec = run_specialize(store, cfg, mock_gw);
    auto bad = std::make_shared<ScriptedProvider>([](const PromptPair&, std::size_t call) -> ProviderReply {
        return {200, call == 0 ? "not json" : R"({"Species": {"name": "text"}})"};
    });
    LlmGateway gw(bad, cfg.rate);
    try {
        run_generalize(spec.candidates, cfg, gw);
        FAIL("expected GeneralizeError");
    } catch (const GeneralizeError& e) {
        CHECK(e.raw_responses().size() == 3);
        CHECK(e.raw_responses()[0] == "not json");
    }
}

TEST_CASE("extract conserves papers and writes sorted results", "[pipeline]") {
    auto store = synthetic();
    auto cfg = fast_config();
    LlmGateway gw(std::make_shared<MockProvider>(), cfg.rate);
    TempDir dir;
    auto s = run_extract(store, reference_schema(), cfg, gw, dir.path());
    CHECK(s.complete);
    CHECK(s.processed == 20);
    CHECK(s.extracted == 17);
    CHECK(s.out_of_scope == 3);
    CHECK(s.quarantined == 0);
    auto results = load_results(ExtractPaths(dir.path()).results);
    REQUIRE(results.size() == 20);
    CHECK(std::is_sorted(results.begin(), results.end(),
                         [](const auto& a, const auto& b) { return a.paper_doi < b.paper_doi; }));

    // A second run finds nothing left to do.
    auto again = run_extract(store, reference_schema(), cfg, gw, dir.path());
    CHECK(again.processed == 20);
}

TEST_CASE("unparseable answers are quarantined, not fatal", "[pipeline]") {
    auto store = synthetic();
    auto cfg = fast_config();
    auto mock = std::make_shared<MockProvider>();
    auto provider = std::make_shared<ScriptedProvider>([mock](const PromptPair& p, std::size_t) -> ProviderReply {
        if (p.user.find("Phragmites") != std::string::npos) return {200, "The answer is: {broken"};
        return mock->send(p);
    });
    LlmGateway gw(provider, cfg.rate);
    TempDir dir;
    auto s = run_extract(store, reference_schema(), cfg, gw, dir.path());
    CHECK(s.quarantined >= 1);
    CHECK(s.extracted + s.out_of_scope + s.quarantined == 20);
    auto lines = read_lines(ExtractPaths(dir.path()).quarantine);
    CHECK(lines.size() == s.quarantined);
    CHECK(lines[0].find("The answer is: {broken") != std::string::npos);
}

TEST_CASE("resume after a halt matches an uninterrupted run", "[pipeline]") {
    auto store = generated_corpus(20, 5, 9);
    auto cfg = fast_config();
    cfg.checkpoint_every = 3;
    LlmGateway gw(std::make_shared<MockProvider>(), cfg.rate);
    TempDir ref;
    run_extract(store, reference_schema(), cfg, gw, ref.path());
    auto expected = read_file(ExtractPaths(ref.path()).results);
    for (std::size_t k : {1, 4, 7, 24}) {
        TempDir dir;
        auto partial = run_extract(store, reference_schema(), cfg, gw, dir.path(), 0, {k});
        CHECK_FALSE(partial.complete);
        auto done = run_extract(store, reference_schema(), cfg, gw, dir.path());
        CHECK(done.complete);
        CHECK(read_file(ExtractPaths(dir.path()).results) == expected);
    }
}

TEST_CASE("a checkpoint from another schema is refused", "[pipeline]") {
    auto store = synthetic();
    auto cfg = fast_config();
    LlmGateway gw(std::make_shared<MockProvider>(), cfg.rate);
    TempDir dir;
    run_extract(store, reference_schema(), cfg, gw, dir.path(), 0, {3});
    auto other = reference_schema();
    other.block(Block::Species).fields.push_back({"status", FieldKind::Text, {}, {}, {}});
    CHECK_THROWS_AS(run_extract(store, other, cfg, gw, dir.path()), StageError);
}

TEST_CASE("provider outage stops the run; calling again resumes", "[pipeline]") {
    auto store = synthetic();
    auto cfg = fast_config();
    cfg.parallelism = 2;
    cfg.checkpoint_every = 100;
    auto breaking = std::make_shared<BreakingProvider>(std::make_shared<MockProvider>(), 6);
    LlmGateway gw(breaking, cfg.rate);
    gw.set_sleeper([](std::chrono::milliseconds) {});
    TempDir dir;
    CHECK_THROWS_AS(run_extract(store, reference_schema(), cfg, gw, dir.path()), StageError);
    auto cp = load_checkpoint(ExtractPaths(dir.path()).checkpoint);
    REQUIRE(cp);
    CHECK(cp->processed() >= 1);
    CHECK(cp->processed() < 20);

    breaking->heal();
    auto s = run_extract(store, reference_schema(), cfg, gw, dir.path());
    CHECK(s.complete);
    CHECK(s.processed == 20);

    TempDir ref;
    LlmGateway plain(std::make_shared<MockProvider>(), cfg.rate);
    run_extract(store, reference_schema(), cfg, plain, ref.path());
    CHECK(read_file(ExtractPaths(dir.path()).results) == read_file(ExtractPaths(ref.path()).results));
}
