// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/mock_provider.hpp"
#include "bioie/validate.hpp"

#include <catch_amalgamated.hpp>

using namespace bioie;

namespace {

ExtractionResult clean() {
    return parse_result(R"({
        "Species": [{"name": "Procambarus clarkii", "role": "invasive", "taxonomy_level": "species"}],
        "Location": [{"name": "Italy", "category": "administrative", "geopolitical_info": "country"}],
        "Ecosystem": [{"name": "riverine ecosystems", "type": "aquatic", "scope": "regional"}],
        "Habitat": [{"name": "river banks", "type": "aquatic", "subcomponent_of": "riverine ecosystems"}],
        "Relationships": [{"related_entities": ["Procambarus clarkii", "Italy"], "name": "introduced to",
                           "type": "anthropogenic", "directionality": "unidirectional"}]})",
                        "10.1/clean");
}

}  // namespace

TEST_CASE("a clean result has no violations", "[validate]") {
    auto v = validate_result(clean(), reference_schema());
    CHECK(v.violations.empty());
    CHECK(v.ok());
}

TEST_CASE("each mutation raises its own code", "[validate]") {
    const auto& schema = reference_schema();
    struct Case {
        const char* code;
        bool error;
        std::function<void(ExtractionResult&)> mutate;
    };
    std::vector<Case> cases = {
        {"unknown_field", true, [](auto& r) { r.locations[0].extra["elevation"] = "high"; }},
        {"closed_enum_violation", true, [](auto& r) { r.ecosystems[0].type = "volcanic"; }},
        {"closed_enum_violation", true, [](auto& r) { r.relationships[0].directionality = "sideways"; }},
        {"non_core_value", false, [](auto& r) { r.species[0].role = "cryptogenic"; }},
        {"missing_name", true, [](auto& r) { r.species[0].name = "  "; }},
        {"dangling_related_entity", true, [](auto& r) { r.relationships[0].related_entities[0].name = "Nobody"; }},
        {"dangling_subcomponent_of", false, [](auto& r) { r.habitats[0].subcomponent_of = "lake ecosystems"; }},
        {"unknown_block", true, [](auto& r) { r.extra_blocks["Pathways"] = "ballast water"; }},
        {"status_inconsistent", true, [](auto& r) { r.status = ResultStatus::OutOfScope; }},
        {"empty_relationship", false, [](auto& r) { r.relationships[0].related_entities.clear(); }},
    };
    for (const auto& c : cases) {
        auto r = clean();
        c.mutate(r);
        auto v = validate_result(r, schema);
        INFO(c.code);
        CHECK(v.has(c.code));
        CHECK(v.ok() == !c.error);
    }
}

TEST_CASE("enum values match case-insensitively", "[validate]") {
    auto r = clean();
    r.locations[0].geopolitical_info = "Country";
    CHECK(validate_result(r, reference_schema()).violations.empty());
}

TEST_CASE("extras declared by the schema are accepted", "[validate]") {
    auto schema = reference_schema();
    schema.block(Block::Location).fields.push_back({"elevation", FieldKind::Enum, {"low", "high"}, {}, {}});
    auto r = clean();
    r.locations[0].extra["elevation"] = "high";
    CHECK(validate_result(r, schema).violations.empty());
    r.locations[0].extra["elevation"] = "medium";
    CHECK(validate_result(r, schema).has("closed_enum_violation"));
}

TEST_CASE("mock extractions validate against the reference schema", "[validate]") {
    for (const char* text : {
             "Invasive Dreissena polymorpha in Lake Garda, Italy, displaces native Unio mussels.",
             "The cane toad Rhinella marina was released in Queensland, Australia, and preys on native frogs.",
             "Harmonia axyridis competes with native ladybirds across Europe and North America.",
         }) {
        auto r = mock_extract(MockRulebook::embedded(), text, "10.1/m");
        INFO(text);
        CHECK(validate_result(r, reference_schema()).ok());
    }
}
