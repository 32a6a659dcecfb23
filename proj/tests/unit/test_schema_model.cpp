// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/error.hpp"
#include "bioie/schema_model.hpp"

#include <catch_amalgamated.hpp>

using namespace bioie;

TEST_CASE("reference schema is structurally valid", "[schema_model]") {
    CHECK(check_schema(reference_schema()).empty());
    CHECK(is_open_vocabulary(Block::Species, "role"));
    CHECK_FALSE(is_open_vocabulary(Block::Location, "geopolitical_info"));
}

TEST_CASE("schema JSON round trips", "[schema_model]") {
    auto j = schema_to_json(reference_schema());
    CHECK(schema_from_json(j) == reference_schema());
    CHECK(j["Habitat"]["subcomponent_of"]["kind"] == "reference");
    CHECK(j["Habitat"]["subcomponent_of"]["target"] == "Ecosystem");
    CHECK(j["Relationships"]["related_entities"] == nlohmann::ordered_json::array({"entity1", "entity2", "..."}));

    auto s = reference_schema();
    s.block(Block::Species).fields.push_back({"status", FieldKind::Enum, {"established"}, {}, {}});
    s.block(Block::Location).fields.push_back({"coords", FieldKind::List, {}, {}, "lat, lon"});
    s.block(Block::Ecosystem).fields.push_back({"area", FieldKind::Text, {}, {}, {}});
    CHECK(schema_from_json(schema_to_json(s)) == s);
    CHECK(schema_fingerprint(s) != schema_fingerprint(reference_schema()));
    CHECK(schema_fingerprint(reference_schema()) == schema_fingerprint(schema_from_json(j)));
}

TEST_CASE("schema_from_json rejects unknown or missing blocks", "[schema_model]") {
    auto j = schema_to_json(reference_schema());
    auto extra = j;
    extra["Pathways"] = nlohmann::ordered_json::object();
    CHECK_THROWS_AS(schema_from_json(extra), ParseError);
    auto missing = j;
    missing.erase("Habitat");
    CHECK_THROWS_AS(schema_from_json(missing), ParseError);
}

TEST_CASE("check_schema finds structural problems", "[schema_model]") {
    auto s = reference_schema();
    auto& species = s.block(Block::Species).fields;
    species.erase(species.begin() + 2);  // taxonomy_level
    species[1].values = {"native"};      // role without most core values
    s.block(Block::Location).fields.push_back(s.block(Block::Location).fields[0]);
    auto problems = check_schema(s);
    auto has = [&](const std::string& text) {
        return std::any_of(problems.begin(), problems.end(), [&](const auto& p) { return p.find(text) != std::string::npos; });
    };
    CHECK(has("missing mandatory field taxonomy_level"));
    CHECK(has("missing core value invasive"));
    CHECK(has("duplicate field name"));
}

TEST_CASE("candidates in several shapes parse to the same descriptors", "[schema_model]") {
    auto compact = parse_candidate(R"({"Species": {"name": "species_name", "role": "native/invasive"}})", "10.1/a");
    auto fenced = parse_candidate("```json\n{\"schema\": {\"Species\": {\"name\": \"species_name\", "
                                  "\"role\": {\"kind\": \"enum\", \"values\": [\"native\", \"invasive\"]}}}}\n```",
                                  "10.1/a");
    auto json_schema = parse_candidate(
        R"({"type": "object", "properties": {"Species": {"type": "array", "items": {"type": "object", "properties":
            {"name": {"type": "string", "description": "species_name"}, "role": {"enum": ["native", "invasive"]}}}}}})",
        "10.1/a");
    auto instances = parse_candidate(
        R"({"Species": [{"name": "species_name", "role": "native/invasive"}, {"name": "x"}]})", "10.1/a");
    CHECK(compact == fenced);
    CHECK(compact == json_schema);
    CHECK(compact == instances);
    REQUIRE(compact.blocks.size() == 1);
    CHECK(compact.blocks[0].fields[1].kind == FieldKind::Enum);
}

TEST_CASE("unrecognized constructs are kept as notes", "[schema_model]") {
    auto c = parse_candidate(R"({"Species": {"count": 3, "tags": [1, 2]}, "version": 2})", "10.1/a");
    CHECK(c.notes == std::vector<std::string>{"version: 2"});
    REQUIRE(c.blocks[0].fields.size() == 2);
    CHECK(c.blocks[0].fields[0].note == "literal: 3");
    CHECK(c.blocks[0].fields[1].kind == FieldKind::List);
    CHECK(c.blocks[0].fields[1].note == "list: [1,2]");
    CHECK(parse_candidate(candidate_to_json(c).dump(), "10.1/a").blocks == c.blocks);
}

TEST_CASE("malformed candidates report an offset", "[schema_model]") {
    CHECK_THROWS_AS(parse_candidate("", "10.1/a"), ParseError);
    CHECK_THROWS_AS(parse_candidate("[1, 2]", "10.1/a"), ParseError);
    try {
        parse_candidate("{\"Species\": {\"name\": }", "10.1/a");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset() > 10);
    }
}

TEST_CASE("code fences are stripped once", "[schema_model]") {
    CHECK(strip_code_fence("  ```json\n{}\n```  ") == "{}");
    CHECK(strip_code_fence("```\nN/A\n```") == "N/A");
    CHECK(strip_code_fence("plain") == "plain");
}
