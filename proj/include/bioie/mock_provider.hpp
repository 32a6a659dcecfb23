// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include "bioie/extraction_result.hpp"
#include "bioie/llm_gateway.hpp"
#include "bioie/schema_model.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace bioie {

/// Gazetteers and cue words that drive the offline provider.
struct MockRulebook {
    struct SpeciesRule {
        std::string name;
        std::vector<std::string> aliases;
        std::string taxonomy_level;
        std::string role;  ///< used when no role cue precedes the mention
    };
    struct LocationRule {
        std::string name;
        std::vector<std::string> aliases;
        std::string category;
        std::string geopolitical_info;
        std::string additional_details;
    };
    struct EcosystemRule {
        std::string name;
        std::vector<std::string> aliases;
        std::string type;
        std::string scope;
    };
    struct HabitatRule {
        std::string name;
        std::vector<std::string> aliases;
        std::string type;
        std::string subcomponent_of;
        std::string specifics;
    };
    struct RoleCue {
        std::string cue;
        std::string role;
    };
    struct InteractionCue {
        std::string cue;
        std::string name;
        std::string type;
        std::string directionality;
    };
    struct ExtraField {
        std::string cue;
        std::string block;
        std::string field;
        std::string value;
    };

    std::vector<SpeciesRule> species;
    std::vector<RoleCue> role_cues;  ///< earlier cues win on overlap
    std::vector<LocationRule> locations;
    std::vector<EcosystemRule> ecosystems;
    std::vector<HabitatRule> habitats;
    std::vector<InteractionCue> interaction_cues;
    std::vector<std::string> pathway_cues;
    std::vector<ExtraField> specialize_extras;

    static MockRulebook from_json(const nlohmann::json& j);
    static MockRulebook load(const std::filesystem::path& path);
    /// The rulebook compiled into the library.
    static const MockRulebook& embedded();
};

/// What the mock "reads" in a title and abstract: gazetteer matches
/// (case-insensitive, whole words, longest match first) and sentence-level
/// relationships. Out of scope when no species is mentioned.
ExtractionResult mock_extract(const MockRulebook& rules, std::string_view text, const std::string& doi = {});

/// Deterministic offline ChatProvider. Recognizes the three stage prompts and
/// answers each like a model would: a per-paper schema for specialize, a
/// merged schema for generalize, filled entries (or "N/A") for extract.
/// Identical prompts always produce identical replies.
class MockProvider : public ChatProvider {
public:
    explicit MockProvider(MockRulebook rules = MockRulebook::embedded());

    std::string id() const override { return "mock"; }
    ProviderReply send(const PromptPair& prompt) override;

    const MockRulebook& rules() const { return rules_; }

private:
    std::string specialize(std::string_view text) const;
    std::string generalize(std::string_view user) const;
    std::string extract(std::string_view text) const;

    MockRulebook rules_;
};

}  // namespace bioie
