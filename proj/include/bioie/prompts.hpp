// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include "bioie/corpus_store.hpp"
#include "bioie/llm_gateway.hpp"
#include "bioie/schema_model.hpp"

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>

namespace bioie {

/// Prompt wording is configuration. The defaults are the files under
/// prompts/ compiled into the library; `load` reads the same file names from
/// another directory. Placeholders: {title}, {abstract}, {schema},
/// {schemas}, {count}.
struct PromptTemplates {
    std::string specialize_system;
    std::string generalize_system;
    std::string extract_system;
    std::string paper_user;
    std::string generalize_user;

    static const PromptTemplates& defaults();
    static PromptTemplates load(const std::filesystem::path& dir);
};

/// Single-pass substitution: text inserted for one placeholder is never
/// scanned for further placeholders. Unknown placeholders stay verbatim.
std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& values);

/// Which of several requested generalize runs a prompt is for (1-based).
struct GeneralizeVariant {
    std::size_t index = 1;
    std::size_t total = 1;
};

/// Throws PreconditionError when the paper has no abstract.
PromptPair build_specialize_prompt(const PaperRecord& paper,
                                   const PromptTemplates& templates = PromptTemplates::defaults());

/// Embeds every candidate, duplicates included. Needs at least two.
PromptPair build_generalize_prompt(std::span<const CandidateSchema> candidates, GeneralizeVariant variant = {},
                                   const PromptTemplates& templates = PromptTemplates::defaults());

/// Throws PreconditionError when the paper has no abstract or the schema
/// fails check_schema.
PromptPair build_extract_prompt(const PaperRecord& paper, const StandardizedSchema& schema,
                                const PromptTemplates& templates = PromptTemplates::defaults());

/// "nine" for 9; digits above twenty.
std::string count_word(std::size_t n);

/// Marker line that precedes each embedded candidate in a generalize prompt.
inline constexpr std::string_view kSchemaHeader = "### Schema ";

}  // namespace bioie
