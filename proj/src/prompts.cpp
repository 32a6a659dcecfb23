// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/prompts.hpp"

#include "bioie/error.hpp"
#include "bioie/io_util.hpp"

#include <array>

namespace bioie {

namespace detail {
extern const std::string_view kSpecializeSystem;
extern const std::string_view kGeneralizeSystem;
extern const std::string_view kExtractSystem;
extern const std::string_view kPaperUser;
extern const std::string_view kGeneralizeUser;
}  // namespace detail

const PromptTemplates& PromptTemplates::defaults() {
    static const PromptTemplates kDefaults{
        std::string(detail::kSpecializeSystem), std::string(detail::kGeneralizeSystem),
        std::string(detail::kExtractSystem),    std::string(detail::kPaperUser),
        std::string(detail::kGeneralizeUser),
    };
    return kDefaults;
}

PromptTemplates PromptTemplates::load(const std::filesystem::path& dir) {
    return {
        read_file(dir / "specialize_system.txt"), read_file(dir / "generalize_system.txt"),
        read_file(dir / "extract_system.txt"),    read_file(dir / "paper_user.txt"),
        read_file(dir / "generalize_user.txt"),
    };
}

std::string render_template(std::string_view tmpl, const std::map<std::string, std::string>& values) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            auto close = tmpl.find('}', i + 1);
            if (close != std::string_view::npos) {
                auto it = values.find(std::string(tmpl.substr(i + 1, close - i - 1)));
                if (it != values.end()) {
                    out += it->second;
                    i = close + 1;
                    continue;
                }
            }
        }
        out.push_back(tmpl[i++]);
    }
    return out;
}

std::string count_word(std::size_t n) {
    static constexpr std::array<std::string_view, 21> kWords = {
        "zero",    "one",     "two",       "three",    "four",     "five",    "six",
        "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
        "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen", "twenty",
    };
    return n < kWords.size() ? std::string(kWords[n]) : std::to_string(n);
}

namespace {

std::string paper_user_text(const PaperRecord& paper, const PromptTemplates& t) {
    if (!paper.has_abstract()) throw PreconditionError("paper " + paper.doi + " has no abstract");
    return render_template(t.paper_user, {{"title", paper.title}, {"abstract", *paper.abstract}});
}

}  // namespace

PromptPair build_specialize_prompt(const PaperRecord& paper, const PromptTemplates& templates) {
    return {templates.specialize_system, paper_user_text(paper, templates), Determinism::Deterministic};
}

PromptPair build_generalize_prompt(std::span<const CandidateSchema> candidates, GeneralizeVariant variant,
                                   const PromptTemplates& templates) {
    if (candidates.size() < 2) throw PreconditionError("generalize prompt needs at least two candidate schemas");
    std::string schemas;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (i > 0) schemas += "\n";
        schemas += std::string(kSchemaHeader) + std::to_string(i + 1) + " (" + candidates[i].paper_doi + ")\n";
        schemas += candidate_to_json(candidates[i]).dump() + "\n";
    }
    auto user = render_template(templates.generalize_user,
                                {{"count", count_word(candidates.size())}, {"schemas", schemas}});
    if (variant.total > 1) {
        user += "\nThis is standardization attempt " + std::to_string(variant.index) + " of " +
                std::to_string(variant.total) + "; propose your own independent standardized schema.\n";
    }
    return {templates.generalize_system, std::move(user), Determinism::Deterministic};
}

PromptPair build_extract_prompt(const PaperRecord& paper, const StandardizedSchema& schema,
                                const PromptTemplates& templates) {
    if (auto problems = check_schema(schema); !problems.empty()) {
        throw PreconditionError("extraction schema is invalid: " + problems.front());
    }
    auto system = render_template(templates.extract_system, {{"schema", schema_to_json(schema).dump(2)}});
    return {std::move(system), paper_user_text(paper, templates), Determinism::Deterministic};
}

}  // namespace bioie
