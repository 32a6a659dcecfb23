// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/mock_provider.hpp"

#include "bioie/error.hpp"
#include "bioie/io_util.hpp"
#include "bioie/merge.hpp"
#include "bioie/prompts.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

namespace bioie {

namespace detail {
extern const std::string_view kEmbeddedRulebook;
}

namespace {

std::vector<std::string> str_list(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) return {};
    return j.at(key).get<std::vector<std::string>>();
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_word(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

/// Whole-word occurrences of `needle` (already lowercase) in `hay`.
std::vector<std::size_t> find_words(const std::string& hay, const std::string& needle) {
    std::vector<std::size_t> hits;
    if (needle.empty()) return hits;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) {
        bool left = pos == 0 || !is_word(hay[pos - 1]);
        auto end = pos + needle.size();
        bool right = end == hay.size() || !is_word(hay[end]);
        if (left && right) hits.push_back(pos);
    }
    return hits;
}

struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t rule = 0;
};

/// Non-overlapping gazetteer matches; longer surfaces win, then earlier ones.
template <typename Rules>
std::vector<Span> match_rules(const std::string& text, const Rules& rules) {
    std::vector<Span> all;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        std::vector<std::string> surfaces{rules[i].name};
        surfaces.insert(surfaces.end(), rules[i].aliases.begin(), rules[i].aliases.end());
        for (const auto& s : surfaces) {
            auto needle = lower(s);
            for (auto pos : find_words(text, needle)) all.push_back({pos, pos + needle.size(), i});
        }
    }
    std::sort(all.begin(), all.end(), [](const Span& a, const Span& b) {
        auto la = a.end - a.begin, lb = b.end - b.begin;
        if (la != lb) return la > lb;
        return a.begin < b.begin;
    });
    std::vector<Span> kept;
    for (const auto& s : all) {
        bool overlaps = std::any_of(kept.begin(), kept.end(),
                                    [&](const Span& k) { return s.begin < k.end && k.begin < s.end; });
        if (!overlaps) kept.push_back(s);
    }
    std::sort(kept.begin(), kept.end(), [](const Span& a, const Span& b) { return a.begin < b.begin; });
    return kept;
}

struct Sentence {
    std::size_t begin = 0;
    std::size_t end = 0;
};

std::vector<Sentence> split_sentences(const std::string& text) {
    std::vector<Sentence> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        bool stop = c == '\n' || ((c == '.' || c == '!' || c == '?') &&
                                  (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]))));
        if (stop) {
            out.push_back({start, i + 1});
            start = i + 1;
        }
    }
    if (start < text.size()) out.push_back({start, text.size()});
    return out;
}

std::size_t sentence_of(const std::vector<Sentence>& sentences, std::size_t pos) {
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (pos < sentences[i].end) return i;
    }
    return sentences.empty() ? 0 : sentences.size() - 1;
}

std::string trim_copy(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

/// Role cue in the noun phrase ending at `pos`: the closest cue after
/// `from`, with at most two words between it and the mention.
std::optional<std::string> role_before(const std::string& text, std::size_t from, std::size_t pos,
                                       const std::vector<MockRulebook::RoleCue>& cues) {
    std::optional<std::string> found;
    std::size_t found_end = 0;
    std::size_t i = from;
    while (i < pos) {
        bool matched = false;
        for (const auto& c : cues) {
            auto needle = lower(c.cue);
            if (i + needle.size() > pos) continue;
            if (text.compare(i, needle.size(), needle) != 0) continue;
            bool left = i == 0 || !is_word(text[i - 1]);
            bool right = i + needle.size() == text.size() || !is_word(text[i + needle.size()]);
            if (!left || !right) continue;
            found = c.role;
            found_end = i + needle.size();
            i = found_end;
            matched = true;
            break;
        }
        if (!matched) ++i;
    }
    if (!found) return found;
    std::size_t words = 0;
    bool in_word = false;
    for (auto k = found_end; k < pos; ++k) {
        bool space = std::isspace(static_cast<unsigned char>(text[k])) != 0;
        if (!space && !in_word) ++words;
        in_word = !space;
    }
    if (words > 2) return std::nullopt;
    return found;
}

std::uint64_t stable_hash(std::string_view s) { return std::stoull(fnv1a_hex(s), nullptr, 16); }

/// Title and abstract out of a rendered paper prompt; whole text otherwise.
std::string paper_text(std::string_view user) {
    auto t = user.find("Title:");
    if (t == std::string_view::npos) return std::string(user);
    return trim_copy(user.substr(t + 6));
}

std::string title_of(std::string_view text) {
    auto nl = text.find('\n');
    return std::string(text.substr(0, nl));
}

std::string camel(std::string_view snake) {
    std::string out;
    bool up = false;
    for (char c : snake) {
        if (c == '_') {
            up = true;
            continue;
        }
        out += up ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
        up = false;
    }
    return out;
}

nlohmann::ordered_json descriptor_json(const FieldDescriptor& f) {
    switch (f.kind) {
        case FieldKind::Enum: {
            std::string joined;
            for (const auto& v : f.values) joined += (joined.empty() ? "" : "/") + v;
            return joined;
        }
        case FieldKind::List: return f.values;
        case FieldKind::Reference:
            return nlohmann::ordered_json{{"kind", "reference"}, {"target", f.target}, {"note", f.note}};
        case FieldKind::Text: break;
    }
    return f.note.empty() ? std::string("text") : f.note;
}

std::optional<Block> block_of(std::string_view name) {
    auto n = lower(name);
    for (auto b : kAllBlocks) {
        if (lower(block_name(b)) == n) return b;
    }
    return std::nullopt;
}

}  // namespace

MockRulebook MockRulebook::from_json(const nlohmann::json& j) {
    MockRulebook r;
    try {
        for (const auto& s : j.at("species")) {
            r.species.push_back({s.at("name"), str_list(s, "aliases"), s.value("taxonomy_level", "species"),
                                 s.value("role", "")});
        }
        for (const auto& c : j.at("role_cues")) r.role_cues.push_back({c.at("cue"), c.at("role")});
        for (const auto& l : j.at("locations")) {
            r.locations.push_back({l.at("name"), str_list(l, "aliases"), l.value("category", ""),
                                   l.value("geopolitical_info", ""), l.value("additional_details", "")});
        }
        for (const auto& e : j.at("ecosystems")) {
            r.ecosystems.push_back({e.at("name"), str_list(e, "aliases"), e.value("type", ""), e.value("scope", "")});
        }
        for (const auto& h : j.at("habitats")) {
            r.habitats.push_back({h.at("name"), str_list(h, "aliases"), h.value("type", ""),
                                  h.value("subcomponent_of", ""), h.value("specifics", "")});
        }
        for (const auto& c : j.at("interaction_cues")) {
            r.interaction_cues.push_back({c.at("cue"), c.at("name"), c.at("type"), c.at("directionality")});
        }
        r.pathway_cues = str_list(j, "pathway_cues");
        if (j.contains("specialize_extras")) {
            for (const auto& x : j.at("specialize_extras")) {
                r.specialize_extras.push_back({x.at("cue"), x.at("block"), x.at("field"), x.at("value")});
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("mock rulebook: ") + e.what(), 0);
    }
    return r;
}

MockRulebook MockRulebook::load(const std::filesystem::path& path) {
    auto text = read_file(path);
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("mock rulebook " + path.string() + " is not valid JSON", 0);
    return from_json(j);
}

const MockRulebook& MockRulebook::embedded() {
    static const MockRulebook kRules = from_json(nlohmann::json::parse(detail::kEmbeddedRulebook));
    return kRules;
}

ExtractionResult mock_extract(const MockRulebook& rules, std::string_view raw, const std::string& doi) {
    ExtractionResult r;
    r.paper_doi = doi;
    auto text = lower(raw);
    auto sentences = split_sentences(text);

    auto sp = match_rules(text, rules.species);
    if (sp.empty()) {
        r.status = ResultStatus::OutOfScope;
        return r;
    }
    auto loc = match_rules(text, rules.locations);
    auto eco = match_rules(text, rules.ecosystems);
    auto hab = match_rules(text, rules.habitats);

    std::set<std::size_t> seen;
    for (std::size_t k = 0; k < sp.size(); ++k) {
        const auto& m = sp[k];
        if (!seen.insert(m.rule).second) continue;
        const auto& rule = rules.species[m.rule];
        auto sentence_begin = sentences[sentence_of(sentences, m.begin)].begin;
        auto from = k > 0 ? std::max(sentence_begin, sp[k - 1].end) : sentence_begin;
        auto role = role_before(text, from, m.begin, rules.role_cues).value_or(rule.role);
        r.species.push_back({rule.name, role, rule.taxonomy_level, {}});
    }
    seen.clear();
    for (const auto& m : loc) {
        if (!seen.insert(m.rule).second) continue;
        const auto& l = rules.locations[m.rule];
        r.locations.push_back({l.name, l.category, l.geopolitical_info, l.additional_details, {}});
    }
    seen.clear();
    for (const auto& m : eco) {
        if (!seen.insert(m.rule).second) continue;
        const auto& e = rules.ecosystems[m.rule];
        r.ecosystems.push_back({e.name, e.type, e.scope, {}});
    }
    seen.clear();
    for (const auto& m : hab) {
        if (!seen.insert(m.rule).second) continue;
        const auto& h = rules.habitats[m.rule];
        r.habitats.push_back({h.name, h.type, h.subcomponent_of, h.specifics, {}});
    }

    // Sentence-level co-occurrence relationships.
    std::set<std::string> emitted;
    auto emit = [&](std::string a, std::string b, const std::string& name, const std::string& type,
                    const std::string& dir, const std::string& context) {
        auto key = name + "\x1f" + a + "\x1f" + b;
        if (!emitted.insert(key).second) return;
        RelationshipEntry rel;
        rel.related_entities = {{std::move(a), std::nullopt}, {std::move(b), std::nullopt}};
        rel.name = name;
        rel.type = type;
        rel.directionality = dir;
        rel.context = context;
        r.relationships.push_back(std::move(rel));
    };
    for (std::size_t si = 0; si < sentences.size(); ++si) {
        auto in_sentence = [&](const std::vector<Span>& spans) {
            std::vector<std::size_t> ids;
            for (const auto& m : spans) {
                if (sentence_of(sentences, m.begin) == si &&
                    std::find(ids.begin(), ids.end(), m.rule) == ids.end()) {
                    ids.push_back(m.rule);
                }
            }
            return ids;
        };
        auto s_ids = in_sentence(sp);
        if (s_ids.empty()) continue;
        auto l_ids = in_sentence(loc);
        auto h_ids = in_sentence(hab);
        const auto& sent = sentences[si];
        auto context = trim_copy(std::string_view(raw).substr(sent.begin, sent.end - sent.begin));
        auto sentence_text = text.substr(sent.begin, sent.end - sent.begin);

        if (s_ids.size() >= 2) {
            for (const auto& cue : rules.interaction_cues) {
                if (sentence_text.find(lower(cue.cue)) == std::string::npos) continue;
                emit(rules.species[s_ids[0]].name, rules.species[s_ids[1]].name, cue.name, cue.type,
                     cue.directionality, context);
                break;
            }
        }
        bool pathway = std::any_of(rules.pathway_cues.begin(), rules.pathway_cues.end(), [&](const std::string& c) {
            return sentence_text.find(lower(c)) != std::string::npos;
        });
        for (auto s : s_ids) {
            for (auto l : l_ids) {
                if (pathway) {
                    emit(rules.species[s].name, rules.locations[l].name, "introduced to", "anthropogenic",
                         "unidirectional", context);
                } else {
                    emit(rules.species[s].name, rules.locations[l].name, "occurs in", "ecological", "unidirectional",
                         context);
                }
            }
            for (auto h : h_ids) {
                emit(rules.species[s].name, rules.habitats[h].name, "inhabits", "ecological", "unidirectional",
                     context);
            }
        }
    }
    resolve_references(r);
    return r;
}

MockProvider::MockProvider(MockRulebook rules) : rules_(std::move(rules)) {}

ProviderReply MockProvider::send(const PromptPair& prompt) {
    if (prompt.system.find("per the given predefined schema") != std::string::npos) {
        return {200, extract(paper_text(prompt.user))};
    }
    if (prompt.user.find(kSchemaHeader) != std::string::npos) return {200, generalize(prompt.user)};
    return {200, specialize(paper_text(prompt.user))};
}

std::string MockProvider::specialize(std::string_view text) const {
    auto result = mock_extract(rules_, text);
    if (result.status == ResultStatus::OutOfScope) return "N/A";

    auto style = stable_hash(title_of(text)) % 3;
    auto lowered = lower(text);
    const std::array<std::array<const char*, 5>, 3> kNames = {{
        {"species", "location", "ecosystem", "habitat", "relationships"},
        {"Species", "Locations", "Ecosystems", "Habitats", "Relationships"},
        {"organisms", "study_sites", "ecosystem", "habitat", "interactions"},
    }};
    const std::array<bool, 5> present = {true, !result.locations.empty(), !result.ecosystems.empty(),
                                         !result.habitats.empty(), !result.relationships.empty()};

    nlohmann::ordered_json blocks = nlohmann::ordered_json::object();
    for (auto b : kAllBlocks) {
        auto bi = static_cast<std::size_t>(b);
        if (!present[bi]) continue;
        nlohmann::ordered_json fields = nlohmann::ordered_json::object();
        for (auto f : mandatory_fields(b)) {
            if (style == 2 && (f.name == "additional_details" || f.name == "scope")) continue;
            if (b == Block::Species && f.name == "role") {
                for (const auto& s : result.species) {
                    if (std::find(f.values.begin(), f.values.end(), s.role) == f.values.end()) {
                        f.values.push_back(s.role);
                    }
                }
            }
            fields[style == 1 ? camel(f.name) : f.name] = descriptor_json(f);
        }
        for (const auto& x : rules_.specialize_extras) {
            if (block_of(x.block) != b || lowered.find(lower(x.cue)) == std::string::npos) continue;
            auto name = style == 1 ? camel(x.field) : x.field;
            if (!fields.contains(name)) fields[name] = x.value;
        }
        if (style == 2) {
            blocks[kNames[style][bi]] = nlohmann::ordered_json::array({fields});
        } else {
            blocks[kNames[style][bi]] = std::move(fields);
        }
    }
    if (style == 1) return nlohmann::ordered_json{{"schema", blocks}}.dump(2);
    return "```json\n" + blocks.dump(2) + "\n```";
}

std::string MockProvider::generalize(std::string_view user) const {
    std::vector<CandidateSchema> candidates;
    std::size_t pos = 0;
    while ((pos = user.find(kSchemaHeader, pos)) != std::string_view::npos) {
        auto header_end = user.find('\n', pos);
        if (header_end == std::string_view::npos) break;
        auto header = user.substr(pos, header_end - pos);
        std::string doi;
        if (auto open = header.find('('); open != std::string_view::npos) {
            auto close = header.rfind(')');
            doi = std::string(header.substr(open + 1, close - open - 1));
        }
        auto body_end = user.find('\n', header_end + 1);
        auto body = user.substr(header_end + 1, body_end == std::string_view::npos ? std::string_view::npos
                                                                                   : body_end - header_end - 1);
        candidates.push_back(parse_candidate(body, doi));
        pos = header_end;
    }
    if (candidates.empty()) return "N/A";

    std::size_t attempt = 1;
    if (auto a = user.find("attempt "); a != std::string_view::npos) {
        attempt = static_cast<std::size_t>(std::strtoul(std::string(user.substr(a + 8, 4)).c_str(), nullptr, 10));
    }
    // Later attempts trade recall for focus differently, like independent runs.
    MergeOptions opts;
    if (attempt == 2) opts = {1, 2};
    if (attempt >= 3) opts = {0, 1};
    auto schema = candidates.size() == 1 ? canonicalize(candidates.front())
                                         : merge_candidates(candidates, opts).schema;
    return "```json\n" + schema_to_json(schema).dump(2) + "\n```";
}

std::string MockProvider::extract(std::string_view text) const {
    auto result = mock_extract(rules_, text);
    if (result.status == ResultStatus::OutOfScope) return "N/A";
    auto body = result_blocks_to_json(result).dump(2);
    if (stable_hash(title_of(text)) % 2 == 1) return "```json\n" + body + "\n```";
    return body;
}

}  // namespace bioie
