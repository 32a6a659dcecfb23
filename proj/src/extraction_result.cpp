// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/extraction_result.hpp"

#include "bioie/error.hpp"

#include <cctype>

namespace bioie {

namespace {

using ojson = nlohmann::ordered_json;

std::optional<Block> result_block(std::string_view key) {
    std::string k;
    for (char c : key) k.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (k == "species") return Block::Species;
    if (k == "location" || k == "locations") return Block::Location;
    if (k == "ecosystem" || k == "ecosystems") return Block::Ecosystem;
    if (k == "habitat" || k == "habitats") return Block::Habitat;
    if (k == "relationship" || k == "relationships") return Block::Relationships;
    return std::nullopt;
}

std::string as_text(const ojson& v) {
    if (v.is_null()) return {};
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string out;
        for (const auto& item : v) out += (out.empty() ? "" : ", ") + as_text(item);
        return out;
    }
    return v.dump();
}

/// Moves the named core properties out of `obj`; the rest become extras.
struct EntryReader {
    const ojson& obj;
    ExtraFields extra;

    explicit EntryReader(const ojson& o) : obj(o) {
        for (const auto& [k, v] : o.items()) extra.emplace(k, v);
    }

    std::string take(const char* key) {
        auto it = extra.find(key);
        if (it == extra.end()) return {};
        auto s = as_text(it->second);
        extra.erase(it);
        return s;
    }
};

std::vector<ojson> entries_of(const ojson& v, const std::string& block, std::string_view raw) {
    std::vector<ojson> out;
    if (v.is_null()) return out;
    if (v.is_object()) {
        out.push_back(v);
        return out;
    }
    if (!v.is_array()) throw QuarantineError("block " + block + " is neither a list nor an object", std::string(raw));
    for (const auto& item : v) {
        if (!item.is_object()) throw QuarantineError("block " + block + " has a non-object entry", std::string(raw));
        out.push_back(item);
    }
    return out;
}

void read_blocks(const ojson& j, ExtractionResult& r, std::string_view raw,
                 std::initializer_list<const char*> reserved = {}) {
    for (const auto& [key, value] : j.items()) {
        bool skip = false;
        for (const char* k : reserved) skip = skip || key == k;
        if (skip) continue;

        auto b = result_block(key);
        if (!b) {
            r.extra_blocks.emplace(key, value);
            continue;
        }
        for (const auto& e : entries_of(value, key, raw)) {
            EntryReader rd(e);
            switch (*b) {
                case Block::Species: {
                    SpeciesEntry s;
                    s.name = rd.take("name");
                    s.role = rd.take("role");
                    s.taxonomy_level = rd.take("taxonomy_level");
                    s.extra = std::move(rd.extra);
                    r.species.push_back(std::move(s));
                    break;
                }
                case Block::Location: {
                    LocationEntry l;
                    l.name = rd.take("name");
                    l.category = rd.take("category");
                    l.geopolitical_info = rd.take("geopolitical_info");
                    l.additional_details = rd.take("additional_details");
                    l.extra = std::move(rd.extra);
                    r.locations.push_back(std::move(l));
                    break;
                }
                case Block::Ecosystem: {
                    EcosystemEntry x;
                    x.name = rd.take("name");
                    x.type = rd.take("type");
                    x.scope = rd.take("scope");
                    x.extra = std::move(rd.extra);
                    r.ecosystems.push_back(std::move(x));
                    break;
                }
                case Block::Habitat: {
                    HabitatEntry h;
                    h.name = rd.take("name");
                    h.type = rd.take("type");
                    h.subcomponent_of = rd.take("subcomponent_of");
                    h.specifics = rd.take("specifics");
                    h.extra = std::move(rd.extra);
                    r.habitats.push_back(std::move(h));
                    break;
                }
                case Block::Relationships: {
                    RelationshipEntry rel;
                    if (auto it = rd.extra.find("related_entities"); it != rd.extra.end()) {
                        const auto& refs = it->second;
                        if (refs.is_array()) {
                            for (const auto& ref : refs) {
                                if (ref.is_string()) {
                                    rel.related_entities.push_back({ref.get<std::string>(), std::nullopt});
                                } else if (ref.is_object() && ref.contains("name")) {
                                    rel.related_entities.push_back({as_text(ref["name"]), std::nullopt});
                                } else {
                                    rel.related_entities.push_back({as_text(ref), std::nullopt});
                                }
                            }
                        } else if (refs.is_string()) {
                            rel.related_entities.push_back({refs.get<std::string>(), std::nullopt});
                        }
                        rd.extra.erase(it);
                    }
                    rel.name = rd.take("name");
                    rel.type = rd.take("type");
                    rel.directionality = rd.take("directionality");
                    rel.context = rd.take("context");
                    rel.extra = std::move(rd.extra);
                    r.relationships.push_back(std::move(rel));
                    break;
                }
            }
        }
    }
}

void put(ojson& obj, const char* key, const std::string& value) {
    if (!value.empty()) obj[key] = value;
}

void put_extra(ojson& obj, const ExtraFields& extra) {
    for (const auto& [k, v] : extra) obj[k] = v;
}

}  // namespace

bool ExtractionResult::has_entities() const {
    return !species.empty() || !locations.empty() || !ecosystems.empty() || !habitats.empty() ||
           !relationships.empty();
}

std::string normalize_name(std::string_view name) {
    std::string out;
    bool pending_space = false;
    for (char c : name) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

std::string fold_key(std::string_view name) {
    auto out = normalize_name(name);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

void resolve_references(ExtractionResult& r) {
    auto lookup = [&](const std::string& key) -> std::optional<EntityKind> {
        for (const auto& s : r.species) if (fold_key(s.name) == key) return EntityKind::Species;
        for (const auto& l : r.locations) if (fold_key(l.name) == key) return EntityKind::Location;
        for (const auto& e : r.ecosystems) if (fold_key(e.name) == key) return EntityKind::Ecosystem;
        for (const auto& h : r.habitats) if (fold_key(h.name) == key) return EntityKind::Habitat;
        return std::nullopt;
    };
    for (auto& rel : r.relationships) {
        for (auto& ref : rel.related_entities) ref.kind = lookup(fold_key(ref.name));
    }
}

ExtractionResult parse_result(std::string_view raw, const std::string& doi) {
    auto text = strip_code_fence(raw);
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
        auto inner = text.substr(1, text.size() - 2);
        if (fold_key(inner) == "n/a") text = inner;
    }
    ExtractionResult r;
    r.paper_doi = doi;
    if (fold_key(text) == "n/a") {
        r.status = ResultStatus::OutOfScope;
        return r;
    }

    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const ojson::parse_error& e) {
        throw QuarantineError("response for " + doi + " is neither N/A nor a document: " + e.what(),
                              std::string(raw));
    }
    if (!j.is_object()) throw QuarantineError("response for " + doi + " is not an object", std::string(raw));
    r.status = ResultStatus::Extracted;
    read_blocks(j, r, raw);
    resolve_references(r);
    return r;
}

ojson result_blocks_to_json(const ExtractionResult& r) {
    ojson j = ojson::object();
    auto species = ojson::array();
    for (const auto& s : r.species) {
        ojson e = ojson::object();
        put(e, "name", s.name);
        put(e, "role", s.role);
        put(e, "taxonomy_level", s.taxonomy_level);
        put_extra(e, s.extra);
        species.push_back(std::move(e));
    }
    auto locations = ojson::array();
    for (const auto& l : r.locations) {
        ojson e = ojson::object();
        put(e, "name", l.name);
        put(e, "category", l.category);
        put(e, "geopolitical_info", l.geopolitical_info);
        put(e, "additional_details", l.additional_details);
        put_extra(e, l.extra);
        locations.push_back(std::move(e));
    }
    auto ecosystems = ojson::array();
    for (const auto& x : r.ecosystems) {
        ojson e = ojson::object();
        put(e, "name", x.name);
        put(e, "type", x.type);
        put(e, "scope", x.scope);
        put_extra(e, x.extra);
        ecosystems.push_back(std::move(e));
    }
    auto habitats = ojson::array();
    for (const auto& h : r.habitats) {
        ojson e = ojson::object();
        put(e, "name", h.name);
        put(e, "type", h.type);
        put(e, "subcomponent_of", h.subcomponent_of);
        put(e, "specifics", h.specifics);
        put_extra(e, h.extra);
        habitats.push_back(std::move(e));
    }
    auto relationships = ojson::array();
    for (const auto& rel : r.relationships) {
        ojson e = ojson::object();
        auto refs = ojson::array();
        for (const auto& ref : rel.related_entities) refs.push_back(ref.name);
        e["related_entities"] = std::move(refs);
        put(e, "name", rel.name);
        put(e, "type", rel.type);
        put(e, "directionality", rel.directionality);
        put(e, "context", rel.context);
        put_extra(e, rel.extra);
        relationships.push_back(std::move(e));
    }
    j["Species"] = std::move(species);
    j["Location"] = std::move(locations);
    j["Ecosystem"] = std::move(ecosystems);
    j["Habitat"] = std::move(habitats);
    j["Relationships"] = std::move(relationships);
    for (const auto& [k, v] : r.extra_blocks) j[k] = v;
    return j;
}

ojson result_to_json(const ExtractionResult& r) {
    ojson j;
    j["doi"] = r.paper_doi;
    j["status"] = r.status == ResultStatus::OutOfScope ? "out_of_scope" : "extracted";
    auto blocks = result_blocks_to_json(r);
    for (auto& [k, v] : blocks.items()) j[k] = std::move(v);
    return j;
}

ExtractionResult result_from_json(const ojson& j) {
    if (!j.is_object()) throw ParseError("result line is not an object", 0);
    ExtractionResult r;
    r.paper_doi = j.value("doi", std::string{});
    if (r.paper_doi.empty()) throw ParseError("result line has no doi", 0);
    auto status = j.value("status", std::string{"extracted"});
    if (status == "out_of_scope") {
        r.status = ResultStatus::OutOfScope;
    } else if (status == "extracted") {
        r.status = ResultStatus::Extracted;
    } else {
        throw ParseError("unknown result status '" + status + "' for " + r.paper_doi, 0);
    }
    try {
        read_blocks(j, r, j.dump(), {"doi", "status"});
    } catch (const QuarantineError& e) {
        throw ParseError(e.what(), 0);
    }
    resolve_references(r);
    return r;
}

}  // namespace bioie
