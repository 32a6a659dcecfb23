// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/schema_model.hpp"

#include "bioie/error.hpp"
#include "bioie/io_util.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace bioie {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

FieldDescriptor text(std::string name, std::string note) {
    return {std::move(name), FieldKind::Text, {}, {}, std::move(note)};
}

FieldDescriptor enumeration(std::string name, std::vector<std::string> values) {
    return {std::move(name), FieldKind::Enum, std::move(values), {}, {}};
}

StandardizedSchema build_reference() {
    StandardizedSchema s;
    s.block(Block::Species).fields = {
        text("name", "species_name"),
        enumeration("role", {"native", "introduced", "alien", "invasive"}),
        enumeration("taxonomy_level", {"species", "genus", "family"}),
    };
    s.block(Block::Location).fields = {
        text("name", "location_name"),
        enumeration("category", {"natural", "administrative"}),
        enumeration("geopolitical_info", {"country", "region", "city"}),
        enumeration("additional_details", {"climatic", "physiographic"}),
    };
    s.block(Block::Ecosystem).fields = {
        text("name", "ecosystem_name"),
        enumeration("type", {"aquatic", "terrestrial", "marine"}),
        enumeration("scope", {"local", "regional", "global"}),
    };
    s.block(Block::Habitat).fields = {
        text("name", "habitat_name"),
        enumeration("type", {"aquatic", "terrestrial", "marine"}),
        {"subcomponent_of", FieldKind::Reference, {}, "Ecosystem", "ecosystem_name"},
        text("specifics", "e.g., benthic, litoral"),
    };
    s.block(Block::Relationships).fields = {
        {"related_entities", FieldKind::List, {"entity1", "entity2", "..."}, {}, {}},
        text("name", "relationship_name"),
        enumeration("type", {"biological", "physical", "ecological", "anthropogenic"}),
        enumeration("directionality", {"unidirectional", "bidirectional"}),
        text("context", "relationship_contextual_description"),
    };
    return s;
}

std::optional<Block> block_from_key(std::string_view key) {
    auto k = lower(trim(key));
    for (auto b : kAllBlocks) {
        auto n = lower(block_name(b));
        if (k == n) return b;
        // Accept the plural/singular counterpart ("locations", "relationship").
        if (b != Block::Species && (k + "s" == n || k == n + "s")) return b;
    }
    return std::nullopt;
}

bool looks_like_enum(const std::string& s, std::vector<std::string>& values) {
    if (s.find('/') == std::string::npos) return false;
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        auto slash = s.find('/', start);
        auto part = trim(std::string_view(s).substr(start, slash == std::string::npos ? std::string::npos
                                                                                       : slash - start));
        if (part.empty() || part.size() > 40 || part.find(',') != std::string::npos) return false;
        if (std::count(part.begin(), part.end(), ' ') > 2) return false;
        parts.push_back(std::move(part));
        if (slash == std::string::npos) break;
        start = slash + 1;
    }
    if (parts.size() < 2) return false;
    values = std::move(parts);
    return true;
}

std::vector<std::string> string_items(const nlohmann::ordered_json& arr, bool& all_strings) {
    std::vector<std::string> out;
    all_strings = true;
    for (const auto& v : arr) {
        if (v.is_string()) {
            out.push_back(v.get<std::string>());
        } else {
            all_strings = false;
        }
    }
    return out;
}

FieldDescriptor descriptor_from_json(const std::string& name, const nlohmann::ordered_json& v) {
    FieldDescriptor f;
    f.name = name;
    if (v.is_string()) {
        auto s = v.get<std::string>();
        if (looks_like_enum(s, f.values)) {
            f.kind = FieldKind::Enum;
        } else {
            f.kind = FieldKind::Text;
            f.note = s == "text" ? "" : s;
        }
        return f;
    }
    if (v.is_array()) {
        bool all_strings = false;
        f.kind = FieldKind::List;
        f.values = string_items(v, all_strings);
        if (!all_strings) {
            f.values.clear();
            f.note = "list: " + v.dump();
        }
        return f;
    }
    if (v.is_object()) {
        auto note_of = [&](const char* key) {
            auto it = v.find(key);
            return it != v.end() && it->is_string() ? it->get<std::string>() : std::string{};
        };
        if (v.contains("kind") && v["kind"].is_string()) {
            auto kind = lower(v["kind"].get<std::string>());
            f.note = note_of("note");
            bool all_strings = true;
            if (v.contains("values") && v["values"].is_array()) f.values = string_items(v["values"], all_strings);
            if (kind == "enum") {
                f.kind = FieldKind::Enum;
            } else if (kind == "list") {
                f.kind = FieldKind::List;
            } else if (kind == "reference") {
                f.kind = FieldKind::Reference;
                f.target = note_of("target");
            } else {
                f.kind = FieldKind::Text;
                if (kind != "text") f.note = "kind " + kind + (f.note.empty() ? "" : ": " + f.note);
            }
            return f;
        }
        // JSON-Schema style property.
        if (v.contains("enum") && v["enum"].is_array()) {
            bool all_strings = true;
            f.kind = FieldKind::Enum;
            f.values = string_items(v["enum"], all_strings);
            f.note = note_of("description");
            return f;
        }
        if (v.contains("$ref") && v["$ref"].is_string()) {
            f.kind = FieldKind::Reference;
            auto ref = v["$ref"].get<std::string>();
            auto slash = ref.rfind('/');
            f.target = slash == std::string::npos ? ref : ref.substr(slash + 1);
            f.note = note_of("description");
            return f;
        }
        if (v.contains("type") && v["type"].is_string()) {
            auto type = v["type"].get<std::string>();
            f.note = note_of("description");
            if (type == "array") {
                f.kind = FieldKind::List;
            } else {
                f.kind = FieldKind::Text;
                if (type != "string" && f.note.empty()) f.note = type;
            }
            return f;
        }
        f.kind = FieldKind::Text;
        f.note = "object: " + v.dump();
        return f;
    }
    f.kind = FieldKind::Text;
    f.note = "literal: " + v.dump();
    return f;
}

nlohmann::ordered_json descriptor_to_json(const FieldDescriptor& f) {
    switch (f.kind) {
        case FieldKind::Text:
            return f.note.empty() ? "text" : f.note;
        case FieldKind::Enum: {
            std::string joined;
            for (const auto& v : f.values) joined += (joined.empty() ? "" : "/") + v;
            // A single-value enum cannot use the slash form.
            if (f.values.size() >= 2 && f.note.empty()) return joined;
            nlohmann::ordered_json j;
            j["kind"] = "enum";
            j["values"] = f.values;
            if (!f.note.empty()) j["note"] = f.note;
            return j;
        }
        case FieldKind::List: {
            if (f.note.empty() && !f.values.empty()) return f.values;
            nlohmann::ordered_json j;
            j["kind"] = "list";
            if (!f.values.empty()) j["values"] = f.values;
            if (!f.note.empty()) j["note"] = f.note;
            return j;
        }
        case FieldKind::Reference: {
            nlohmann::ordered_json j;
            j["kind"] = "reference";
            j["target"] = f.target;
            if (!f.note.empty()) j["note"] = f.note;
            return j;
        }
    }
    return nullptr;
}

/// Fields of one block value; instance arrays contribute the union of keys.
std::vector<FieldDescriptor> fields_from_block(const nlohmann::ordered_json& v, std::vector<std::string>& notes,
                                               const std::string& block) {
    std::vector<FieldDescriptor> fields;
    std::set<std::string> seen;
    auto add_object = [&](const nlohmann::ordered_json& obj) {
        const nlohmann::ordered_json* props = &obj;
        if (obj.contains("properties") && obj["properties"].is_object()) props = &obj["properties"];
        for (const auto& [k, fv] : props->items()) {
            if (k.empty() || !seen.insert(k).second) continue;
            fields.push_back(descriptor_from_json(k, fv));
        }
    };
    if (v.is_object()) {
        if (v.value("type", "") == "array" && v.contains("items") && v["items"].is_object()) {
            add_object(v["items"]);
        } else {
            add_object(v);
        }
    } else if (v.is_array()) {
        for (const auto& item : v) {
            if (item.is_object()) {
                add_object(item);
            } else {
                notes.push_back(block + ": non-object item " + item.dump());
            }
        }
    } else {
        notes.push_back(block + ": " + v.dump());
    }
    return fields;
}

}  // namespace

std::string_view block_name(Block b) {
    switch (b) {
        case Block::Species: return "Species";
        case Block::Location: return "Location";
        case Block::Ecosystem: return "Ecosystem";
        case Block::Habitat: return "Habitat";
        case Block::Relationships: return "Relationships";
    }
    return "";
}

std::string_view entity_kind_name(EntityKind k) {
    return block_name(static_cast<Block>(static_cast<int>(k)));
}

std::string_view field_kind_name(FieldKind k) {
    switch (k) {
        case FieldKind::Text: return "text";
        case FieldKind::Enum: return "enum";
        case FieldKind::List: return "list";
        case FieldKind::Reference: return "reference";
    }
    return "";
}

const FieldDescriptor* SchemaBlock::field(std::string_view name) const {
    for (const auto& f : fields) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

StandardizedSchema::StandardizedSchema() {
    for (auto b : kAllBlocks) blocks[static_cast<std::size_t>(b)].block = b;
}

const StandardizedSchema& reference_schema() {
    static const StandardizedSchema kReference = build_reference();
    return kReference;
}

const std::vector<FieldDescriptor>& mandatory_fields(Block b) {
    return reference_schema().block(b).fields;
}

bool is_open_vocabulary(Block b, std::string_view field) {
    return b == Block::Species && field == "role";
}

nlohmann::ordered_json schema_to_json(const StandardizedSchema& schema) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& block : schema.blocks) {
        nlohmann::ordered_json fields = nlohmann::ordered_json::object();
        for (const auto& f : block.fields) fields[f.name] = descriptor_to_json(f);
        j[std::string(block_name(block.block))] = std::move(fields);
    }
    return j;
}

StandardizedSchema schema_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw ParseError("schema document is not an object", 0);
    StandardizedSchema s;
    std::set<Block> seen;
    std::vector<std::string> notes;
    for (const auto& [key, value] : j.items()) {
        auto b = block_from_key(key);
        if (!b) throw ParseError("unknown schema block '" + key + "'", 0);
        if (!seen.insert(*b).second) throw ParseError("duplicate schema block '" + key + "'", 0);
        if (!value.is_object()) throw ParseError("schema block '" + key + "' is not an object", 0);
        s.block(*b).fields = fields_from_block(value, notes, key);
    }
    for (auto b : kAllBlocks) {
        if (!seen.count(b)) throw ParseError("schema lacks block '" + std::string(block_name(b)) + "'", 0);
    }
    return s;
}

std::vector<std::string> check_schema(const StandardizedSchema& schema) {
    std::vector<std::string> problems;
    for (const auto& block : schema.blocks) {
        auto bname = std::string(block_name(block.block));
        std::set<std::string> names;
        for (const auto& f : block.fields) {
            if (f.name.empty()) problems.push_back(bname + ": field with empty name");
            if (!names.insert(f.name).second) problems.push_back(bname + ": duplicate field " + f.name);
            if (f.kind == FieldKind::Enum && f.values.empty()) {
                problems.push_back(bname + "." + f.name + ": enumeration without values");
            }
        }
        for (const auto& m : mandatory_fields(block.block)) {
            const auto* f = block.field(m.name);
            if (!f) {
                problems.push_back(bname + ": missing mandatory field " + m.name);
                continue;
            }
            if (f->kind != m.kind) {
                problems.push_back(bname + "." + m.name + ": expected kind " + std::string(field_kind_name(m.kind)));
                continue;
            }
            if (m.kind == FieldKind::Enum) {
                for (const auto& v : m.values) {
                    if (std::find(f->values.begin(), f->values.end(), v) == f->values.end()) {
                        problems.push_back(bname + "." + m.name + ": missing core value " + v);
                    }
                }
            }
        }
    }
    return problems;
}

std::string schema_fingerprint(const StandardizedSchema& schema) {
    return fnv1a_hex(schema_to_json(schema).dump());
}

std::string strip_code_fence(std::string_view text) {
    std::string s = trim(text);
    if (!s.starts_with("```")) return s;
    auto first_nl = s.find('\n');
    if (first_nl == std::string::npos) return s;
    auto close = s.rfind("```");
    if (close == std::string::npos || close <= first_nl) return trim(std::string_view(s).substr(first_nl + 1));
    return trim(std::string_view(s).substr(first_nl + 1, close - first_nl - 1));
}

CandidateSchema parse_candidate(std::string_view raw, std::string doi) {
    auto text = strip_code_fence(raw);
    if (text.empty()) throw ParseError("empty schema document", 0);

    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed schema document: ") + e.what(), e.byte);
    }
    if (!j.is_object()) throw ParseError("schema document is not an object", 0);

    // Unwrap {"schema": {...}} and JSON-Schema {"type": "object", "properties": {...}}.
    if (j.size() == 1 && j.contains("schema") && j["schema"].is_object()) j = j["schema"];
    if (j.value("type", "") == "object" && j.contains("properties") && j["properties"].is_object()) {
        j = j["properties"];
    }

    CandidateSchema c;
    c.paper_doi = std::move(doi);
    for (const auto& [key, value] : j.items()) {
        if (trim(key).empty()) {
            c.notes.push_back("unnamed block: " + value.dump());
            continue;
        }
        if (!value.is_object() && !value.is_array()) {
            c.notes.push_back(key + ": " + value.dump());
            continue;
        }
        c.blocks.push_back({key, fields_from_block(value, c.notes, key)});
    }
    return c;
}

nlohmann::ordered_json candidate_to_json(const CandidateSchema& candidate) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& block : candidate.blocks) {
        nlohmann::ordered_json fields = nlohmann::ordered_json::object();
        for (const auto& f : block.fields) fields[f.name] = descriptor_to_json(f);
        j[block.name] = std::move(fields);
    }
    return j;
}

}  // namespace bioie
