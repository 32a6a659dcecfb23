// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/validate.hpp"

#include <algorithm>
#include <set>

namespace bioie {

namespace {

struct Checker {
    const StandardizedSchema& schema;
    ValidationVerdict verdict;

    void add(Severity s, std::string code, std::string message) {
        verdict.violations.push_back({s, std::move(code), std::move(message)});
    }

    void check_field(Block b, std::size_t index, const std::string& field, const std::string& value) {
        if (value.empty()) return;
        auto where = std::string(block_name(b)) + "[" + std::to_string(index) + "]." + field;
        const auto* f = schema.block(b).field(field);
        if (!f) {
            add(Severity::Error, "unknown_field", "unknown field " + where);
            return;
        }
        if (f->kind != FieldKind::Enum) return;
        auto key = fold_key(value);
        bool known = std::any_of(f->values.begin(), f->values.end(),
                                 [&](const std::string& v) { return fold_key(v) == key; });
        if (known) return;
        if (is_open_vocabulary(b, field)) {
            add(Severity::Warning, "non_core_value", "non-core value '" + value + "' for " + where);
        } else {
            add(Severity::Error, "closed_enum_violation", "closed-enum violation: '" + value + "' for " + where);
        }
    }

    void check_extra(Block b, std::size_t index, const ExtraFields& extra) {
        for (const auto& [k, v] : extra) {
            check_field(b, index, k, v.is_string() ? v.get<std::string>() : v.dump());
        }
    }

    void check_name(Block b, std::size_t index, const std::string& name) {
        if (normalize_name(name).empty()) {
            add(Severity::Error, "missing_name",
                "missing name in " + std::string(block_name(b)) + "[" + std::to_string(index) + "]");
        }
    }
};

}  // namespace

bool ValidationVerdict::ok() const { return error_count() == 0; }

std::size_t ValidationVerdict::error_count() const {
    return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                  [](const auto& v) { return v.severity == Severity::Error; }));
}

bool ValidationVerdict::has(std::string_view code) const {
    return std::any_of(violations.begin(), violations.end(), [&](const auto& v) { return v.code == code; });
}

ValidationVerdict validate_result(const ExtractionResult& r, const StandardizedSchema& schema) {
    Checker c{schema, {}};

    if (r.status == ResultStatus::OutOfScope && r.has_entities()) {
        c.add(Severity::Error, "status_inconsistent", "nonempty entities on out-of-scope result");
    }
    for (const auto& [k, v] : r.extra_blocks) c.add(Severity::Error, "unknown_block", "unknown block " + k);

    std::set<std::string> names;
    std::set<std::string> ecosystems;

    for (std::size_t i = 0; i < r.species.size(); ++i) {
        const auto& s = r.species[i];
        c.check_name(Block::Species, i, s.name);
        c.check_field(Block::Species, i, "name", s.name);
        c.check_field(Block::Species, i, "role", s.role);
        c.check_field(Block::Species, i, "taxonomy_level", s.taxonomy_level);
        c.check_extra(Block::Species, i, s.extra);
        names.insert(fold_key(s.name));
    }
    for (std::size_t i = 0; i < r.locations.size(); ++i) {
        const auto& l = r.locations[i];
        c.check_name(Block::Location, i, l.name);
        c.check_field(Block::Location, i, "name", l.name);
        c.check_field(Block::Location, i, "category", l.category);
        c.check_field(Block::Location, i, "geopolitical_info", l.geopolitical_info);
        c.check_field(Block::Location, i, "additional_details", l.additional_details);
        c.check_extra(Block::Location, i, l.extra);
        names.insert(fold_key(l.name));
    }
    for (std::size_t i = 0; i < r.ecosystems.size(); ++i) {
        const auto& e = r.ecosystems[i];
        c.check_name(Block::Ecosystem, i, e.name);
        c.check_field(Block::Ecosystem, i, "name", e.name);
        c.check_field(Block::Ecosystem, i, "type", e.type);
        c.check_field(Block::Ecosystem, i, "scope", e.scope);
        c.check_extra(Block::Ecosystem, i, e.extra);
        names.insert(fold_key(e.name));
        ecosystems.insert(fold_key(e.name));
    }
    for (std::size_t i = 0; i < r.habitats.size(); ++i) {
        const auto& h = r.habitats[i];
        c.check_name(Block::Habitat, i, h.name);
        c.check_field(Block::Habitat, i, "name", h.name);
        c.check_field(Block::Habitat, i, "type", h.type);
        c.check_field(Block::Habitat, i, "subcomponent_of", h.subcomponent_of);
        c.check_field(Block::Habitat, i, "specifics", h.specifics);
        c.check_extra(Block::Habitat, i, h.extra);
        names.insert(fold_key(h.name));
        if (!h.subcomponent_of.empty() && !ecosystems.count(fold_key(h.subcomponent_of))) {
            c.add(Severity::Warning, "dangling_subcomponent_of",
                  "habitat '" + h.name + "' is subcomponent_of '" + h.subcomponent_of +
                      "', which is not an ecosystem of this result");
        }
    }
    for (std::size_t i = 0; i < r.relationships.size(); ++i) {
        const auto& rel = r.relationships[i];
        c.check_field(Block::Relationships, i, "name", rel.name);
        c.check_field(Block::Relationships, i, "type", rel.type);
        c.check_field(Block::Relationships, i, "directionality", rel.directionality);
        c.check_field(Block::Relationships, i, "context", rel.context);
        c.check_extra(Block::Relationships, i, rel.extra);
        if (rel.related_entities.empty()) {
            c.add(Severity::Warning, "empty_relationship",
                  "Relationships[" + std::to_string(i) + "] has no related_entities");
        } else if (!schema.block(Block::Relationships).field("related_entities")) {
            c.add(Severity::Error, "unknown_field",
                  "unknown field Relationships[" + std::to_string(i) + "].related_entities");
        }
        for (const auto& ref : rel.related_entities) {
            if (!names.count(fold_key(ref.name))) {
                c.add(Severity::Error, "dangling_related_entity", "dangling related_entity " + ref.name);
            }
        }
    }
    return std::move(c.verdict);
}

}  // namespace bioie
