// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/analytics.hpp"

#include "bioie/error.hpp"
#include "bioie/kernels.hpp"

#include <algorithm>
#include <map>

namespace bioie {

namespace {

using kernels::Mention;

FrequencyTable tabulate(std::string label, const std::vector<std::vector<Mention>>& per_paper) {
    auto counts = kernels::count_mentions_parallel(per_paper);
    FrequencyTable t;
    t.label = std::move(label);
    for (const auto& [key, tally] : counts) {
        t.rows.push_back({key, tally.display(), static_cast<std::size_t>(tally.count)});
        t.total += tally.count;
    }
    std::stable_sort(t.rows.begin(), t.rows.end(),
                     [](const FrequencyRow& a, const FrequencyRow& b) { return a.count > b.count; });
    return t;
}

/// Per-paper mentions, deduplicated on `dedup_key`, counted under `count_key`.
template <typename Select>
std::vector<std::vector<Mention>> collect(std::span<const ExtractionResult> results, Select select) {
    std::vector<std::vector<Mention>> per_paper;
    per_paper.reserve(results.size());
    for (const auto& r : results) {
        std::map<std::string, Mention> seen;
        select(r, [&](std::string dedup_key, std::string count_key, std::string display) {
            if (count_key.empty()) return;
            seen.emplace(std::move(dedup_key), Mention{std::move(count_key), std::move(display)});
        });
        std::vector<Mention> mentions;
        for (auto& [k, m] : seen) mentions.push_back(std::move(m));
        per_paper.push_back(std::move(mentions));
    }
    return per_paper;
}

bool stopped(const AnalyticsOptions& opts, const std::string& key) {
    return opts.apply_stoplist && opts.stoplist.count(key) > 0;
}

}  // namespace

FrequencyTable FrequencyTable::top(std::size_t k) const {
    if (k == 0) throw PreconditionError("top-k needs k >= 1");
    FrequencyTable t = *this;
    if (t.rows.size() > k) t.rows.resize(k);
    return t;
}

const FrequencyRow* FrequencyTable::find(std::string_view name) const {
    auto key = fold_key(name);
    for (const auto& r : rows) {
        if (r.key == key) return &r;
    }
    return nullptr;
}

std::set<std::string> AnalyticsOptions::default_stoplist() {
    return {"native species", "native plants", "invasive species"};
}

FrequencyTable role_inventory(std::span<const ExtractionResult> results, const AnalyticsOptions& opts) {
    auto per_paper = collect(results, [&](const ExtractionResult& r, auto add) {
        for (const auto& s : r.species) {
            auto name = fold_key(s.name);
            if (stopped(opts, name)) continue;
            auto role = fold_key(s.role);
            add(name + '\x1f' + role, role, normalize_name(s.role));
        }
    });
    return tabulate("species roles", per_paper);
}

FrequencyTable top_species(std::span<const ExtractionResult> results, std::string_view role, std::size_t k,
                           const AnalyticsOptions& opts) {
    if (k == 0) throw PreconditionError("top-k needs k >= 1");
    auto wanted = fold_key(role);
    auto per_paper = collect(results, [&](const ExtractionResult& r, auto add) {
        for (const auto& s : r.species) {
            if (fold_key(s.role) != wanted) continue;
            auto name = fold_key(s.name);
            if (stopped(opts, name)) continue;
            add(name, name, normalize_name(s.name));
        }
    });
    return tabulate(wanted + " species", per_paper).top(k);
}

std::string_view granularity_name(Granularity g) {
    switch (g) {
        case Granularity::Country: return "country";
        case Granularity::Region: return "region";
        case Granularity::City: return "city";
        case Granularity::All: return "all";
    }
    return "";
}

std::optional<Granularity> parse_granularity(std::string_view s) {
    auto k = fold_key(s);
    for (auto g : {Granularity::Country, Granularity::Region, Granularity::City, Granularity::All}) {
        if (k == granularity_name(g)) return g;
    }
    return std::nullopt;
}

FrequencyTable location_frequencies(std::span<const ExtractionResult> results, Granularity granularity) {
    auto level = std::string(granularity_name(granularity));
    auto per_paper = collect(results, [&](const ExtractionResult& r, auto add) {
        for (const auto& l : r.locations) {
            if (granularity != Granularity::All && fold_key(l.geopolitical_info) != level) continue;
            auto name = fold_key(l.name);
            add(name, name, normalize_name(l.name));
        }
    });
    return tabulate("locations (" + level + ")", per_paper);
}

EcosystemFrequencies ecosystem_frequencies(std::span<const ExtractionResult> results) {
    EcosystemFrequencies out;
    auto names = collect(results, [&](const ExtractionResult& r, auto add) {
        for (const auto& e : r.ecosystems) {
            auto name = fold_key(e.name);
            add(name, name, normalize_name(e.name));
        }
    });
    out.names = tabulate("ecosystems", names);

    static const std::set<std::string> kTypes = {"aquatic", "terrestrial", "marine"};
    auto types = collect(results, [&](const ExtractionResult& r, auto add) {
        for (const auto& e : r.ecosystems) {
            auto type = fold_key(e.type);
            if (!kTypes.count(type)) continue;
            add(fold_key(e.name), type, type);
        }
    });
    out.types = tabulate("ecosystem types", types);
    return out;
}

std::vector<LinkagePair> habitat_linkages(std::span<const ExtractionResult> results) {
    auto per_paper = collect(results, [&](const ExtractionResult& r, auto add) {
        for (const auto& h : r.habitats) {
            auto target = normalize_name(h.subcomponent_of);
            if (target.empty() || normalize_name(h.name).empty()) continue;
            auto key = fold_key(h.name) + '\x1f' + fold_key(target);
            add(key, key, normalize_name(h.name) + '\x1f' + target);
        }
    });
    auto counts = kernels::count_mentions_parallel(per_paper);
    std::vector<std::pair<std::string, LinkagePair>> keyed;
    for (const auto& [key, tally] : counts) {
        const auto& display = tally.display();
        auto cut = display.find('\x1f');
        keyed.push_back({key, {display.substr(0, cut), display.substr(cut + 1), static_cast<std::size_t>(tally.count)}});
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.second.count > b.second.count; });
    std::vector<LinkagePair> out;
    for (auto& [k, p] : keyed) out.push_back(std::move(p));
    return out;
}

}  // namespace bioie
