// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "support.hpp"

#include "bioie/io_util.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <regex>
#include <set>

#include <nlohmann/json.hpp>

namespace bioie::testing {

namespace fs = std::filesystem;

fs::path fixture_dir() { return BIOIE_FIXTURE_DIR; }
fs::path data_dir() { return BIOIE_DATA_DIR; }

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("bioie-test-" + std::to_string(rd()) + "-" + std::to_string(counter.fetch_add(1)));
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

ScriptedProvider::ScriptedProvider(Script script, std::string id) : script_(std::move(script)), id_(std::move(id)) {}

ProviderReply ScriptedProvider::send(const PromptPair& prompt) {
    {
        std::lock_guard lock(mu_);
        times_.push_back(std::chrono::steady_clock::now());
    }
    auto n = calls_.fetch_add(1);
    return script_(prompt, n);
}

std::vector<std::chrono::steady_clock::time_point> ScriptedProvider::dispatch_times() const {
    std::lock_guard lock(mu_);
    return times_;
}

BreakingProvider::BreakingProvider(std::shared_ptr<ChatProvider> inner, std::size_t fail_from)
    : inner_(std::move(inner)), fail_from_(fail_from) {}

ProviderReply BreakingProvider::send(const PromptPair& prompt) {
    auto n = calls_.fetch_add(1);
    if (!healed_ && n >= fail_from_) return {503, "unavailable"};
    return inner_->send(prompt);
}

RateLimitPolicy fast_policy() {
    RateLimitPolicy p;
    p.max_requests_per_window = 100000;
    p.window = std::chrono::milliseconds(1000);
    p.max_retries = 2;
    p.backoff_base = std::chrono::milliseconds(1);
    return p;
}

std::vector<ExtractionResult> paper_count_results() {
    auto j = nlohmann::json::parse(read_file(fixture_dir() / "paper_counts.json"));
    std::size_t papers = 0;
    for (const char* sec : {"species", "locations", "ecosystems", "habitats"}) {
        for (const auto& row : j[sec]) papers = std::max<std::size_t>(papers, row["count"].get<std::size_t>());
    }
    std::vector<ExtractionResult> out(papers);
    for (std::size_t i = 0; i < papers; ++i) {
        auto& r = out[i];
        r.paper_doi = "10.9999/fixture." + std::to_string(i);
        for (const auto& row : j["species"]) {
            if (i >= row["count"].get<std::size_t>()) continue;
            r.species.push_back({row["name"], row["role"], "species", {}});
        }
        for (const auto& row : j["locations"]) {
            if (i >= row["count"].get<std::size_t>()) continue;
            r.locations.push_back({row["name"], "administrative", row["level"], "", {}});
        }
        for (const auto& row : j["ecosystems"]) {
            if (i >= row["count"].get<std::size_t>()) continue;
            r.ecosystems.push_back({row["name"], row["type"], "regional", {}});
        }
        for (const auto& row : j["habitats"]) {
            if (i >= row["count"].get<std::size_t>()) continue;
            r.habitats.push_back({row["name"], "", row["subcomponent_of"], "", {}});
        }
        // Repeats within one paper must not add mentions.
        if (i % 10 == 0) {
            if (!r.species.empty()) {
                auto dup = r.species.front();
                std::transform(dup.name.begin(), dup.name.end(), dup.name.begin(),
                               [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
                r.species.push_back(dup);
            }
            if (!r.locations.empty()) {
                auto dup = r.locations.front();
                dup.name = "  " + dup.name + " ";
                r.locations.push_back(dup);
            }
        }
    }
    return out;
}

std::vector<ExtractionResult> results_from_species_table(const FrequencyTable& table, const std::string& role) {
    std::size_t papers = 0;
    for (const auto& row : table.rows) papers = std::max(papers, row.count);
    std::vector<ExtractionResult> out(papers);
    for (std::size_t i = 0; i < papers; ++i) {
        out[i].paper_doi = "10.9999/regen." + std::to_string(i);
        for (const auto& row : table.rows) {
            if (i < row.count) out[i].species.push_back({row.display, role, "species", {}});
        }
    }
    return out;
}

namespace {

const std::vector<std::string> kInScopeTemplates = {
    "{sp} was recorded at {n} sites during a survey of coastal lagoons.",
    "We modelled the spread of {sp} using occurrence records from {n} herbarium collections.",
    "Population genetics of {sp} reveal {n} independent introductions.",
    "Control trials against {sp} reduced biomass by {n} percent.",
    "Field experiments show that {sp} alters litter decomposition in {n} plots.",
};

const std::vector<std::string> kOutOfScopeTemplates = {
    "Enzyme kinetics of purified {w} were measured across {n} temperatures.",
    "A survey of {n} households examined {w} and crayfish farming revenue.",
    "We simulate {w} in a lattice model with {n} native parameters.",
    "Invasive ductal carcinoma outcomes were compared across {n} {w} cohorts.",
    "Toad-shaped {w} sculptures from {n} museums were catalogued.",
};

const std::vector<std::string> kFiller = {"catalysts", "polymers", "mortgage rates", "proteins", "sensor arrays",
                                          "mussel shell pigments", "reed instruments", "squirrel cage motors"};

std::string fill(std::string t, const std::string& key, const std::string& value) {
    auto pos = t.find(key);
    if (pos != std::string::npos) t.replace(pos, key.size(), value);
    return t;
}

}  // namespace

CorpusStore generated_corpus(std::size_t in_scope, std::size_t out_of_scope, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto& rules = MockRulebook::embedded();
    std::vector<bool> flags(in_scope, true);
    flags.resize(in_scope + out_of_scope, false);
    std::shuffle(flags.begin(), flags.end(), rng);

    CorpusStore store;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        PaperRecord p;
        char buf[32];
        std::snprintf(buf, sizeof buf, "10.7777/gen.%04zu", i);
        p.doi = buf;
        auto n = std::to_string(rng() % 90 + 3);
        if (flags[i]) {
            const auto& sp = rules.species[rng() % rules.species.size()];
            std::vector<std::string> surfaces{sp.name};
            surfaces.insert(surfaces.end(), sp.aliases.begin(), sp.aliases.end());
            auto surface = surfaces[rng() % surfaces.size()];
            if (rng() % 3 == 0) {
                std::transform(surface.begin(), surface.end(), surface.begin(),
                               [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            }
            p.title = "Study " + std::to_string(i) + " on " + surface;
            p.abstract = fill(fill(kInScopeTemplates[rng() % kInScopeTemplates.size()], "{sp}", surface), "{n}", n);
        } else {
            auto w = kFiller[rng() % kFiller.size()];
            p.title = "Report " + std::to_string(i) + " on " + w;
            p.abstract = fill(fill(kOutOfScopeTemplates[rng() % kOutOfScopeTemplates.size()], "{w}", w), "{n}", n);
        }
        p.year = 2000 + static_cast<int>(rng() % 24);
        store.upsert(std::move(p));
    }
    return store;
}

std::size_t keyword_tally_in_scope(const CorpusStore& store, const MockRulebook& rules) {
    std::vector<std::regex> patterns;
    for (const auto& s : rules.species) {
        std::vector<std::string> surfaces{s.name};
        surfaces.insert(surfaces.end(), s.aliases.begin(), s.aliases.end());
        for (const auto& surface : surfaces) {
            std::string escaped;
            for (char c : surface) {
                if (std::string_view("\\^$.|?*+()[]{}-").find(c) != std::string_view::npos) escaped += '\\';
                escaped += c;
            }
            patterns.emplace_back("(^|[^A-Za-z0-9])" + escaped + "($|[^A-Za-z0-9])", std::regex::icase);
        }
    }
    std::size_t hits = 0;
    for (const auto& [doi, rec] : store.records()) {
        if (!rec.has_abstract()) continue;
        auto text = rec.title + "\n" + *rec.abstract;
        bool found = std::any_of(patterns.begin(), patterns.end(),
                                 [&](const std::regex& re) { return std::regex_search(text, re); });
        if (found) ++hits;
    }
    return hits;
}

// ---- merge oracle ------------------------------------------------------

namespace {

const std::map<Block, std::vector<std::string>> kBlockSurfaces = {
    {Block::Species, {"Species", "species", "organisms", "Taxa"}},
    {Block::Location, {"Location", "locations", "study_sites", "Places"}},
    {Block::Ecosystem, {"Ecosystem", "ecosystems"}},
    {Block::Habitat, {"Habitat", "habitats"}},
    {Block::Relationships, {"Relationships", "interactions", "relations", "Links"}},
};

const std::vector<std::string> kExtraFields = {"impact", "abundance", "introduction_pathway", "spread_rate",
                                               "climate_zone", "confidence", "source_sentence", "first_record"};
const std::vector<std::string> kValuePool = {"low", "medium", "high", "native", "alien", "cryptogenic",
                                             "naturalized", "country", "aquatic", "global"};
const std::vector<std::string> kNotes = {"", "", "free text", "short description", "see paper"};

std::string to_camel(const std::string& snake) {
    std::string out;
    bool up = false;
    for (char c : snake) {
        if (c == '_') {
            up = true;
        } else {
            out += up ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
            up = false;
        }
    }
    return out;
}

std::string to_title(const std::string& snake) {
    std::string out;
    bool start = true;
    for (char c : snake) {
        if (c == '_') {
            out += ' ';
            start = true;
        } else {
            out += start ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
            start = false;
        }
    }
    return out;
}

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
    return v[rng() % v.size()];
}

}  // namespace

std::vector<GenCandidate> random_candidate_set(std::mt19937_64& rng, std::size_t max_candidates,
                                               std::size_t max_fields) {
    std::size_t n = 2 + rng() % (max_candidates - 1);
    std::vector<GenCandidate> set;
    for (std::size_t c = 0; c < n; ++c) {
        GenCandidate g;
        g.doi = "10.1234/cand." + std::to_string(c);
        std::vector<Block> chosen;
        for (auto b : kAllBlocks) {
            if (rng() % 10 < 7) chosen.push_back(b);
        }
        for (auto b : chosen) g.blocks.push_back({b, pick(rng, kBlockSurfaces.at(b)), {}});
        std::size_t budget = chosen.empty() ? 0 : rng() % (max_fields + 1);
        for (std::size_t k = 0; k < budget; ++k) {
            auto& block = g.blocks[rng() % g.blocks.size()];
            std::vector<std::string> pool;
            for (const auto& m : reference_schema().block(block.block).fields) pool.push_back(m.name);
            pool.insert(pool.end(), kExtraFields.begin(), kExtraFields.end());
            auto canonical = pick(rng, pool);
            bool dup = std::any_of(block.fields.begin(), block.fields.end(),
                                   [&](const GenField& f) { return f.canonical == canonical; });
            if (dup) continue;
            std::string surface;
            switch (rng() % 3) {
                case 0: surface = canonical; break;
                case 1: surface = to_camel(canonical); break;
                default: surface = to_title(canonical); break;
            }
            FieldDescriptor d;
            d.name = surface;
            const auto* ref = reference_schema().block(block.block).field(canonical);
            d.kind = (ref && rng() % 10 < 6) ? ref->kind : static_cast<FieldKind>(rng() % 4);
            if (d.kind == FieldKind::Enum) {
                std::set<std::string> vals;
                auto count = 1 + rng() % 3;
                while (vals.size() < count) vals.insert(pick(rng, kValuePool));
                d.values.assign(vals.begin(), vals.end());
                std::shuffle(d.values.begin(), d.values.end(), rng);
            } else if (d.kind == FieldKind::List) {
                d.values = {"entity1"};
                if (rng() % 2) d.values.push_back("entity2");
            } else if (d.kind == FieldKind::Reference) {
                d.target = pick(rng, std::vector<std::string>{"Ecosystem", "Habitat", "Species"});
            }
            d.note = pick(rng, kNotes);
            block.fields.push_back({canonical, surface, std::move(d)});
        }
        if (rng() % 5 == 0) g.unmapped.push_back(rng() % 2 ? "metadata" : "study_design");
        set.push_back(std::move(g));
    }
    return set;
}

CandidateSchema render(const GenCandidate& g) {
    CandidateSchema c;
    c.paper_doi = g.doi;
    for (const auto& b : g.blocks) {
        CandidateBlock cb;
        cb.name = b.surface;
        for (const auto& f : b.fields) cb.fields.push_back(f.descriptor);
        c.blocks.push_back(std::move(cb));
    }
    for (const auto& u : g.unmapped) c.blocks.push_back({u, {{"x", FieldKind::Text, {}, {}, "text"}}});
    return c;
}

OracleMerge oracle_merge(const std::vector<GenCandidate>& set, std::size_t numerator, std::size_t denominator) {
    const std::size_t n = set.size();
    std::size_t threshold = 0;
    while (threshold * denominator < n * numerator) ++threshold;
    if (threshold == 0) threshold = 1;

    // Every (candidate, block) proposal of a canonical field, brute force.
    auto proposals = [&](Block b, const std::string& name) {
        std::vector<const FieldDescriptor*> out;
        for (const auto& g : set) {
            for (const auto& blk : g.blocks) {
                if (blk.block != b) continue;
                for (const auto& f : blk.fields) {
                    if (f.canonical == name) out.push_back(&f.descriptor);
                }
            }
        }
        return out;
    };
    auto rank = [](const std::map<std::string, std::size_t>& counts) {
        std::vector<std::pair<std::string, std::size_t>> v(counts.begin(), counts.end());
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        std::vector<std::string> out;
        for (const auto& [k, c] : v) out.push_back(k);
        return out;
    };
    auto value_counts = [](const std::vector<const FieldDescriptor*>& ps, FieldKind kind) {
        std::map<std::string, std::size_t> counts;
        for (const auto* p : ps) {
            if (p->kind != kind) continue;
            std::set<std::string> distinct(p->values.begin(), p->values.end());
            for (const auto& v : distinct) counts[v]++;
        }
        return counts;
    };

    OracleMerge out;
    for (auto b : kAllBlocks) {
        auto& fields = out.schema.block(b).fields;
        const auto& ref = reference_schema().block(b).fields;
        std::set<std::string> names;
        for (const auto& g : set) {
            for (const auto& blk : g.blocks) {
                if (blk.block != b) continue;
                for (const auto& f : blk.fields) names.insert(f.canonical);
            }
        }
        for (const auto& r : ref) {
            FieldDescriptor f = r;
            if (r.kind == FieldKind::Enum) {
                for (const auto& v : rank(value_counts(proposals(b, r.name), FieldKind::Enum))) {
                    if (std::find(f.values.begin(), f.values.end(), v) == f.values.end()) f.values.push_back(v);
                }
            }
            fields.push_back(f);
        }
        std::vector<std::pair<std::size_t, FieldDescriptor>> kept;
        for (const auto& name : names) {
            bool is_ref = std::any_of(ref.begin(), ref.end(), [&](const auto& r) { return r.name == name; });
            if (is_ref) continue;
            auto ps = proposals(b, name);
            if (ps.size() < threshold) {
                out.dropped.emplace_back(b, name, ps.size());
                continue;
            }
            FieldDescriptor f;
            f.name = name;
            std::size_t best = 0;
            for (int k = 0; k < 4; ++k) {
                auto c = static_cast<std::size_t>(
                    std::count_if(ps.begin(), ps.end(), [&](const auto* p) { return static_cast<int>(p->kind) == k; }));
                if (c > best) {
                    best = c;
                    f.kind = static_cast<FieldKind>(k);
                }
            }
            if (f.kind == FieldKind::Enum || f.kind == FieldKind::List) f.values = rank(value_counts(ps, f.kind));
            if (f.kind == FieldKind::Reference) {
                std::map<std::string, std::size_t> targets;
                for (const auto* p : ps) {
                    if (p->kind == FieldKind::Reference && !p->target.empty()) targets[p->target]++;
                }
                auto ranked = rank(targets);
                if (!ranked.empty()) f.target = ranked.front();
            }
            std::map<std::string, std::size_t> notes;
            for (const auto* p : ps) {
                if (!p->note.empty()) notes[p->note]++;
            }
            auto ranked_notes = rank(notes);
            if (!ranked_notes.empty()) f.note = ranked_notes.front();
            kept.emplace_back(ps.size(), std::move(f));
        }
        std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b2) {
            return a.first != b2.first ? a.first > b2.first : a.second.name < b2.second.name;
        });
        for (auto& [s, f] : kept) fields.push_back(std::move(f));
    }
    std::sort(out.dropped.begin(), out.dropped.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        if (std::get<2>(a) != std::get<2>(b)) return std::get<2>(a) > std::get<2>(b);
        return std::get<1>(a) < std::get<1>(b);
    });
    return out;
}

}  // namespace bioie::testing
