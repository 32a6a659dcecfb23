// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "cli.hpp"

#include "bioie/analytics.hpp"
#include "bioie/corpus_stats.hpp"
#include "bioie/doi.hpp"
#include "bioie/harvest.hpp"
#include "bioie/http_provider.hpp"
#include "bioie/io_util.hpp"
#include "bioie/mock_provider.hpp"
#include "bioie/report.hpp"
#include "bioie/validate.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <iomanip>
#include <mutex>
#include <ostream>

namespace bioie::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::map<std::string, std::string>& s, const std::string& key) {
    const auto& text = s.at(key);
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw PreconditionError("setting " + key + ": '" + text + "' is not a valid number");
    }
    return value;
}

void setup_logging() {
    static std::once_flag once;
    std::call_once(once, [] {
        auto logger = spdlog::stderr_color_mt("bioie");
        logger->set_pattern("[%l] %v");
        spdlog::set_default_logger(logger);
    });
}

std::shared_ptr<ChatProvider> make_provider(const CliConfig& c, const EnvLookup& env) {
    if (c.provider == "mock") {
        return std::make_shared<MockProvider>(c.rulebook.empty() ? MockRulebook::embedded()
                                                                  : MockRulebook::load(c.rulebook));
    }
    auto key = env(c.credential_env);
    if (!key || key->empty()) {
        throw PreconditionError("provider 'endpoint' needs the credential variable " + c.credential_env + " set");
    }
    HttpProviderConfig hc;
    hc.base_url = c.endpoint_url;
    hc.path = c.endpoint_path;
    hc.model = c.model;
    hc.api_key = *key;
    return std::make_shared<HttpChatProvider>(hc);
}

void require_file(const fs::path& p, const std::string& what) {
    if (!fs::exists(p)) throw PreconditionError(what + " " + p.string() + " does not exist");
}

fs::path candidates_path(const CliConfig& c) { return c.work_dir / "candidates.jsonl"; }
fs::path schema_path(const CliConfig& c) { return c.work_dir / "schema.json"; }
fs::path extract_dir(const CliConfig& c) { return c.work_dir / "extract"; }

StandardizedSchema load_schema(const fs::path& p) {
    auto j = nlohmann::ordered_json::parse(read_file(p), nullptr, false);
    if (j.is_discarded()) throw ParseError("schema " + p.string() + " is not valid JSON", 0);
    return schema_from_json(j);
}

std::vector<std::string> read_doi_list(const fs::path& p) {
    std::vector<std::string> out;
    for (auto& line : read_lines(p)) {
        auto t = trim(line);
        if (!t.empty() && t.front() != '#') out.push_back(t);
    }
    return out;
}

int cmd_ingest(const CliConfig& c, const fs::path& dois, const std::string& skip_log, std::ostream& out) {
    require_file(dois, "DOI list");
    std::unique_ptr<HarvestClient> client;
    if (!c.fixtures.empty()) {
        client = std::make_unique<FixtureHarvestClient>(c.fixtures);
    } else if (!c.harvest_url.empty()) {
        HttpHarvestConfig hc;
        hc.base_url = c.harvest_url;
        client = std::make_unique<HttpHarvestClient>(hc);
    } else {
        throw PreconditionError("ingest needs --harvest-url or --fixtures");
    }
    CorpusStore store = fs::exists(c.corpus) ? import_corpus(c.corpus) : CorpusStore{};
    IngestOptions opts;
    opts.parallelism = static_cast<int>(c.stage.parallelism);
    if (!skip_log.empty()) opts.skip_log = skip_log;
    IngestSummary s;
    int code = 0;
    try {
        s = ingest_dois(read_doi_list(dois), *client, store, opts);
    } catch (const PartialIngestError& e) {
        spdlog::error("{}", e.what());
        s = e.summary();
        code = 1;
    }
    export_corpus(store, c.corpus);
    out << "queried=" << s.queried << " found=" << s.found << " abstract_only=" << s.abstract_only
        << " with_full_text=" << s.with_full_text << " missing=" << s.missing.size()
        << " malformed=" << s.malformed.size() << "\n";
    return code;
}

void print_tokens(std::ostream& out, const std::string& label, const kernels::TokenSummary& t) {
    out << label << "_documents=" << t.documents << " " << label << "_tokens=" << t.total_tokens;
    if (t.min) out << " " << label << "_min=" << *t.min << " " << label << "_max=" << *t.max;
    if (auto avg = t.average()) out << " " << label << "_avg=" << std::fixed << std::setprecision(2) << *avg;
    out << "\n";
}

int cmd_stats(const CliConfig& c, bool biblio, std::ostream& out) {
    require_file(c.corpus, "corpus");
    auto store = import_corpus(c.corpus);
    auto s = compute_stats(store);
    out << "total=" << s.total << "\n";
    out << "abstract_only=" << s.abstract_only << " with_full_text=" << s.with_full_text << "\n";
    print_tokens(out, "abstract", s.abstract_tokens);
    print_tokens(out, "full_text", s.full_text_tokens);
    if (biblio) {
        auto b = bibliometrics(store);
        for (const auto& [year, counts] : b.by_year) {
            out << "year=" << year << " abstracts=" << counts.abstract_count << " fulltexts=" << counts.fulltext_count
                << "\n";
        }
        for (const auto& row : b.by_publisher) {
            out << "publisher=\"" << row.publisher << "\" abstracts=" << row.counts.abstract_count
                << " fulltexts=" << row.counts.fulltext_count << "\n";
        }
    }
    return 0;
}

int cmd_specialize(const CliConfig& c, LlmGateway& gw, std::ostream& out) {
    require_file(c.corpus, "corpus");
    auto store = import_corpus(c.corpus);
    auto outcome = run_specialize(store, c.stage, gw);
    fs::create_directories(c.work_dir);
    std::string body;
    for (const auto& cand : outcome.candidates) {
        body += nlohmann::ordered_json{{"doi", cand.paper_doi}, {"candidate", candidate_to_json(cand)}}.dump() + "\n";
    }
    write_file_atomic(candidates_path(c), body);
    std::string q;
    for (const auto& rec : outcome.quarantined) q += quarantine_to_json(rec).dump() + "\n";
    write_file_atomic(c.work_dir / "specialize_quarantine.jsonl", q);
    out << "sampled=" << outcome.sampled.size() << " candidates=" << outcome.candidates.size()
        << " quarantined=" << outcome.quarantined.size() << "\n";
    return 0;
}

std::vector<CandidateSchema> load_candidates(const fs::path& p) {
    std::vector<CandidateSchema> out;
    for (const auto& line : read_lines(p)) {
        auto j = nlohmann::ordered_json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("candidate")) throw ParseError("bad candidate line in " + p.string(), 0);
        out.push_back(parse_candidate(j["candidate"].dump(), j.value("doi", "")));
    }
    return out;
}

int cmd_generalize(const CliConfig& c, LlmGateway& gw, std::ostream& out) {
    require_file(candidates_path(c), "candidate file");
    auto candidates = load_candidates(candidates_path(c));
    auto outcome = run_generalize(candidates, c.stage, gw);
    fs::create_directories(c.work_dir / "schemas");
    std::size_t valid = 0;
    nlohmann::ordered_json variants = nlohmann::ordered_json::array();
    for (const auto& v : outcome.variants) {
        auto base = c.work_dir / "schemas" / ("variant_" + std::to_string(v.index));
        if (v.schema) {
            if (v.index > 0) ++valid;
            write_file_atomic(base.string() + ".json", schema_to_json(*v.schema).dump(2) + "\n");
        }
        if (!v.raw.empty()) write_file_atomic(base.string() + ".raw.txt", v.raw);
        variants.push_back({{"index", v.index},
                            {"valid", v.schema.has_value()},
                            {"fingerprint", v.schema ? schema_fingerprint(*v.schema) : ""},
                            {"problems", v.problems}});
    }
    const auto& chosen = outcome.chosen_schema();
    write_file_atomic(schema_path(c), schema_to_json(chosen).dump(2) + "\n");
    nlohmann::ordered_json dropped = nlohmann::ordered_json::array();
    for (const auto& d : outcome.oracle_report.dropped) {
        dropped.push_back({{"block", block_name(d.block)}, {"field", d.field}, {"count", d.count}});
    }
    nlohmann::ordered_json record = {
        {"chosen", outcome.chosen},
        {"fingerprint", schema_fingerprint(chosen)},
        {"variants", std::move(variants)},
        {"merge", {{"candidates", outcome.oracle_report.candidates},
                   {"min_support", outcome.oracle_report.min_support},
                   {"dropped", std::move(dropped)},
                   {"unmapped_blocks", outcome.oracle_report.unmapped_blocks}}},
    };
    write_file_atomic(c.work_dir / "generalize.json", record.dump(2) + "\n");
    out << "variants=" << outcome.variants.size() - 1 << " valid=" << valid << " chosen=" << outcome.chosen
        << " fingerprint=" << schema_fingerprint(chosen) << "\n";
    return 0;
}

int cmd_extract(const CliConfig& c, const std::string& schema_file, LlmGateway& gw, std::ostream& out) {
    require_file(c.corpus, "corpus");
    fs::path sp = schema_file.empty() ? schema_path(c) : fs::path(schema_file);
    require_file(sp, "schema");
    auto store = import_corpus(c.corpus);
    auto schema = load_schema(sp);
    auto summary = run_extract(store, schema, c.stage, gw, extract_dir(c), c.stage.selected_variant.value_or(0));
    out << "extracted=" << summary.extracted << " out_of_scope=" << summary.out_of_scope
        << " quarantined=" << summary.quarantined << "\n";
    return 0;
}

int cmd_analyze(const CliConfig& c, const std::string& results_file, bool stoplist, std::ostream& out) {
    fs::path rp = results_file.empty() ? ExtractPaths(extract_dir(c)).results : fs::path(results_file);
    require_file(rp, "results file");
    auto results = load_results(rp);
    AnalyzeOptions opts;
    opts.top_k = c.top_k;
    opts.analytics.apply_stoplist = stoplist;
    auto a = analyze(results, opts);
    auto dir = c.report_dir.empty() ? c.work_dir / "report" : c.report_dir;
    fs::create_directories(dir);
    emit_report(a.tables, a.linkages, dir / "report.csv", ReportFormat::Delimited);
    emit_report(a.tables, a.linkages, dir / "report.md", ReportFormat::Markdown);
    out << "results=" << results.size() << " tables=" << a.tables.size() << " linkages=" << a.linkages.size()
        << " report=" << (dir / "report.csv").string() << "\n";
    return 0;
}

int cmd_validate(const CliConfig& c, const std::string& results_file, const std::string& schema_file,
                 std::ostream& out) {
    fs::path rp = results_file.empty() ? ExtractPaths(extract_dir(c)).results : fs::path(results_file);
    require_file(rp, "results file");
    StandardizedSchema schema = reference_schema();
    if (!schema_file.empty()) {
        require_file(schema_file, "schema");
        schema = load_schema(schema_file);
    } else if (fs::exists(schema_path(c))) {
        schema = load_schema(schema_path(c));
    }
    std::size_t checked = 0, errors = 0, warnings = 0;
    for (const auto& line : read_lines(rp)) {
        ++checked;
        auto j = nlohmann::ordered_json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            out << "line " << checked << ": error unparseable: not a JSON document\n";
            ++errors;
            continue;
        }
        ExtractionResult r;
        try {
            r = result_from_json(j);
        } catch (const ParseError& e) {
            out << "line " << checked << ": error unparseable: " << e.what() << "\n";
            ++errors;
            continue;
        }
        auto verdict = validate_result(r, schema);
        for (const auto& v : verdict.violations) {
            bool err = v.severity == Severity::Error;
            (err ? errors : warnings)++;
            out << r.paper_doi << ": " << (err ? "error " : "warning ") << v.code << ": " << v.message << "\n";
        }
    }
    out << "checked=" << checked << " errors=" << errors << " warnings=" << warnings << "\n";
    return errors == 0 ? 0 : 1;
}

}  // namespace

EnvLookup process_env() {
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* v = std::getenv(name.c_str())) return std::string(v);
        return std::nullopt;
    };
}

const std::map<std::string, std::string>& setting_defaults() {
    static const std::map<std::string, std::string> kDefaults = {
        {"corpus", "corpus.jsonl"},
        {"work_dir", "bioie-work"},
        {"report_dir", ""},
        {"harvest_url", ""},
        {"fixtures", ""},
        {"provider", "mock"},
        {"endpoint_url", "https://api.openai.com"},
        {"endpoint_path", "/v1/chat/completions"},
        {"model", "gpt-4o"},
        {"credential_env", "BIOIE_API_KEY"},
        {"rulebook", ""},
        {"prompts_dir", ""},
        {"sample_size", "10"},
        {"variants", "3"},
        {"variant", ""},
        {"parallelism", "4"},
        {"seed", "0"},
        {"rate_max", "60"},
        {"rate_window_ms", "60000"},
        {"max_retries", "3"},
        {"backoff_ms", "1000"},
        {"checkpoint_every", "25"},
        {"top_k", "10"},
    };
    return kDefaults;
}

std::string env_name(std::string_view key) {
    std::string out = "BIOIE_";
    for (char c : key) out += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::map<std::string, std::string> parse_config_file(std::string_view text) {
    std::map<std::string, std::string> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto t = trim(line);
        if (t.empty()) continue;
        auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config line " + std::to_string(line_no) + ": expected key = value", line_no);
        }
        auto key = trim(t.substr(0, eq));
        std::replace(key.begin(), key.end(), '-', '_');
        if (!setting_defaults().count(key)) {
            throw ParseError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'", line_no);
        }
        out[key] = trim(t.substr(eq + 1));
    }
    return out;
}

std::map<std::string, std::string> resolve_settings(const std::map<std::string, std::string>& flags,
                                                    const EnvLookup& env,
                                                    const std::map<std::string, std::string>& file) {
    std::map<std::string, std::string> out;
    for (const auto& [key, def] : setting_defaults()) {
        if (auto f = flags.find(key); f != flags.end()) {
            out[key] = f->second;
        } else if (auto e = env(env_name(key))) {
            out[key] = *e;
        } else if (auto c = file.find(key); c != file.end()) {
            out[key] = c->second;
        } else {
            out[key] = def;
        }
    }
    return out;
}

CliConfig make_config(const std::map<std::string, std::string>& s) {
    CliConfig c;
    c.corpus = s.at("corpus");
    c.work_dir = s.at("work_dir");
    c.report_dir = s.at("report_dir");
    c.harvest_url = s.at("harvest_url");
    c.fixtures = s.at("fixtures");
    c.provider = s.at("provider");
    if (c.provider != "mock" && c.provider != "endpoint") {
        throw PreconditionError("provider must be 'mock' or 'endpoint', not '" + c.provider + "'");
    }
    c.endpoint_url = s.at("endpoint_url");
    c.endpoint_path = s.at("endpoint_path");
    c.model = s.at("model");
    c.credential_env = s.at("credential_env");
    c.rulebook = s.at("rulebook");
    c.prompts_dir = s.at("prompts_dir");
    c.top_k = parse_number<std::size_t>(s, "top_k");
    if (c.top_k == 0) throw PreconditionError("top_k must be at least 1");

    auto& st = c.stage;
    st.sample_size = parse_number<std::size_t>(s, "sample_size");
    st.generalize_variants = parse_number<std::size_t>(s, "variants");
    if (!s.at("variant").empty()) st.selected_variant = parse_number<std::size_t>(s, "variant");
    st.parallelism = parse_number<std::size_t>(s, "parallelism");
    st.rng_seed = parse_number<std::uint64_t>(s, "seed");
    st.rate.max_requests_per_window = parse_number<std::size_t>(s, "rate_max");
    st.rate.window = std::chrono::milliseconds(parse_number<long long>(s, "rate_window_ms"));
    st.rate.max_retries = parse_number<int>(s, "max_retries");
    st.rate.backoff_base = std::chrono::milliseconds(parse_number<long long>(s, "backoff_ms"));
    st.checkpoint_every = parse_number<std::size_t>(s, "checkpoint_every");
    if (!c.prompts_dir.empty()) st.templates = PromptTemplates::load(c.prompts_dir);
    st.check();
    return c;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
    setup_logging();
    CLI::App app{"Schema discovery and entity extraction over a scholarly corpus", "bioie"};
    app.require_subcommand(1);
    app.fallthrough();

    std::map<std::string, std::string> flag_values;
    std::map<std::string, CLI::Option*> flag_options;
    for (const auto& [key, def] : setting_defaults()) {
        auto dashed = key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        flag_options[key] = app.add_option("--" + dashed, flag_values[key],
                                           "(env " + env_name(key) + ", default '" + def + "')");
    }
    std::string config_file;
    app.add_option("--config", config_file, "key = value settings file (env BIOIE_CONFIG)");
    bool verbose = false, quiet = false;
    app.add_flag("-v,--verbose", verbose, "debug logging");
    app.add_flag("-q,--quiet", quiet, "warnings and errors only");

    auto* ingest = app.add_subcommand("ingest", "harvest records for a DOI list into the corpus");
    std::string dois, skip_log;
    ingest->add_option("--dois", dois, "file with one DOI per line")->required();
    ingest->add_option("--skip-log", skip_log, "where to record skipped DOIs");

    auto* stats = app.add_subcommand("stats", "corpus availability and token statistics");
    bool biblio = false;
    stats->add_flag("--bibliometrics", biblio, "per-year and per-publisher tables");

    auto* specialize = app.add_subcommand("specialize", "propose per-paper schemas for a seeded sample");
    std::string exclude_file;
    specialize->add_option("--exclude", exclude_file, "DOIs flagged as out of domain, one per line");

    auto* generalize = app.add_subcommand("generalize", "merge candidate schemas into standardized variants");

    auto* extract = app.add_subcommand("extract", "apply the standardized schema to every abstract");
    std::string schema_file;
    extract->add_option("--schema", schema_file, "schema file (default <work-dir>/schema.json)");

    auto* analyze_cmd = app.add_subcommand("analyze", "aggregate tables and reports over extraction results");
    std::string results_file;
    bool stoplist = false;
    analyze_cmd->add_option("--results,results", results_file, "results file");
    analyze_cmd->add_flag("--stoplist", stoplist, "drop generic species terms");

    auto* validate_cmd = app.add_subcommand("validate", "check extraction results against a schema");
    validate_cmd->add_option("--results,results", results_file, "results file");
    validate_cmd->add_option("--schema", schema_file, "schema file");

    std::vector<std::string> argv_store = args;
    argv_store.insert(argv_store.begin(), "bioie");
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    spdlog::set_level(verbose ? spdlog::level::debug : quiet ? spdlog::level::warn : spdlog::level::info);

    try {
        std::map<std::string, std::string> flags;
        for (const auto& [key, opt] : flag_options) {
            if (opt->count() > 0) flags[key] = flag_values[key];
        }
        if (config_file.empty()) config_file = env("BIOIE_CONFIG").value_or("");
        std::map<std::string, std::string> file;
        if (!config_file.empty()) {
            require_file(config_file, "config file");
            try {
                file = parse_config_file(read_file(config_file));
            } catch (const ParseError& e) {
                throw PreconditionError(config_file + ": " + e.what());
            }
        }
        auto cfg = make_config(resolve_settings(flags, env, file));
        if (!exclude_file.empty()) {
            require_file(exclude_file, "exclusion list");
            for (const auto& d : read_doi_list(exclude_file)) cfg.stage.exclude.insert(normalize_doi(d).value_or(d));
        }

        auto gateway = [&] { return LlmGateway(make_provider(cfg, env), cfg.stage.rate); };
        if (ingest->parsed()) return cmd_ingest(cfg, dois, skip_log, out);
        if (stats->parsed()) return cmd_stats(cfg, biblio, out);
        if (specialize->parsed()) {
            auto gw = gateway();
            return cmd_specialize(cfg, gw, out);
        }
        if (generalize->parsed()) {
            auto gw = gateway();
            return cmd_generalize(cfg, gw, out);
        }
        if (extract->parsed()) {
            auto gw = gateway();
            return cmd_extract(cfg, schema_file, gw, out);
        }
        if (analyze_cmd->parsed()) return cmd_analyze(cfg, results_file, stoplist, out);
        if (validate_cmd->parsed()) return cmd_validate(cfg, results_file, schema_file, out);
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace bioie::cli
