// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/report.hpp"

#include "bioie/io_util.hpp"

namespace bioie {

namespace {

std::string csv_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string md_cell(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return out;
}

constexpr std::string_view kLinkageLabel = "habitat linkages";

}  // namespace

std::string render_report(std::span<const FrequencyTable> tables, std::span<const LinkagePair> pairs,
                          ReportFormat format) {
    std::string out;
    if (format == ReportFormat::Delimited) {
        out += "table,name,related,count\n";
        for (const auto& t : tables) {
            for (const auto& r : t.rows) {
                out += csv_quote(t.label) + "," + csv_quote(r.display) + ",\"\"," + std::to_string(r.count) + "\n";
            }
        }
        for (const auto& p : pairs) {
            out += csv_quote(kLinkageLabel) + "," + csv_quote(p.habitat) + "," + csv_quote(p.ecosystem) + "," +
                   std::to_string(p.count) + "\n";
        }
        return out;
    }
    out += "# Extraction report\n";
    for (const auto& t : tables) {
        out += "\n## " + md_cell(t.label) + "\n\n";
        out += "Total mentions: " + std::to_string(t.total) + "\n\n";
        out += "| name | count |\n|---|---:|\n";
        for (const auto& r : t.rows) out += "| " + md_cell(r.display) + " | " + std::to_string(r.count) + " |\n";
    }
    out += "\n## " + std::string(kLinkageLabel) + "\n\n";
    out += "| habitat | ecosystem | count |\n|---|---|---:|\n";
    for (const auto& p : pairs) {
        out += "| " + md_cell(p.habitat) + " | " + md_cell(p.ecosystem) + " | " + std::to_string(p.count) + " |\n";
    }
    return out;
}

void emit_report(std::span<const FrequencyTable> tables, std::span<const LinkagePair> pairs,
                 const std::filesystem::path& path, ReportFormat format) {
    write_file_atomic(path, render_report(tables, pairs, format));
}

Analysis analyze(std::span<const ExtractionResult> results, const AnalyzeOptions& options) {
    Analysis a;
    a.tables.push_back(role_inventory(results, options.analytics));
    for (const auto& role : options.roles) {
        a.tables.push_back(top_species(results, role, options.top_k, options.analytics));
    }
    for (auto g : {Granularity::Country, Granularity::Region, Granularity::City}) {
        a.tables.push_back(location_frequencies(results, g).top(options.top_k));
    }
    auto eco = ecosystem_frequencies(results);
    a.tables.push_back(eco.names.top(options.top_k));
    a.tables.push_back(std::move(eco.types));
    a.linkages = habitat_linkages(results);
    return a;
}

}  // namespace bioie
