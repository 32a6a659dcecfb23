// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include "bioie/analytics.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace bioie {

enum class ReportFormat { Delimited, Markdown };

/// CSV has the header "table,name,related,count"; text fields are always
/// double-quoted, counts never. Table rows leave `related` empty; linkage
/// rows use table "habitat linkages", the habitat as name and the ecosystem
/// as related. Markdown has one "## <label>" section per table. Output is a
/// pure function of the arguments.
std::string render_report(std::span<const FrequencyTable> tables, std::span<const LinkagePair> pairs,
                          ReportFormat format);

/// render_report, written atomically. Throws IoError when the path is not
/// writable.
void emit_report(std::span<const FrequencyTable> tables, std::span<const LinkagePair> pairs,
                 const std::filesystem::path& path, ReportFormat format);

/// The standard set of aggregate tables over a result set.
struct Analysis {
    std::vector<FrequencyTable> tables;
    std::vector<LinkagePair> linkages;
};

struct AnalyzeOptions {
    std::size_t top_k = 10;
    std::vector<std::string> roles = {"invasive", "native", "introduced"};
    AnalyticsOptions analytics;
};

/// Role inventory, top species per role, locations per level, ecosystems
/// and their types, and habitat linkages.
Analysis analyze(std::span<const ExtractionResult> results, const AnalyzeOptions& options = {});

}  // namespace bioie
