// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/doi.hpp"

#include <array>
#include <cctype>

namespace bioie {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<std::string> normalize_doi(std::string_view raw) {
    std::string doi = lower(trim(raw));

    static constexpr std::array<std::string_view, 5> kPrefixes = {
        "https://doi.org/", "http://doi.org/", "https://dx.doi.org/", "http://dx.doi.org/", "doi:",
    };
    for (auto prefix : kPrefixes) {
        if (doi.starts_with(prefix)) {
            doi.erase(0, prefix.size());
            break;
        }
    }
    doi = std::string(trim(doi));

    // 10.<digits(.digits)*>/<non-empty suffix without whitespace>
    if (!doi.starts_with("10.")) return std::nullopt;
    auto slash = doi.find('/');
    if (slash == std::string::npos || slash == 3 || slash + 1 == doi.size()) return std::nullopt;
    for (std::size_t i = 3; i < slash; ++i) {
        char c = doi[i];
        if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.') return std::nullopt;
    }
    for (char c : doi) {
        if (std::isspace(static_cast<unsigned char>(c))) return std::nullopt;
    }
    return doi;
}

std::string doi_file_stem(std::string_view doi) {
    std::string out;
    out.reserve(doi.size());
    for (char c : doi) {
        auto u = static_cast<unsigned char>(c);
        out.push_back(std::isalnum(u) || c == '.' || c == '-' ? c : '_');
    }
    return out;
}

}  // namespace bioie
