// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace bioie {

/// Canonical DOI form: lowercase, resolver/scheme prefixes removed, surrounding
/// whitespace trimmed. Returns nullopt when the input does not look like a DOI
/// ("10.<registrant>/<suffix>").
std::optional<std::string> normalize_doi(std::string_view raw);

/// Filesystem-safe name for a DOI, used by the fixture harvest client.
std::string doi_file_stem(std::string_view doi);

}  // namespace bioie
