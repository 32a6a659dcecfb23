// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

namespace bioie {

/// Progress of the extract stage. `completed` holds every DOI whose result
/// is committed (extracted or out of scope); `out_of_scope` is the subset
/// answered "N/A". Quarantined DOIs are disjoint from completed ones.
struct Checkpoint {
    std::string stage = "extract";
    std::set<std::string> completed;
    std::map<std::string, std::string> quarantined;  ///< doi -> reason
    std::set<std::string> out_of_scope;
    std::string schema_fingerprint;
    std::size_t schema_variant = 0;

    std::size_t extracted() const { return completed.size() - out_of_scope.size(); }
    std::size_t processed() const { return completed.size() + quarantined.size(); }
    bool contains(const std::string& doi) const { return completed.count(doi) || quarantined.count(doi); }

    /// Throws PreconditionError when the set invariants are broken.
    void check() const;

    bool operator==(const Checkpoint&) const = default;
};

nlohmann::ordered_json checkpoint_to_json(const Checkpoint& cp);
Checkpoint checkpoint_from_json(const nlohmann::json& j);

/// Atomic replace.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);
/// nullopt when the file does not exist; ParseError when it is corrupt.
std::optional<Checkpoint> load_checkpoint(const std::filesystem::path& path);

}  // namespace bioie
