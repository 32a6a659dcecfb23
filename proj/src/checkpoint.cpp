// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "bioie/checkpoint.hpp"

#include "bioie/error.hpp"
#include "bioie/io_util.hpp"

#include <algorithm>

namespace bioie {

void Checkpoint::check() const {
    for (const auto& [doi, reason] : quarantined) {
        if (completed.count(doi)) throw PreconditionError("checkpoint: " + doi + " is both completed and quarantined");
    }
    for (const auto& doi : out_of_scope) {
        if (!completed.count(doi)) throw PreconditionError("checkpoint: out-of-scope " + doi + " is not completed");
    }
}

nlohmann::ordered_json checkpoint_to_json(const Checkpoint& cp) {
    nlohmann::ordered_json q = nlohmann::ordered_json::object();
    for (const auto& [doi, reason] : cp.quarantined) q[doi] = reason;
    return {
        {"stage", cp.stage},
        {"schema_fingerprint", cp.schema_fingerprint},
        {"schema_variant", cp.schema_variant},
        {"completed", cp.completed},
        {"out_of_scope", cp.out_of_scope},
        {"quarantined", std::move(q)},
    };
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
    Checkpoint cp;
    try {
        cp.stage = j.at("stage").get<std::string>();
        cp.schema_fingerprint = j.at("schema_fingerprint").get<std::string>();
        cp.schema_variant = j.value("schema_variant", std::size_t{0});
        cp.completed = j.at("completed").get<std::set<std::string>>();
        cp.out_of_scope = j.at("out_of_scope").get<std::set<std::string>>();
        cp.quarantined = j.at("quarantined").get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("checkpoint: ") + e.what(), 0);
    }
    cp.check();
    return cp;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
    cp.check();
    write_file_atomic(path, checkpoint_to_json(cp).dump(2) + "\n");
}

std::optional<Checkpoint> load_checkpoint(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    auto text = read_file(path);
    auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("checkpoint " + path.string() + " is not valid JSON", 0);
    return checkpoint_from_json(j);
}

}  // namespace bioie
