// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include "bioie/pipeline.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bioie::cli {

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// std::getenv.
EnvLookup process_env();

/// Every setting the tool understands, with its default. Flag spelling is
/// --key with '_' written as '-'; the environment variable is BIOIE_<KEY>.
const std::map<std::string, std::string>& setting_defaults();

std::string env_name(std::string_view key);

/// "key = value" lines; '#' starts a comment; blank lines are ignored.
/// Throws ParseError (offset = line number) on other lines and unknown keys.
std::map<std::string, std::string> parse_config_file(std::string_view text);

/// Per key: flag value, else environment, else config file, else default.
std::map<std::string, std::string> resolve_settings(const std::map<std::string, std::string>& flags,
                                                    const EnvLookup& env,
                                                    const std::map<std::string, std::string>& file);

struct CliConfig {
    std::filesystem::path corpus;
    std::filesystem::path work_dir;
    std::filesystem::path report_dir;
    std::string harvest_url;
    std::filesystem::path fixtures;
    std::string provider;  ///< "mock" or "endpoint"
    std::string endpoint_url;
    std::string endpoint_path;
    std::string model;
    std::string credential_env;
    std::filesystem::path rulebook;
    std::filesystem::path prompts_dir;
    std::size_t top_k = 10;
    StageConfig stage;
};

/// Typed view of resolved settings. Throws PreconditionError on values that
/// do not parse or break a StageConfig invariant.
CliConfig make_config(const std::map<std::string, std::string>& settings);

/// Entry point behind the executable. Exit codes: 0 success, 1 stage failure
/// or validation errors, 2 usage or configuration errors. Summaries go to
/// `out`, diagnostics to `err`, progress logging to standard error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const EnvLookup& env = process_env());

}  // namespace bioie::cli
