// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return bioie::cli::run_cli(args, std::cout, std::cerr);
}
