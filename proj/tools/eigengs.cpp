// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "eigengs/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return eigengs::cli::run(args, std::cout, std::cerr);
}
