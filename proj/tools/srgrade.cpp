// SPDX-FileCopyrightText: 2026 The srgrade authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "srg/cli.hpp"

int main(int argc, char** argv) { return srg::cli_main(argc, argv, std::cin, std::cout, std::cerr); }
