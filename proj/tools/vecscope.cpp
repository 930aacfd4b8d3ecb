// Copyright 2026 The vecscope Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "vecscope/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return vecscope::run_cli(args, std::cout, std::cerr);
}
