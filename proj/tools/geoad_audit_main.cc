// Copyright 2026 The geoad-audit Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "geoad/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return geoad::cli::Run(args, std::cout, std::cerr);
}
