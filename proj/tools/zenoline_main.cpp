/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#include "zenoline/cli.hpp"

int main(int argc, char** argv) { return zenoline::cli::run(argc, argv); }
