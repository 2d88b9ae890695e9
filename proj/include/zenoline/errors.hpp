/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace zenoline {

// Malformed or out-of-contract configuration input. The CLI maps this to
// exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A computation left its numeric domain: non-finite amplitudes, an infeasible
// plan, a fit on degenerate data. The CLI maps this to exit code 1.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace zenoline
