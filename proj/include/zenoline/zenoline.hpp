/**
 * Copyright 2026, The zenoline developers.
 *
 * This source code is licensed under the Apache License, Version 2.0 found in
 * the LICENSE file in the root directory of this source tree.
 */

#pragma once

#include "zenoline/cli.hpp"
#include "zenoline/config.hpp"
#include "zenoline/core_model.hpp"
#include "zenoline/errors.hpp"
#include "zenoline/evolution.hpp"
#include "zenoline/io.hpp"
#include "zenoline/numerics.hpp"
#include "zenoline/planner.hpp"
#include "zenoline/qnd.hpp"
#include "zenoline/regime.hpp"
#include "zenoline/rng.hpp"
#include "zenoline/version.hpp"
#include "zenoline/zeno.hpp"
