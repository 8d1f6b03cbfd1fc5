// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "pplc/anf.hpp"
#include "pplc/target.hpp"
#include "pplc/term.hpp"

namespace pplc {

/// Source text that parses back to an alpha-equivalent term. Uniquified
/// names print as `name#id`.
std::string pretty(const TermPtr& t);
std::string pretty(const AnfPtr& t);

/// Target terms add `Sus_assume(d, k)`, `Sus_weight(w, k)` and `c_cps`
/// wrappers (e.g. `head_cps`). This output is for reading, not re-parsing.
std::string pretty(const TargetPtr& t);

}  // namespace pplc
