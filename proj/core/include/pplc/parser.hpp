// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include "pplc/term.hpp"

namespace pplc {

/// Parses a program in the concrete syntax described in docs/language.md.
/// Throws SyntaxError with line and column on malformed input.
TermPtr parse(std::string_view source);

/// Reads and parses a file. Throws Error if the file cannot be read.
TermPtr parse_file(const std::string& path);

}  // namespace pplc
