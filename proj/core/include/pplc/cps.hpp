// Copyright 2026 The pplc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <string_view>

#include "pplc/analysis.hpp"
#include "pplc/anf.hpp"
#include "pplc/target.hpp"

namespace pplc {

using VarsSet = std::set<Ident>;

enum class CpsMode { None, Selective, Full };

std::string_view to_string(CpsMode m);
/// Throws Error on an unknown name.
CpsMode cps_mode_from_string(std::string_view s);

/// True iff `t` is `let x = _ in x`.
bool tail_call(const AnfTerm& t);
inline bool tail_call(const AnfPtr& t) { return tail_call(*t); }

/// Selective CPS transformation of `t` for the labels in `vars`.
TargetPtr selective_cps(const VarsSet& vars, const AnfPtr& t);

/// Every let label and lambda parameter: the `vars` of full CPS.
VarsSet all_labels(const AnfPtr& t);

/// Throws MalformedVars unless, for every application `let x = f a` in `t`,
/// the lambdas and intrinsics that `analysis` says reach `f` are selected
/// exactly when x is.
void check_vars(const AnfPtr& t, const VarsSet& vars, const AnalysisResult& analysis);

/// Selection for a mode: ∅, the analysis suspend set, or all labels.
VarsSet select_vars(CpsMode mode, const AnfPtr& t, const AnalysisConfig& cfg);

/// Bundles analysis and transform, as the CLI does.
struct Compiled {
  AnfPtr anf;
  AnalysisConfig config;
  CpsMode mode = CpsMode::None;
  VarsSet vars;
  TargetPtr target;
};
Compiled compile(const AnfPtr& anf, CpsMode mode, const AnalysisConfig& cfg);

}  // namespace pplc
