#pragma once

#include "carnot/stratified_algebra.hpp"

#include <string>

namespace carnot {

/// Loads a group spec from the TOML format:
///
///   name = "heisenberg"
///   strata = [2, 1]
///   [[bracket]]
///   i = 1
///   j = 2
///   k = 3
///   c = "1"        # decimal or "p/q" rational string, numbers also accepted
///
/// Only (i < j) entries are kept; a redundant (j, i) entry must negate its
/// partner exactly or build_algebra raises AntisymmetryViolation.
AlgebraSpec load_spec_toml(const std::string& path);
AlgebraSpec parse_spec_toml(const std::string& text);

std::string spec_to_toml(const AlgebraSpec& spec);

} // namespace carnot
