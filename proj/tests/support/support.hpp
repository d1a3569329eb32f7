#pragma once

#include "fgo/ast.hpp"
#include "fgo/fgg_typing.hpp"
#include "fgo/instances.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fgo::testing {

/// Absolute path of a file under tests/.
std::string test_path(const std::string& relative);

/// Files with extension `ext` in tests/`dir`, sorted by name.
std::vector<std::string> files_in(const std::string& dir, const std::string& ext);

Program load(const std::string& relative);

/// Closed, well-formed types built from the program's type names, with at
/// most `max_size` symbols.
std::vector<Type> closed_types(const FggChecker& c, std::size_t max_size);

/// A human-readable description of the first violation, if any.
using Violation = std::optional<std::string>;

/// Reflexivity and transitivity of `implements` over `types`.
Violation check_implements_order(const FggChecker& c, const std::vector<Type>& types);

/// The same laws for the FG relation over every declared FG type name.
Violation check_fg_implements_order(const Program& fg);

/// Distinct type instances of `omega` get distinct FG names, and the
/// mangler inverts them.
Violation check_mangler_injective(const InstanceSet& omega);

/// Two specifications get the same dummy number exactly when their
/// signatures are equal; checked over all signatures reachable in `omega`.
Violation check_dummy_hash(const FggChecker& c, const InstanceSet& omega);

/// `τ <: σ` in the source exactly when `τ† <: σ†` in the translation, for
/// all type instances of `omega`.
Violation check_subtyping_preserved(const FggChecker& c, const InstanceSet& omega, const Program& fg);

/// All of the above for one FGG program; the program must be well typed and
/// monomorphisable.
Violation check_properties(const Program& p, std::size_t type_size = 2);

/// Line-based difference between two texts, empty when equal.
std::string diff_lines(const std::string& expected, const std::string& actual);

} // namespace fgo::testing
