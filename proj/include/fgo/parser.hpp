#pragma once

#include "fgo/ast.hpp"

#include <string>
#include <string_view>

namespace fgo {

struct ParseOptions {
    Mode mode = Mode::FGG;
    /// Enables literals, `+ > == &&` and `fmt.Sprintf`.
    bool extended = false;
    /// Accepts a balanced `<...>` group (and any non-ASCII byte) as part of
    /// an identifier. Monomorphised output needs this to re-parse.
    bool relaxed_identifiers = false;
    std::string file = "<input>";
};

/// Parses a whole program. Interface embeddings are kept as written.
Program parse(std::string_view source, const ParseOptions& options = {});

/// Parses a single type. Names listed in `params` become type parameters.
Type parse_type(std::string_view source, const ParseOptions& options = {},
                const std::vector<std::string>& params = {});

/// Parses a single expression, resolving `params` as in `parse_type`.
Expr parse_expr(std::string_view source, const ParseOptions& options = {},
                const std::vector<std::string>& params = {});

/// True when the source uses a construct of the extended language: a
/// primitive type name, a literal, an operator or `fmt.Sprintf`.
bool wants_extended(std::string_view source);

/// Reads a file (`-` for standard input) and parses it in `mode`, choosing
/// the extended language with `wants_extended`. Embeddings are expanded and
/// relaxed identifiers are accepted.
Program load_program(const std::string& path, Mode mode);

/// As `load_program`, from text already in memory.
Program load_source(std::string_view source, const std::string& file, Mode mode);

/// Replaces every interface embedding by the specifications it contributes.
Program expand_embeddings(const Program& p);

} // namespace fgo
