#pragma once

#include "fgo/ast.hpp"

#include <string>

namespace fgo {

enum class Glyphs {
    Ascii,     // `List<int>` as is
    GoCompat,  // U+1438, U+1433 and U+1428 in place of `<`, `>` and `,`
};

struct PrettyOptions {
    Glyphs glyphs = Glyphs::Ascii;
};

std::string pretty(const Type& t, const PrettyOptions& options = {});
std::string pretty(const Expr& e, const PrettyOptions& options = {});
std::string pretty(const Signature& s, const PrettyOptions& options = {});
std::string pretty(const Decl& d, const PrettyOptions& options = {});
std::string pretty(const Program& p, const PrettyOptions& options = {});

/// Rewrites `<`, `>` and `,` inside an identifier according to `glyphs`.
std::string render_identifier(const std::string& name, Glyphs glyphs);

} // namespace fgo
