#include "fgo/parser.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <set>

namespace fgo {

namespace {

// ============================================================================
// Lexer
// ============================================================================

enum class Tok { Ident, Int, String, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    SourcePos pos;
};

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return ident_start(c) || std::isdigit(c); }

class Lexer {
public:
    Lexer(std::string_view src, const ParseOptions& opts) : src_(src), opts_(opts) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            SourcePos pos{line_, col_};
            if (i_ >= src_.size()) {
                out.push_back({Tok::End, "", pos});
                return out;
            }
            unsigned char c = src_[i_];
            if (ident_start(c)) {
                out.push_back({Tok::Ident, identifier(), pos});
            } else if (std::isdigit(c)) {
                std::size_t start = i_;
                while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_])))
                    advance();
                out.push_back({Tok::Int, std::string(src_.substr(start, i_ - start)), pos});
            } else if (c == '"') {
                out.push_back({Tok::String, string_literal(pos), pos});
            } else {
                out.push_back({Tok::Punct, punct(pos), pos});
            }
        }
    }

private:
    [[noreturn]] void fail(SourcePos pos, const std::string& msg) {
        throw SyntaxError(Diagnostic{opts_.file, pos, "syntax", msg});
    }

    void advance() {
        if (src_[i_] == '\n') {
            ++line_;
            col_ = 1;
        } else if ((static_cast<unsigned char>(src_[i_]) & 0xC0) != 0x80) {
            ++col_;
        }
        ++i_;
    }

    void skip_space() {
        while (i_ < src_.size()) {
            char c = src_[i_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '/') {
                while (i_ < src_.size() && src_[i_] != '\n') advance();
            } else if (c == '/' && i_ + 1 < src_.size() && src_[i_ + 1] == '*') {
                SourcePos start{line_, col_};
                advance();
                advance();
                while (i_ + 1 < src_.size() && !(src_[i_] == '*' && src_[i_ + 1] == '/')) advance();
                if (i_ + 1 >= src_.size()) fail(start, "unterminated comment");
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    // Length of a balanced `<...>` group starting at `at`, or 0.
    std::size_t angle_group(std::size_t at) const {
        int depth = 0;
        for (std::size_t j = at; j < src_.size(); ++j) {
            unsigned char c = src_[j];
            if (c == '<') {
                ++depth;
            } else if (c == '>') {
                if (--depth == 0) return j + 1 - at;
            } else if (!(ident_char(c) || c == ',')) {
                return 0;
            }
        }
        return 0;
    }

    std::string identifier() {
        std::size_t start = i_;
        while (i_ < src_.size() && ident_char(static_cast<unsigned char>(src_[i_]))) advance();
        if (opts_.relaxed_identifiers && i_ < src_.size() && src_[i_] == '<') {
            std::size_t n = angle_group(i_);
            for (std::size_t k = 0; k < n; ++k) advance();
        }
        return std::string(src_.substr(start, i_ - start));
    }

    std::string string_literal(SourcePos pos) {
        advance();
        std::string out;
        while (i_ < src_.size() && src_[i_] != '"') {
            if (src_[i_] == '\n') fail(pos, "newline in string literal");
            if (src_[i_] == '\\') {
                advance();
                if (i_ >= src_.size()) break;
                switch (src_[i_]) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case '\\': out += '\\'; break;
                case '"': out += '"'; break;
                default: fail(pos, fmt::format("unknown escape '\\{}'", src_[i_]));
                }
            } else {
                out += src_[i_];
            }
            advance();
        }
        if (i_ >= src_.size()) fail(pos, "unterminated string literal");
        advance();
        return out;
    }

    std::string punct(SourcePos pos) {
        static const char* two[] = {"==", "&&"};
        for (const char* p : two) {
            if (src_.substr(i_, 2) == p) {
                advance();
                advance();
                return p;
            }
        }
        char c = src_[i_];
        if (std::string_view("(){},;.=+>-").find(c) == std::string_view::npos)
            fail(pos, fmt::format("unexpected character '{}'", c));
        advance();
        return std::string(1, c);
    }

    std::string_view src_;
    const ParseOptions& opts_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// ============================================================================
// Parser
// ============================================================================

class Parser {
public:
    Parser(std::vector<Token> toks, const ParseOptions& opts)
        : toks_(std::move(toks)), opts_(opts) {}

    Program program() {
        Program p;
        p.mode = opts_.mode;
        p.extended = opts_.extended;
        p.file = opts_.file;
        expect_word("package");
        expect_word("main");
        for (;;) {
            skip_semis();
            if (is_word("type")) {
                p.decls.emplace_back(type_decl());
            } else if (is_word("func") && peek(1).text == "(") {
                p.decls.emplace_back(method_decl());
            } else if (is_word("func")) {
                main_func(p);
                break;
            } else {
                fail(cur().pos, fmt::format("expected declaration, found {}", describe(cur())));
            }
        }
        skip_semis();
        expect_end();
        return p;
    }

    Type lone_type() {
        Type t = type();
        expect_end();
        return t;
    }

    Expr lone_expr() {
        Expr e = expr();
        expect_end();
        return e;
    }

private:
    const Token& cur() const { return toks_[i_]; }
    const Token& peek(std::size_t k) const {
        return toks_[std::min(i_ + k, toks_.size() - 1)];
    }
    bool is_punct(const char* p) const { return cur().kind == Tok::Punct && cur().text == p; }
    bool is_word(const char* w) const { return cur().kind == Tok::Ident && cur().text == w; }

    [[noreturn]] void fail(SourcePos pos, const std::string& msg) const {
        throw SyntaxError(Diagnostic{opts_.file, pos, "syntax", msg});
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::Ident: return fmt::format("identifier '{}'", t.text);
        case Tok::Int: return fmt::format("integer {}", t.text);
        case Tok::String: return "string literal";
        case Tok::Punct: return fmt::format("'{}'", t.text);
        }
        return "token";
    }

    Token take() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

    void expect_punct(const char* p) {
        if (!is_punct(p)) fail(cur().pos, fmt::format("expected '{}', found {}", p, describe(cur())));
        ++i_;
    }
    void expect_word(const char* w) {
        if (!is_word(w)) fail(cur().pos, fmt::format("expected '{}', found {}", w, describe(cur())));
        ++i_;
    }
    void expect_end() {
        if (cur().kind != Tok::End)
            fail(cur().pos, fmt::format("unexpected {}", describe(cur())));
    }
    Token ident() {
        if (cur().kind != Tok::Ident || keyword(cur().text))
            fail(cur().pos, fmt::format("expected identifier, found {}", describe(cur())));
        return take();
    }
    static bool keyword(const std::string& s) {
        static const std::set<std::string> kws = {"package", "func", "type", "struct",
                                                  "interface", "return", "var"};
        return kws.count(s) > 0;
    }
    void skip_semis() {
        while (is_punct(";")) ++i_;
    }
    void require_fgg(SourcePos pos) const {
        if (opts_.mode == Mode::FG) fail(pos, "type parameters are not allowed in FG");
    }
    void require_extended(SourcePos pos, const std::string& what) const {
        if (!opts_.extended) fail(pos, fmt::format("{} requires extended mode", what));
    }

    // ---- types --------------------------------------------------------------

    Type type() {
        Token name = ident();
        if (!is_punct("(")) return Type::named(name.text);
        require_fgg(cur().pos);
        ++i_;
        TypeList args = type_list(")");
        expect_punct(")");
        return Type::named(name.text, std::move(args));
    }

    TypeList type_list(const char* close) {
        TypeList out;
        if (is_punct(close)) return out;
        out.push_back(type());
        while (is_punct(",")) {
            ++i_;
            out.push_back(type());
        }
        return out;
    }

    // After `(` and `type`.
    TypeFormals formals() {
        TypeFormals out;
        do {
            if (!out.empty()) ++i_;
            Token p = ident();
            out.push_back({p.text, type()});
        } while (is_punct(","));
        expect_punct(")");
        return out;
    }

    bool at_formals() const {
        return is_punct("(") && peek(1).kind == Tok::Ident && peek(1).text == "type";
    }

    TypeFormals opt_formals() {
        if (!at_formals()) return {};
        require_fgg(cur().pos);
        i_ += 2;
        return formals();
    }

    Signature signature() {
        Signature s;
        s.type_formals = opt_formals();
        expect_punct("(");
        if (!is_punct(")")) {
            do {
                if (!s.params.empty()) ++i_;
                Token x = ident();
                s.params.push_back({x.text, type()});
            } while (is_punct(","));
        }
        expect_punct(")");
        s.result = type();
        return s;
    }

    // ---- declarations -------------------------------------------------------

    TypeDecl type_decl() {
        expect_word("type");
        TypeDecl d;
        Token name = ident();
        d.name = name.text;
        d.pos = name.pos;
        d.formals = opt_formals();
        if (is_word("struct")) {
            ++i_;
            d.kind = TypeDecl::Kind::Struct;
            expect_punct("{");
            for (skip_semis(); !is_punct("}"); skip_semis()) {
                Token f = ident();
                d.fields.push_back({f.text, type()});
            }
            expect_punct("}");
        } else if (is_word("interface")) {
            ++i_;
            d.kind = TypeDecl::Kind::Interface;
            expect_punct("{");
            for (skip_semis(); !is_punct("}"); skip_semis()) {
                if (at_spec()) {
                    Token m = ident();
                    d.specs.push_back({m.text, signature(), m.pos});
                } else {
                    d.embeds.push_back(type());
                }
            }
            expect_punct("}");
        } else {
            fail(cur().pos, fmt::format("expected 'struct' or 'interface', found {}",
                                        describe(cur())));
        }
        return d;
    }

    bool at_spec() const {
        if (cur().kind != Tok::Ident || peek(1).text != "(" || peek(1).kind != Tok::Punct)
            return false;
        const Token& a = peek(2);
        if (a.kind == Tok::Punct) return a.text == ")";
        if (a.kind != Tok::Ident) return false;
        return a.text == "type" || peek(3).kind == Tok::Ident;
    }

    MethodDecl method_decl() {
        expect_word("func");
        MethodDecl d;
        expect_punct("(");
        d.receiver_name = ident().text;
        Token rt = ident();
        d.receiver_type = rt.text;
        if (is_punct("(")) {
            if (!at_formals()) fail(cur().pos, "expected 'type' in receiver type formals");
            d.receiver_formals = opt_formals();
        }
        expect_punct(")");
        Token m = ident();
        d.name = m.text;
        d.pos = m.pos;
        d.sig = signature();
        expect_punct("{");
        skip_semis();
        expect_word("return");
        d.body = expr();
        skip_semis();
        expect_punct("}");
        return d;
    }

    void main_func(Program& p) {
        expect_word("func");
        expect_word("main");
        expect_punct("(");
        expect_punct(")");
        expect_punct("{");
        bool done = false;
        for (skip_semis(); !is_punct("}"); skip_semis()) {
            if (done) fail(cur().pos, "the blank binding must be the last statement of main");
            SourcePos pos = cur().pos;
            if (is_word("_")) {
                ++i_;
                expect_punct("=");
                p.body_pos = pos;
                p.body = expr();
                done = true;
            } else if (is_word("var")) {
                ++i_;
                std::vector<Token> names{ident_or_blank()};
                while (is_punct(",")) {
                    ++i_;
                    names.push_back(ident_or_blank());
                }
                Type t = type();
                expect_punct("=");
                ExprList inits{expr()};
                while (is_punct(",")) {
                    ++i_;
                    inits.push_back(expr());
                }
                if (inits.size() != names.size())
                    fail(pos, fmt::format("{} names but {} values", names.size(), inits.size()));
                for (std::size_t k = 0; k < names.size(); ++k) {
                    if (names[k].text == "_") {
                        if (k + 1 != names.size())
                            fail(names[k].pos, "the blank binding must be the last one");
                        p.body_type = t;
                        p.body_pos = names[k].pos;
                        p.body = inits[k];
                        done = true;
                    } else {
                        p.bindings.push_back({names[k].text, t, inits[k], names[k].pos});
                    }
                }
            } else {
                fail(pos, fmt::format("expected '_ =' or 'var' in main, found {}", describe(cur())));
            }
        }
        if (!done) fail(cur().pos, "main must end with a binding of '_'");
        expect_punct("}");
    }

    Token ident_or_blank() {
        if (is_word("_")) return take();
        return ident();
    }

    // ---- expressions --------------------------------------------------------

    Expr expr() { return and_expr(); }

    Expr and_expr() {
        Expr lhs = cmp_expr();
        while (is_punct("&&")) {
            SourcePos pos = take().pos;
            require_extended(pos, "'&&'");
            lhs = make_binop(BinaryOp::And, lhs, cmp_expr(), pos);
        }
        return lhs;
    }

    Expr cmp_expr() {
        Expr lhs = add_expr();
        while (is_punct("==") || is_punct(">")) {
            Token op = take();
            require_extended(op.pos, fmt::format("'{}'", op.text));
            lhs = make_binop(op.text == "==" ? BinaryOp::Equal : BinaryOp::Greater, lhs,
                             add_expr(), op.pos);
        }
        return lhs;
    }

    Expr add_expr() {
        Expr lhs = postfix();
        while (is_punct("+")) {
            SourcePos pos = take().pos;
            require_extended(pos, "'+'");
            lhs = make_binop(BinaryOp::Add, lhs, postfix(), pos);
        }
        return lhs;
    }

    std::size_t matching_paren(std::size_t open) const {
        int depth = 0;
        for (std::size_t j = open; j < toks_.size(); ++j) {
            if (toks_[j].kind != Tok::Punct) continue;
            if (toks_[j].text == "(") ++depth;
            if (toks_[j].text == ")" && --depth == 0) return j;
        }
        return toks_.size() - 1;
    }

    ExprList expr_list(const char* close) {
        ExprList out;
        if (is_punct(close)) return out;
        out.push_back(expr());
        while (is_punct(",")) {
            ++i_;
            out.push_back(expr());
        }
        return out;
    }

    Expr postfix() {
        Expr e = primary();
        while (is_punct(".")) {
            SourcePos dot = take().pos;
            if (is_punct("(")) {
                ++i_;
                Type t = type();
                expect_punct(")");
                e = make_assert(e, t, dot);
                continue;
            }
            Token name = ident();
            if (!is_punct("(")) {
                e = make_select(e, name.text, name.pos);
                continue;
            }
            TypeList targs;
            std::size_t close = matching_paren(i_);
            if (close + 1 < toks_.size() && toks_[close + 1].kind == Tok::Punct &&
                toks_[close + 1].text == "(") {
                require_fgg(cur().pos);
                ++i_;
                targs = type_list(")");
                expect_punct(")");
            }
            expect_punct("(");
            ExprList args = expr_list(")");
            expect_punct(")");
            e = make_call(e, name.text, std::move(targs), std::move(args), name.pos);
        }
        return e;
    }

    std::int64_t int_value(const Token& t, bool negative) {
        std::int64_t v = 0;
        std::string text = negative ? "-" + t.text : t.text;
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || p != text.data() + text.size())
            fail(t.pos, fmt::format("integer literal {} out of range", text));
        return v;
    }

    Expr primary() {
        const Token& t = cur();
        SourcePos pos = t.pos;
        if (t.kind == Tok::Int) {
            require_extended(pos, "integer literal");
            Token tok = take();
            return make_int(int_value(tok, false), pos);
        }
        if (is_punct("-") && peek(1).kind == Tok::Int) {
            require_extended(pos, "integer literal");
            ++i_;
            Token tok = take();
            return make_int(int_value(tok, true), pos);
        }
        if (t.kind == Tok::String) {
            require_extended(pos, "string literal");
            return make_string(take().text, pos);
        }
        if (is_punct("(")) {
            ++i_;
            Expr e = expr();
            expect_punct(")");
            return e;
        }
        if (opts_.extended && (is_word("true") || is_word("false")))
            return make_bool(take().text == "true", pos);
        if (opts_.extended && is_word("fmt") && peek(1).text == "." &&
            peek(2).text == "Sprintf") {
            i_ += 3;
            expect_punct("(");
            if (cur().kind != Tok::String) fail(cur().pos, "expected format string");
            std::string format = take().text;
            ExprList args;
            while (is_punct(",")) {
                ++i_;
                args.push_back(expr());
            }
            expect_punct(")");
            return make_sprintf(std::move(format), std::move(args), pos);
        }
        Token name = ident();
        if (is_punct("(")) {
            require_fgg(cur().pos);
            ++i_;
            TypeList args = type_list(")");
            expect_punct(")");
            if (!is_punct("{")) fail(cur().pos, "expected '{' after structure type");
            return struct_lit(Type::named(name.text, std::move(args)), pos);
        }
        if (is_punct("{")) return struct_lit(Type::named(name.text), pos);
        return make_var(name.text, pos);
    }

    Expr struct_lit(Type t, SourcePos pos) {
        expect_punct("{");
        ExprList args = expr_list("}");
        expect_punct("}");
        return make_struct_lit(std::move(t), std::move(args), pos);
    }

    std::vector<Token> toks_;
    const ParseOptions& opts_;
    std::size_t i_ = 0;
};

// ============================================================================
// Type-parameter resolution
// ============================================================================

using Scope = std::vector<std::string>;

bool in_scope(const Scope& s, const std::string& n) {
    return std::find(s.begin(), s.end(), n) != s.end();
}

Type resolve(const Type& t, const Scope& s) {
    if (t.is_param()) return t;
    if (t.args().empty()) return in_scope(s, t.name()) ? Type::param(t.name()) : t;
    TypeList args;
    for (const auto& a : t.args()) args.push_back(resolve(a, s));
    return Type::named(t.name(), std::move(args));
}

TypeList resolve(const TypeList& ts, const Scope& s) {
    TypeList out;
    for (const auto& t : ts) out.push_back(resolve(t, s));
    return out;
}

TypeFormals resolve(const TypeFormals& fs, const Scope& s) {
    TypeFormals out = fs;
    for (auto& f : out) f.bound = resolve(f.bound, s);
    return out;
}

Scope extend(Scope s, const TypeFormals& fs) {
    for (const auto& f : fs) s.push_back(f.param);
    return s;
}

Signature resolve(const Signature& sig, const Scope& outer) {
    Scope s = extend(outer, sig.type_formals);
    Signature out = sig;
    out.type_formals = resolve(sig.type_formals, s);
    for (auto& p : out.params) p.type = resolve(p.type, s);
    out.result = resolve(sig.result, s);
    return out;
}

ExprList resolve(const ExprList& es, const Scope& s);

Expr resolve(const Expr& e, const Scope& s) {
    if (s.empty()) return e;
    if (const auto* c = e.get_if<Expr::Call>())
        return make_call(resolve(c->receiver, s), c->method, resolve(c->type_args, s),
                         resolve(c->args, s), e.pos());
    if (const auto* l = e.get_if<Expr::StructLit>())
        return make_struct_lit(resolve(l->type, s), resolve(l->args, s), e.pos());
    if (const auto* f = e.get_if<Expr::Select>())
        return make_select(resolve(f->receiver, s), f->field, e.pos());
    if (const auto* a = e.get_if<Expr::Assert>())
        return make_assert(resolve(a->receiver, s), resolve(a->type, s), e.pos());
    if (const auto* b = e.get_if<Expr::BinOp>())
        return make_binop(b->op, resolve(b->lhs, s), resolve(b->rhs, s), e.pos());
    if (const auto* p = e.get_if<Expr::Sprintf>())
        return make_sprintf(p->format, resolve(p->args, s), e.pos());
    return e;
}

ExprList resolve(const ExprList& es, const Scope& s) {
    ExprList out;
    for (const auto& e : es) out.push_back(resolve(e, s));
    return out;
}

void resolve_program(Program& p) {
    for (auto& d : p.decls) {
        if (auto* t = std::get_if<TypeDecl>(&d)) {
            Scope s = extend({}, t->formals);
            t->formals = resolve(t->formals, s);
            for (auto& f : t->fields) f.type = resolve(f.type, s);
            for (auto& sp : t->specs) sp.sig = resolve(sp.sig, s);
            t->embeds = resolve(t->embeds, s);
        } else {
            auto& m = std::get<MethodDecl>(d);
            Scope s = extend(extend({}, m.receiver_formals), m.sig.type_formals);
            m.receiver_formals = resolve(m.receiver_formals, s);
            m.sig = resolve(m.sig, extend({}, m.receiver_formals));
            m.body = resolve(m.body, s);
        }
    }
}

} // namespace

Program parse(std::string_view source, const ParseOptions& options) {
    Parser parser(Lexer(source, options).run(), options);
    Program p = parser.program();
    resolve_program(p);
    return p;
}

Type parse_type(std::string_view source, const ParseOptions& options,
                const std::vector<std::string>& params) {
    Parser parser(Lexer(source, options).run(), options);
    return resolve(parser.lone_type(), params);
}

Expr parse_expr(std::string_view source, const ParseOptions& options,
                const std::vector<std::string>& params) {
    Parser parser(Lexer(source, options).run(), options);
    return resolve(parser.lone_expr(), params);
}

bool wants_extended(std::string_view source) {
    ParseOptions opts;
    opts.extended = true;
    opts.relaxed_identifiers = true;
    std::vector<Token> toks;
    try {
        toks = Lexer(source, opts).run();
    } catch (const SyntaxError&) {
        return false;
    }
    static const std::set<std::string> words{"int", "bool", "string", "true", "false", "fmt"};
    static const std::set<std::string> ops{"+", ">", "==", "&&", "-"};
    for (const auto& t : toks) {
        if (t.kind == Tok::Int || t.kind == Tok::String) return true;
        if (t.kind == Tok::Ident && words.count(t.text)) return true;
        if (t.kind == Tok::Punct && ops.count(t.text)) return true;
    }
    return false;
}

Program load_source(std::string_view source, const std::string& file, Mode mode) {
    ParseOptions opts;
    opts.mode = mode;
    opts.extended = wants_extended(source);
    opts.relaxed_identifiers = true;
    opts.file = file;
    return expand_embeddings(parse(source, opts));
}

Program load_program(const std::string& path, Mode mode) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error({path, {}, "io", "cannot read file"});
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    return load_source(text, path == "-" ? "<stdin>" : path, mode);
}

// ============================================================================
// Embedding expansion
// ============================================================================

namespace {

[[noreturn]] void embed_error(const Program& p, SourcePos pos, const std::string& msg) {
    throw TypeError(Diagnostic{p.file, pos, "t-interface", msg});
}

// Renames method formals that would capture a parameter free in `eta`'s range.
Signature substitute_outer(const Signature& sig, const Substitution& eta) {
    std::vector<std::string> free;
    for (const auto& [param, t] : eta.entries()) t.collect_params(free);
    Signature s = sig;
    Substitution rename;
    for (auto& f : s.type_formals) {
        if (std::find(free.begin(), free.end(), f.param) == free.end()) continue;
        std::string fresh;
        for (int k = 1;; ++k) {
            fresh = f.param + std::to_string(k);
            bool clash = std::find(free.begin(), free.end(), fresh) != free.end();
            for (const auto& g : s.type_formals) clash = clash || g.param == fresh;
            if (!clash) break;
        }
        rename.bind(f.param, Type::param(fresh));
        f.param = fresh;
    }
    Substitution full = rename.extended(eta);
    for (auto& f : s.type_formals) f.bound = full.apply(f.bound);
    for (auto& v : s.params) v.type = full.apply(v.type);
    s.result = full.apply(s.result);
    return s;
}

class Expander {
public:
    explicit Expander(const Program& p) : p_(p) {}

    const std::vector<MethodSpec>& specs_of(const TypeDecl& d) {
        if (auto it = done_.find(d.name); it != done_.end()) return it->second;
        if (active_.count(d.name)) embed_error(p_, d.pos, fmt::format("cyclic embedding through '{}'", d.name));
        active_.insert(d.name);
        std::vector<MethodSpec> out = d.specs;
        for (const auto& e : d.embeds) {
            const TypeDecl* target = e.is_named() ? p_.find_type(e.name()) : nullptr;
            if (!target || !target->is_interface())
                embed_error(p_, d.pos, fmt::format("embedded type '{}' is not an interface", e.str()));
            if (target->formals.size() != e.args().size())
                embed_error(p_, d.pos, fmt::format("embedded '{}' expects {} type arguments",
                                                   target->name, target->formals.size()));
            Substitution eta(target->formals, e.args());
            for (const auto& s : specs_of(*target)) {
                MethodSpec inst{s.name, substitute_outer(s.sig, eta), s.pos};
                auto same = std::find_if(out.begin(), out.end(),
                                         [&](const MethodSpec& o) { return o.name == s.name; });
                if (same == out.end()) {
                    out.push_back(std::move(inst));
                } else if (!signature_equal(same->sig, inst.sig)) {
                    embed_error(p_, d.pos, fmt::format("method '{}' embedded with conflicting signatures",
                                                       s.name));
                }
            }
        }
        active_.erase(d.name);
        return done_[d.name] = std::move(out);
    }

private:
    const Program& p_;
    std::map<std::string, std::vector<MethodSpec>> done_;
    std::set<std::string> active_;
};

} // namespace

Program expand_embeddings(const Program& p) {
    Program out = p;
    Expander ex(p);
    for (auto& d : out.decls) {
        auto* t = std::get_if<TypeDecl>(&d);
        if (!t || !t->is_interface() || t->embeds.empty()) continue;
        t->specs = ex.specs_of(*t);
        t->embeds.clear();
    }
    return out;
}

} // namespace fgo
