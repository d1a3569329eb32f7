#include "fgo/ast.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace fgo {

// ============================================================================
// Diagnostics
// ============================================================================

std::string Diagnostic::str() const {
    return fmt::format("{}:{}:{}: {}: {}", file, pos.line, pos.col, rule, message);
}

std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
    std::string out;
    for (const auto& d : diags) {
        out += d.str();
        out += '\n';
    }
    return out;
}

Error::Error(Diagnostic d) : std::runtime_error(d.str()), diag_(std::move(d)) {}

void type_error(SourcePos pos, std::string rule, std::string message) {
    throw TypeError(Diagnostic{"", pos, std::move(rule), std::move(message)});
}

// ============================================================================
// Signatures
// ============================================================================

TypeList Signature::param_types() const {
    TypeList out;
    out.reserve(params.size());
    for (const auto& p : params) out.push_back(p.type);
    return out;
}

namespace {

Signature rename_formals(const Signature& s) {
    if (s.type_formals.empty()) return s;
    Substitution fresh;
    for (std::size_t i = 0; i < s.type_formals.size(); ++i)
        fresh.bind(s.type_formals[i].param, Type::param("$" + std::to_string(i)));
    Signature out;
    out.type_formals.reserve(s.type_formals.size());
    for (std::size_t i = 0; i < s.type_formals.size(); ++i)
        out.type_formals.push_back({"$" + std::to_string(i), fresh.apply(s.type_formals[i].bound)});
    for (const auto& p : s.params) out.params.push_back({p.name, fresh.apply(p.type)});
    out.result = fresh.apply(s.result);
    return out;
}

} // namespace

Signature Signature::canonical() const {
    Signature out = rename_formals(*this);
    for (auto& p : out.params) p.name.clear();
    return out;
}

Signature Signature::instantiate(const Substitution& eta) const {
    Signature out = rename_formals(*this);
    if (eta.empty()) return out;
    for (auto& f : out.type_formals) f.bound = eta.apply(f.bound);
    for (auto& p : out.params) p.type = eta.apply(p.type);
    out.result = eta.apply(out.result);
    return out;
}

std::string Signature::str() const {
    std::string out;
    if (!type_formals.empty()) {
        out += "(type ";
        for (std::size_t i = 0; i < type_formals.size(); ++i) {
            if (i) out += ", ";
            out += type_formals[i].param + " " + type_formals[i].bound.str();
        }
        out += ")";
    }
    out += "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        if (!params[i].name.empty()) out += params[i].name + " ";
        out += params[i].type.str();
    }
    out += ") " + result.str();
    return out;
}

bool signature_equal(const Signature& a, const Signature& b) {
    if (a.type_formals.size() != b.type_formals.size() || a.params.size() != b.params.size())
        return false;
    Signature ca = a.canonical();
    Signature cb = b.canonical();
    if (!(ca.result == cb.result)) return false;
    for (std::size_t i = 0; i < ca.params.size(); ++i)
        if (!(ca.params[i].type == cb.params[i].type)) return false;
    for (std::size_t i = 0; i < ca.type_formals.size(); ++i)
        if (!(ca.type_formals[i].bound == cb.type_formals[i].bound)) return false;
    return true;
}

const char* binary_op_text(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Greater: return ">";
    case BinaryOp::Equal: return "==";
    case BinaryOp::And: return "&&";
    }
    return "?";
}

// ============================================================================
// Expressions
// ============================================================================

Expr make_var(std::string name, SourcePos pos) { return Expr(Expr::Var{std::move(name)}, pos); }
Expr make_call(Expr receiver, std::string method, TypeList type_args, ExprList args,
               SourcePos pos) {
    return Expr(Expr::Call{std::move(receiver), std::move(method), std::move(type_args),
                           std::move(args)},
                pos);
}
Expr make_struct_lit(Type type, ExprList args, SourcePos pos) {
    return Expr(Expr::StructLit{std::move(type), std::move(args)}, pos);
}
Expr make_select(Expr receiver, std::string field, SourcePos pos) {
    return Expr(Expr::Select{std::move(receiver), std::move(field)}, pos);
}
Expr make_assert(Expr receiver, Type type, SourcePos pos) {
    return Expr(Expr::Assert{std::move(receiver), std::move(type)}, pos);
}
Expr make_int(std::int64_t value, SourcePos pos) { return Expr(Expr::IntLit{value}, pos); }
Expr make_bool(bool value, SourcePos pos) { return Expr(Expr::BoolLit{value}, pos); }
Expr make_string(std::string value, SourcePos pos) {
    return Expr(Expr::StrLit{std::move(value)}, pos);
}
Expr make_binop(BinaryOp op, Expr lhs, Expr rhs, SourcePos pos) {
    return Expr(Expr::BinOp{op, std::move(lhs), std::move(rhs)}, pos);
}
Expr make_sprintf(std::string format, ExprList args, SourcePos pos) {
    return Expr(Expr::Sprintf{std::move(format), std::move(args)}, pos);
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool lists_equal(const ExprList& a, const ExprList& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

} // namespace

bool operator==(const Expr& a, const Expr& b) {
    if (a.id() == b.id()) return true;
    if (!a.valid() || !b.valid()) return false;
    if (a.variant().index() != b.variant().index()) return false;
    return std::visit(
        overloaded{
            [&](const Expr::Var& x) { return x.name == b.get_if<Expr::Var>()->name; },
            [&](const Expr::Call& x) {
                const auto& y = *b.get_if<Expr::Call>();
                return x.method == y.method && x.type_args == y.type_args &&
                       x.receiver == y.receiver && lists_equal(x.args, y.args);
            },
            [&](const Expr::StructLit& x) {
                const auto& y = *b.get_if<Expr::StructLit>();
                return x.type == y.type && lists_equal(x.args, y.args);
            },
            [&](const Expr::Select& x) {
                const auto& y = *b.get_if<Expr::Select>();
                return x.field == y.field && x.receiver == y.receiver;
            },
            [&](const Expr::Assert& x) {
                const auto& y = *b.get_if<Expr::Assert>();
                return x.type == y.type && x.receiver == y.receiver;
            },
            [&](const Expr::IntLit& x) { return x.value == b.get_if<Expr::IntLit>()->value; },
            [&](const Expr::BoolLit& x) { return x.value == b.get_if<Expr::BoolLit>()->value; },
            [&](const Expr::StrLit& x) { return x.value == b.get_if<Expr::StrLit>()->value; },
            [&](const Expr::BinOp& x) {
                const auto& y = *b.get_if<Expr::BinOp>();
                return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
            },
            [&](const Expr::Sprintf& x) {
                const auto& y = *b.get_if<Expr::Sprintf>();
                return x.format == y.format && lists_equal(x.args, y.args);
            },
        },
        a.variant());
}

bool is_value(const Expr& e) {
    if (const auto* s = e.get_if<Expr::StructLit>())
        return std::all_of(s->args.begin(), s->args.end(), is_value);
    return e.is<Expr::IntLit>() || e.is<Expr::BoolLit>() || e.is<Expr::StrLit>();
}

Type value_type(const Expr& v) {
    if (const auto* s = v.get_if<Expr::StructLit>()) return s->type;
    if (v.is<Expr::IntLit>()) return Type::named("int");
    if (v.is<Expr::BoolLit>()) return Type::named("bool");
    if (v.is<Expr::StrLit>()) return Type::named("string");
    return {};
}

namespace {

template <class F>
ExprList map_list(const ExprList& xs, F&& f) {
    ExprList out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(f(x));
    return out;
}

} // namespace

Expr subst_vars(const Expr& e, const std::vector<std::pair<std::string, Expr>>& bindings) {
    auto rec = [&](const Expr& x) { return subst_vars(x, bindings); };
    return std::visit(
        overloaded{
            [&](const Expr::Var& x) -> Expr {
                for (const auto& [name, value] : bindings)
                    if (name == x.name) return value;
                return e;
            },
            [&](const Expr::Call& x) -> Expr {
                return make_call(rec(x.receiver), x.method, x.type_args, map_list(x.args, rec),
                                 e.pos());
            },
            [&](const Expr::StructLit& x) -> Expr {
                if (is_value(e)) return e;
                return make_struct_lit(x.type, map_list(x.args, rec), e.pos());
            },
            [&](const Expr::Select& x) -> Expr {
                return make_select(rec(x.receiver), x.field, e.pos());
            },
            [&](const Expr::Assert& x) -> Expr {
                return make_assert(rec(x.receiver), x.type, e.pos());
            },
            [&](const Expr::BinOp& x) -> Expr {
                return make_binop(x.op, rec(x.lhs), rec(x.rhs), e.pos());
            },
            [&](const Expr::Sprintf& x) -> Expr {
                return make_sprintf(x.format, map_list(x.args, rec), e.pos());
            },
            [&](const auto&) -> Expr { return e; },
        },
        e.variant());
}

Expr subst_types(const Expr& e, const Substitution& eta) {
    if (eta.empty()) return e;
    auto rec = [&](const Expr& x) { return subst_types(x, eta); };
    return std::visit(
        overloaded{
            [&](const Expr::Call& x) -> Expr {
                return make_call(rec(x.receiver), x.method, eta.apply(x.type_args),
                                 map_list(x.args, rec), e.pos());
            },
            [&](const Expr::StructLit& x) -> Expr {
                return make_struct_lit(eta.apply(x.type), map_list(x.args, rec), e.pos());
            },
            [&](const Expr::Select& x) -> Expr {
                return make_select(rec(x.receiver), x.field, e.pos());
            },
            [&](const Expr::Assert& x) -> Expr {
                return make_assert(rec(x.receiver), eta.apply(x.type), e.pos());
            },
            [&](const Expr::BinOp& x) -> Expr {
                return make_binop(x.op, rec(x.lhs), rec(x.rhs), e.pos());
            },
            [&](const Expr::Sprintf& x) -> Expr {
                return make_sprintf(x.format, map_list(x.args, rec), e.pos());
            },
            [&](const auto&) -> Expr { return e; },
        },
        e.variant());
}

bool expr_mentions_var(const Expr& e, const std::string& name) {
    auto any = [&](const ExprList& xs) {
        return std::any_of(xs.begin(), xs.end(),
                           [&](const Expr& x) { return expr_mentions_var(x, name); });
    };
    return std::visit(
        overloaded{
            [&](const Expr::Var& x) { return x.name == name; },
            [&](const Expr::Call& x) {
                return expr_mentions_var(x.receiver, name) || any(x.args);
            },
            [&](const Expr::StructLit& x) { return any(x.args); },
            [&](const Expr::Select& x) { return expr_mentions_var(x.receiver, name); },
            [&](const Expr::Assert& x) { return expr_mentions_var(x.receiver, name); },
            [&](const Expr::BinOp& x) {
                return expr_mentions_var(x.lhs, name) || expr_mentions_var(x.rhs, name);
            },
            [&](const Expr::Sprintf& x) { return any(x.args); },
            [&](const auto&) { return false; },
        },
        e.variant());
}

std::size_t symbol_count(const Expr& e) {
    auto sum = [](const ExprList& xs) {
        std::size_t n = 0;
        for (const auto& x : xs) n += symbol_count(x);
        return n;
    };
    return std::visit(
        overloaded{
            [&](const Expr::Call& x) {
                std::size_t n = 1 + symbol_count(x.receiver) + sum(x.args);
                for (const auto& t : x.type_args) n += t.symbol_count();
                return n;
            },
            [&](const Expr::StructLit& x) { return x.type.symbol_count() + sum(x.args); },
            [&](const Expr::Select& x) { return symbol_count(x.receiver); },
            [&](const Expr::Assert& x) { return symbol_count(x.receiver) + x.type.symbol_count(); },
            [&](const Expr::BinOp& x) { return symbol_count(x.lhs) + symbol_count(x.rhs); },
            [&](const Expr::Sprintf& x) { return sum(x.args); },
            [&](const auto&) -> std::size_t { return 0; },
        },
        e.variant());
}

// ============================================================================
// Declarations and programs
// ============================================================================

Type MethodDecl::receiver() const {
    return Type::named(receiver_type, formal_params(receiver_formals));
}

const TypeDecl* Program::find_type(const std::string& name) const {
    for (const auto& d : decls)
        if (const auto* t = std::get_if<TypeDecl>(&d); t && t->name == name) return t;
    return nullptr;
}

const MethodDecl* Program::find_method(const std::string& receiver_type,
                                       const std::string& name) const {
    for (const auto& d : decls)
        if (const auto* m = std::get_if<MethodDecl>(&d);
            m && m->receiver_type == receiver_type && m->name == name)
            return m;
    return nullptr;
}

std::vector<const TypeDecl*> Program::type_decls() const {
    std::vector<const TypeDecl*> out;
    for (const auto& d : decls)
        if (const auto* t = std::get_if<TypeDecl>(&d)) out.push_back(t);
    return out;
}

std::vector<const MethodDecl*> Program::method_decls() const {
    std::vector<const MethodDecl*> out;
    for (const auto& d : decls)
        if (const auto* m = std::get_if<MethodDecl>(&d)) out.push_back(m);
    return out;
}

Expr Program::main_body() const {
    // Later bindings may mention earlier ones, so substitute innermost first.
    std::vector<std::pair<std::string, Expr>> resolved;
    for (const auto& b : bindings) {
        Expr init = resolved.empty() ? b.init : subst_vars(b.init, resolved);
        resolved.emplace_back(b.name, init);
    }
    return resolved.empty() ? body : subst_vars(body, resolved);
}

bool operator==(const ValueParam& a, const ValueParam& b) {
    return a.name == b.name && a.type == b.type;
}
bool operator==(const Signature& a, const Signature& b) {
    return a.type_formals == b.type_formals && a.params == b.params && a.result == b.result;
}
bool operator==(const MethodSpec& a, const MethodSpec& b) {
    return a.name == b.name && a.sig == b.sig;
}
bool operator==(const Field& a, const Field& b) { return a.name == b.name && a.type == b.type; }
bool operator==(const TypeDecl& a, const TypeDecl& b) {
    return a.name == b.name && a.formals == b.formals && a.kind == b.kind &&
           a.fields == b.fields && a.specs == b.specs && a.embeds == b.embeds;
}
bool operator==(const MethodDecl& a, const MethodDecl& b) {
    return a.receiver_name == b.receiver_name && a.receiver_type == b.receiver_type &&
           a.receiver_formals == b.receiver_formals && a.name == b.name && a.sig == b.sig &&
           a.body == b.body;
}
bool operator==(const MainBinding& a, const MainBinding& b) {
    return a.name == b.name && a.type == b.type && a.init == b.init;
}
bool operator==(const Program& a, const Program& b) {
    return a.mode == b.mode && a.extended == b.extended && a.decls == b.decls &&
           a.bindings == b.bindings && a.body_type == b.body_type && a.body == b.body;
}

std::size_t symbol_count(const Program& p) {
    auto formals = [](const TypeFormals& fs) {
        std::size_t n = 0;
        for (const auto& f : fs) n += f.bound.symbol_count();
        return n;
    };
    auto sig = [&](const Signature& s) {
        std::size_t n = formals(s.type_formals) + s.result.symbol_count();
        for (const auto& v : s.params) n += v.type.symbol_count();
        return n;
    };
    std::size_t n = 0;
    for (const auto& d : p.decls) {
        if (const auto* t = std::get_if<TypeDecl>(&d)) {
            n += 1 + formals(t->formals);
            for (const auto& f : t->fields) n += f.type.symbol_count();
            for (const auto& s : t->specs) n += 1 + sig(s.sig);
            for (const auto& e : t->embeds) n += e.symbol_count();
        } else {
            const auto& m = std::get<MethodDecl>(d);
            n += 1 + formals(m.receiver_formals) + 1 + sig(m.sig) + symbol_count(m.body);
        }
    }
    for (const auto& b : p.bindings) {
        n += symbol_count(b.init);
        if (b.type) n += b.type->symbol_count();
    }
    if (p.body_type) n += p.body_type->symbol_count();
    return n + symbol_count(p.body);
}

bool is_primitive_type_name(const std::string& name) {
    return name == "int" || name == "bool" || name == "string";
}

} // namespace fgo
