#include "fgo/fgg_typing.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <functional>
#include <set>

namespace fgo {

namespace {

bool distinct(const std::vector<std::string>& names, std::string* dup) {
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (!seen.insert(n).second) {
            if (dup) *dup = n;
            return false;
        }
    }
    return true;
}

const Type* lookup_bound(const TypeEnv& delta, const std::string& name) {
    for (const auto& f : delta)
        if (f.param == name) return &f.bound;
    return nullptr;
}

const std::vector<const MethodDecl*> no_methods;

} // namespace

std::optional<std::string> sprintf_verbs(const std::string& format) {
    std::string verbs;
    for (std::size_t i = 0; i < format.size(); ++i) {
        if (format[i] != '%') continue;
        if (i + 1 >= format.size()) return std::nullopt;
        char v = format[++i];
        if (v == '%') continue;
        if (v != 'd' && v != 's') return std::nullopt;
        verbs += v;
    }
    return verbs;
}

FggChecker::FggChecker(const Program& p) : p_(p) {
    for (const auto& d : p.decls) {
        if (const auto* t = std::get_if<TypeDecl>(&d)) {
            types_.emplace(t->name, t);
        } else {
            const auto& m = std::get<MethodDecl>(d);
            methods_[m.receiver_type].push_back(&m);
        }
    }
}

const TypeDecl* FggChecker::decl(const std::string& name) const {
    auto it = types_.find(name);
    return it == types_.end() ? nullptr : it->second;
}

const std::vector<const MethodDecl*>& FggChecker::methods_of(const std::string& s) const {
    auto it = methods_.find(s);
    return it == methods_.end() ? no_methods : it->second;
}

bool FggChecker::is_struct_type(const Type& t) const {
    if (!t.is_named()) return false;
    if (const TypeDecl* d = decl(t.name())) return d->is_struct();
    return p_.extended && t.args().empty() && is_primitive_type_name(t.name());
}

bool FggChecker::is_interface_type(const Type& t) const {
    if (!t.is_named()) return false;
    const TypeDecl* d = decl(t.name());
    return d && d->is_interface();
}

// ============================================================================
// Auxiliary functions
// ============================================================================

std::optional<Substitution> FggChecker::try_subst_checked(const TypeEnv& delta,
                                                          const TypeFormals& formals,
                                                          const TypeList& actuals) const {
    if (formals.size() != actuals.size()) return std::nullopt;
    Substitution eta(formals, actuals);
    for (std::size_t i = 0; i < formals.size(); ++i)
        if (!implements(delta, actuals[i], eta.apply(formals[i].bound))) return std::nullopt;
    return eta;
}

Substitution FggChecker::subst_checked(const TypeEnv& delta, const TypeFormals& formals,
                                       const TypeList& actuals, SourcePos pos) const {
    if (formals.size() != actuals.size())
        type_error(pos, "t-named", fmt::format("expected {} type arguments, got {}",
                                               formals.size(), actuals.size()));
    Substitution eta(formals, actuals);
    for (std::size_t i = 0; i < formals.size(); ++i) {
        Type bound = eta.apply(formals[i].bound);
        if (!implements(delta, actuals[i], bound))
            type_error(pos, "t-named",
                       fmt::format("type argument {} for parameter {} does not implement {}",
                                   actuals[i].str(), formals[i].param, bound.str()));
    }
    return eta;
}

Type FggChecker::bounds(const TypeEnv& delta, const Type& t) const {
    if (!t.is_param()) return t;
    if (const Type* b = lookup_bound(delta, t.name())) return *b;
    type_error({}, "t-param", fmt::format("unbound type parameter {}", t.name()));
}

std::vector<Field> FggChecker::fields(const Type& ts) const {
    if (!is_struct_type(ts))
        type_error({}, "t-field", fmt::format("{} is not a structure type", ts.str()));
    const TypeDecl* d = decl(ts.name());
    if (!d) return {};
    if (d->formals.size() != ts.args().size())
        type_error({}, "t-named", fmt::format("wrong number of type arguments in {}", ts.str()));
    if (d->formals.empty()) return d->fields;
    Substitution eta(d->formals, ts.args());
    std::vector<Field> out = d->fields;
    for (auto& f : out) f.type = eta.apply(f.type);
    return out;
}

MethodSet FggChecker::methods(const TypeEnv& delta, const Type& t) const {
    if (t.is_param()) {
        const Type* b = lookup_bound(delta, t.name());
        return b ? methods(delta, *b) : MethodSet{};
    }
    if (t.closed()) {
        if (auto it = closed_methods_.find(t); it != closed_methods_.end()) return it->second;
    }
    MethodSet out;
    const TypeDecl* d = decl(t.name());
    if (d && d->is_interface()) {
        if (d->formals.size() == t.args().size()) {
            Substitution eta(d->formals, t.args());
            for (const auto& s : d->specs) out.emplace(s.name, s.sig.instantiate(eta));
        }
    } else if (d) {
        for (const MethodDecl* m : methods_of(t.name())) {
            if (auto eta = try_subst_checked(delta, m->receiver_formals, t.args()))
                out.emplace(m->name, m->sig.instantiate(*eta));
        }
    }
    if (t.closed()) closed_methods_.emplace(t, out);
    return out;
}

bool FggChecker::implements(const TypeEnv& delta, const Type& t, const Type& u) const {
    if (t == u) return true;
    if (!is_interface_type(u)) return false;
    MethodSet need = methods(delta, u);
    if (need.empty()) return true;
    MethodSet have = methods(delta, t);
    for (const auto& [name, sig] : need) {
        auto it = have.find(name);
        if (it == have.end() || !signature_equal(it->second, sig)) return false;
    }
    return true;
}

bool FggChecker::formals_implement(const TypeFormals& recv, const TypeFormals& decl) const {
    if (recv.size() != decl.size()) return false;
    Substitution rename(decl, formal_params(recv));
    for (std::size_t i = 0; i < recv.size(); ++i)
        if (!implements({}, recv[i].bound, rename.apply(decl[i].bound))) return false;
    return true;
}

// ============================================================================
// Well-formedness
// ============================================================================

void FggChecker::type_ok(const TypeEnv& delta, const Type& t, SourcePos pos) const {
    if (t.is_param()) {
        if (!lookup_bound(delta, t.name()))
            type_error(pos, "t-param", fmt::format("unbound type parameter {}", t.name()));
        return;
    }
    const TypeDecl* d = decl(t.name());
    if (!d) {
        if (p_.extended && is_primitive_type_name(t.name()) && t.args().empty()) return;
        type_error(pos, "t-named", fmt::format("undeclared type {}", t.name()));
    }
    for (const auto& a : t.args()) type_ok(delta, a, pos);
    subst_checked(delta, d->formals, t.args(), pos);
}

bool FggChecker::is_type_ok(const TypeEnv& delta, const Type& t) const {
    try {
        type_ok(delta, t);
        return true;
    } catch (const TypeError&) {
        return false;
    }
}

TypeEnv FggChecker::type_formals_ok(const TypeFormals& phi, const TypeFormals& psi,
                                    SourcePos pos) const {
    TypeEnv delta = phi;
    delta.insert(delta.end(), psi.begin(), psi.end());
    std::vector<std::string> names;
    for (const auto& f : delta) names.push_back(f.param);
    std::string dup;
    if (!distinct(names, &dup))
        type_error(pos, "t-formal", fmt::format("type parameter {} declared twice", dup));
    // The outer formals are checked on their own first (∅ ⊢ Φ ok).
    for (const auto& f : phi) {
        if (!is_interface_type(f.bound))
            type_error(pos, "t-formal", fmt::format("bound {} of {} is not an interface",
                                                    f.bound.str(), f.param));
        type_ok(phi, f.bound, pos);
    }
    for (const auto& f : psi) {
        if (!is_interface_type(f.bound))
            type_error(pos, "t-formal", fmt::format("bound {} of {} is not an interface",
                                                    f.bound.str(), f.param));
        type_ok(delta, f.bound, pos);
    }
    return delta;
}

// ============================================================================
// Expressions
// ============================================================================

Type FggChecker::type_binop(const TypeEnv& delta, const ValueEnv& gamma, const Expr& e,
                            bool allow_stupid) const {
    const auto& b = *e.get_if<Expr::BinOp>();
    Type l = type_expr(delta, gamma, b.lhs, allow_stupid);
    Type r = type_expr(delta, gamma, b.rhs, allow_stupid);
    Type operand = Type::named(b.op == BinaryOp::And ? "bool" : "int");
    if (!(l == operand) || !(r == operand))
        type_error(e.pos(), "t-binop",
                   fmt::format("operator {} expects {} operands, got {} and {}",
                               binary_op_text(b.op), operand.str(), l.str(), r.str()));
    return Type::named(b.op == BinaryOp::Add ? "int" : "bool");
}

Type FggChecker::type_expr(const TypeEnv& delta, const ValueEnv& gamma, const Expr& e,
                           bool allow_stupid) const {
    if (const auto* v = e.get_if<Expr::Var>()) {
        for (auto it = gamma.rbegin(); it != gamma.rend(); ++it)
            if (it->first == v->name) return it->second;
        type_error(e.pos(), "t-var", fmt::format("unbound variable {}", v->name));
    }
    if (const auto* c = e.get_if<Expr::Call>()) {
        Type recv = type_expr(delta, gamma, c->receiver, allow_stupid);
        MethodSet ms = methods(delta, recv);
        auto it = ms.find(c->method);
        if (it == ms.end())
            type_error(e.pos(), "t-call",
                       fmt::format("type {} has no method {}", recv.str(), c->method));
        const Signature& sig = it->second;
        for (const auto& t : c->type_args) type_ok(delta, t, e.pos());
        if (sig.type_formals.size() != c->type_args.size())
            type_error(e.pos(), "t-call",
                       fmt::format("method {} expects {} type arguments, got {}", c->method,
                                   sig.type_formals.size(), c->type_args.size()));
        Substitution eta;
        try {
            eta = subst_checked(delta, sig.type_formals, c->type_args, e.pos());
        } catch (const TypeError& err) {
            type_error(e.pos(), "t-call", err.diagnostic().message);
        }
        if (sig.params.size() != c->args.size())
            type_error(e.pos(), "t-call",
                       fmt::format("method {} expects {} arguments, got {}", c->method,
                                   sig.params.size(), c->args.size()));
        for (std::size_t i = 0; i < c->args.size(); ++i) {
            Type actual = type_expr(delta, gamma, c->args[i], allow_stupid);
            Type formal = eta.apply(sig.params[i].type);
            if (!implements(delta, actual, formal))
                type_error(c->args[i].pos(), "t-call",
                           fmt::format("argument {} of {}: {} does not implement {}", i + 1,
                                       c->method, actual.str(), formal.str()));
        }
        return eta.apply(sig.result);
    }
    if (const auto* s = e.get_if<Expr::StructLit>()) {
        type_ok(delta, s->type, e.pos());
        if (!is_struct_type(s->type))
            type_error(e.pos(), "t-literal", fmt::format("{} is not a structure type", s->type.str()));
        if (is_primitive_type_name(s->type.name()) && !decl(s->type.name()))
            type_error(e.pos(), "t-literal",
                       fmt::format("primitive {} has no composite literal", s->type.str()));
        std::vector<Field> fs = fields(s->type);
        if (fs.size() != s->args.size())
            type_error(e.pos(), "t-literal", fmt::format("{} has {} fields, got {} values",
                                                         s->type.str(), fs.size(), s->args.size()));
        for (std::size_t i = 0; i < fs.size(); ++i) {
            Type actual = type_expr(delta, gamma, s->args[i], allow_stupid);
            if (!implements(delta, actual, fs[i].type))
                type_error(s->args[i].pos(), "t-literal",
                           fmt::format("field {} of {}: {} does not implement {}", fs[i].name,
                                       s->type.str(), actual.str(), fs[i].type.str()));
        }
        return s->type;
    }
    if (const auto* f = e.get_if<Expr::Select>()) {
        Type recv = type_expr(delta, gamma, f->receiver, allow_stupid);
        if (!is_struct_type(recv))
            type_error(e.pos(), "t-field",
                       fmt::format("selecting {} from non-structure type {}", f->field, recv.str()));
        for (const auto& fd : fields(recv))
            if (fd.name == f->field) return fd.type;
        type_error(e.pos(), "t-field", fmt::format("type {} has no field {}", recv.str(), f->field));
    }
    if (const auto* a = e.get_if<Expr::Assert>()) {
        type_ok(delta, a->type, e.pos());
        Type from = type_expr(delta, gamma, a->receiver, allow_stupid);
        if (is_struct_type(from)) {
            if (!allow_stupid)
                type_error(e.pos(), "t-stupid",
                           fmt::format("assertion on non-interface type {}", from.str()));
            return a->type;
        }
        if (is_struct_type(a->type) && !implements(delta, a->type, bounds(delta, from)))
            type_error(e.pos(), "t-assert",
                       fmt::format("impossible assertion: {} does not implement {}",
                                   a->type.str(), bounds(delta, from).str()));
        return a->type;
    }
    if (e.is<Expr::IntLit>()) return Type::named("int");
    if (e.is<Expr::BoolLit>()) return Type::named("bool");
    if (e.is<Expr::StrLit>()) return Type::named("string");
    if (e.is<Expr::BinOp>()) return type_binop(delta, gamma, e, allow_stupid);
    if (const auto* s = e.get_if<Expr::Sprintf>()) {
        auto verbs = sprintf_verbs(s->format);
        if (!verbs) type_error(e.pos(), "t-sprintf", "unsupported format directive");
        if (verbs->size() != s->args.size())
            type_error(e.pos(), "t-sprintf", fmt::format("format expects {} arguments, got {}",
                                                         verbs->size(), s->args.size()));
        for (std::size_t i = 0; i < s->args.size(); ++i) {
            Type t = type_expr(delta, gamma, s->args[i], allow_stupid);
            Type want = Type::named((*verbs)[i] == 'd' ? "int" : "string");
            if (!(t == want))
                type_error(s->args[i].pos(), "t-sprintf",
                           fmt::format("%{} expects {}, got {}", (*verbs)[i], want.str(), t.str()));
        }
        return Type::named("string");
    }
    type_error(e.pos(), "t-expr", "malformed expression");
}

MethodBody FggChecker::body(const Type& ts, const std::string& method, const TypeList& psi) const {
    for (const MethodDecl* m : methods_of(ts.name())) {
        if (m->name != method) continue;
        if (m->receiver_formals.size() != ts.args().size() ||
            m->sig.type_formals.size() != psi.size())
            type_error(m->pos, "body", fmt::format("arity mismatch instantiating {}.{}",
                                                   ts.str(), method));
        Substitution theta(m->receiver_formals, ts.args());
        for (std::size_t i = 0; i < psi.size(); ++i) theta.bind(m->sig.type_formals[i].param, psi[i]);
        MethodBody b{m->receiver_name, ts, {}, subst_types(m->body, theta)};
        for (const auto& p : m->sig.params) b.params.push_back({p.name, theta.apply(p.type)});
        return b;
    }
    type_error({}, "body", fmt::format("no method {} declared for {}", method, ts.str()));
}

// ============================================================================
// Declarations and programs
// ============================================================================

void FggChecker::check_struct_recursion(const TypeDecl& d) const {
    // Walks struct-typed fields after instantiation; a path that reaches `d`
    // again is an infinitely large structure.
    std::vector<std::string> path{d.name};
    std::function<void(const Type&)> walk = [&](const Type& t) {
        for (const auto& f : fields(t)) {
            const Type& ft = f.type;
            if (!ft.is_named() || !decl(ft.name()) || !decl(ft.name())->is_struct()) continue;
            if (ft.name() == d.name)
                type_error(d.pos, "t-struct",
                           fmt::format("structure {} recursively contains itself via field {}",
                                       d.name, f.name));
            if (std::find(path.begin(), path.end(), ft.name()) != path.end()) continue;
            if (decl(ft.name())->formals.size() != ft.args().size()) continue;
            path.push_back(ft.name());
            walk(ft);
            path.pop_back();
        }
    };
    walk(Type::named(d.name, formal_params(d.formals)));
}

void FggChecker::check_type_decl(const TypeDecl& d) const {
    TypeEnv phi = type_formals_ok({}, d.formals, d.pos);
    if (d.is_struct()) {
        std::vector<std::string> names;
        for (const auto& f : d.fields) names.push_back(f.name);
        std::string dup;
        if (!distinct(names, &dup))
            type_error(d.pos, "t-struct", fmt::format("duplicate field {} in {}", dup, d.name));
        for (const auto& f : d.fields) type_ok(phi, f.type, d.pos);
        return;
    }
    if (!d.embeds.empty())
        type_error(d.pos, "t-interface", "interface embeddings must be expanded before checking");
    for (std::size_t i = 0; i < d.specs.size(); ++i) {
        const MethodSpec& s = d.specs[i];
        for (std::size_t j = 0; j < i; ++j)
            if (d.specs[j].name == s.name && !signature_equal(d.specs[j].sig, s.sig))
                type_error(s.pos, "t-interface",
                           fmt::format("method {} specified twice with different signatures", s.name));
        TypeEnv delta = type_formals_ok(phi, s.sig.type_formals, s.pos);
        std::vector<std::string> names;
        for (const auto& p : s.sig.params) names.push_back(p.name);
        std::string dup;
        if (!distinct(names, &dup))
            type_error(s.pos, "t-specification", fmt::format("duplicate parameter {}", dup));
        for (const auto& p : s.sig.params) type_ok(delta, p.type, s.pos);
        type_ok(delta, s.sig.result, s.pos);
    }
}

TypeEnv FggChecker::check_method_signature(const MethodDecl& d) const {
    std::vector<std::string> names{d.receiver_name};
    for (const auto& p : d.sig.params) names.push_back(p.name);
    std::string dup;
    if (!distinct(names, &dup))
        type_error(d.pos, "t-func", fmt::format("duplicate variable {}", dup));
    const TypeDecl* td = decl(d.receiver_type);
    if (!td || !td->is_struct())
        type_error(d.pos, "t-func",
                   fmt::format("receiver type {} is not a declared structure", d.receiver_type));
    if (td->formals.size() != d.receiver_formals.size())
        type_error(d.pos, "t-func", fmt::format("receiver {} needs {} type parameters",
                                                d.receiver_type, td->formals.size()));
    if (!formals_implement(d.receiver_formals, td->formals))
        type_error(d.pos, "<:-formals",
                   fmt::format("receiver bounds of {}.{} do not implement those of type {}",
                               d.receiver_type, d.name, d.receiver_type));
    TypeEnv delta = type_formals_ok(d.receiver_formals, d.sig.type_formals, d.pos);
    for (const auto& p : d.sig.params) type_ok(delta, p.type, d.pos);
    type_ok(delta, d.sig.result, d.pos);
    return delta;
}

void FggChecker::check_method_decl(const MethodDecl& d) const {
    TypeEnv delta = check_method_signature(d);
    ValueEnv gamma{{d.receiver_name, d.receiver()}};
    for (const auto& p : d.sig.params) gamma.emplace_back(p.name, p.type);
    Type t = type_expr(delta, gamma, d.body, false);
    if (!implements(delta, t, d.sig.result))
        type_error(d.body.pos(), "t-func",
                   fmt::format("body of {}.{} has type {}, which does not implement {}",
                               d.receiver_type, d.name, t.str(), d.sig.result.str()));
}

void FggChecker::check_main(std::vector<Diagnostic>& out) const {
    ValueEnv gamma;
    auto check_binding = [&](const std::string& name, const Expr& init, const std::optional<Type>& annot,
                             SourcePos pos) {
        try {
            Type t = type_expr({}, gamma, init, false);
            if (annot) {
                type_ok({}, *annot, pos);
                if (!implements({}, t, *annot))
                    type_error(pos, "t-main", fmt::format("value of type {} does not implement {}",
                                                          t.str(), annot->str()));
                t = *annot;
            }
            if (name != "_") gamma.emplace_back(name, t);
        } catch (const TypeError& err) {
            Diagnostic d = err.diagnostic();
            d.file = p_.file;
            out.push_back(d);
        }
    };
    for (const auto& b : p_.bindings) check_binding(b.name, b.init, b.type, b.pos);
    if (!p_.body.valid()) {
        out.push_back({p_.file, p_.body_pos, "t-prog", "program has no main body"});
        return;
    }
    check_binding("_", p_.body, p_.body_type, p_.body_pos);
}

std::vector<Diagnostic> FggChecker::check_types() const {
    std::vector<Diagnostic> out;
    std::set<std::string> tnames;
    for (const TypeDecl* t : p_.type_decls()) {
        try {
            if (!tnames.insert(t->name).second)
                type_error(t->pos, "t-prog", fmt::format("type {} declared twice", t->name));
            check_type_decl(*t);
            if (t->is_struct()) check_struct_recursion(*t);
        } catch (const TypeError& err) {
            out.push_back(err.diagnostic());
        }
    }
    return out;
}

std::vector<Diagnostic> FggChecker::check() const {
    std::vector<Diagnostic> out;
    auto guard = [&](auto&& f) {
        try {
            f();
        } catch (const TypeError& err) {
            Diagnostic d = err.diagnostic();
            d.file = p_.file;
            out.push_back(d);
        }
    };
    std::set<std::string> tnames;
    std::set<std::pair<std::string, std::string>> mnames;
    for (const auto& d : p_.decls) {
        if (const auto* t = std::get_if<TypeDecl>(&d)) {
            if (!tnames.insert(t->name).second)
                out.push_back({p_.file, t->pos, "t-prog", fmt::format("type {} declared twice", t->name)});
            if (p_.extended && is_primitive_type_name(t->name))
                out.push_back({p_.file, t->pos, "t-prog",
                               fmt::format("type {} redeclares a primitive type", t->name)});
        } else {
            const auto& m = std::get<MethodDecl>(d);
            if (!mnames.insert({m.receiver_type, m.name}).second)
                out.push_back({p_.file, m.pos, "t-prog",
                               fmt::format("method {}.{} declared twice", m.receiver_type, m.name)});
        }
    }
    for (const auto& d : p_.decls) {
        if (const auto* t = std::get_if<TypeDecl>(&d)) {
            std::size_t before = out.size();
            guard([&] { check_type_decl(*t); });
            if (t->is_struct() && out.size() == before) guard([&] { check_struct_recursion(*t); });
        } else {
            guard([&] { check_method_decl(std::get<MethodDecl>(d)); });
        }
    }
    check_main(out);
    return out;
}

std::vector<Diagnostic> check_program_fgg(const Program& p) { return FggChecker(p).check(); }

} // namespace fgo
