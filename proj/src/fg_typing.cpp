#include "fgo/fg_typing.hpp"

#include "fgo/fgg_typing.hpp"

#include <fmt/format.h>

#include <functional>
#include <map>
#include <set>

namespace fgo::fg {

namespace {

bool same_signature(const Signature& a, const Signature& b) {
    if (a.params.size() != b.params.size() || !(a.result == b.result)) return false;
    for (std::size_t i = 0; i < a.params.size(); ++i)
        if (!(a.params[i].type == b.params[i].type)) return false;
    return true;
}

} // namespace

Checker::Checker(const Program& p) : p_(p) {
    for (const auto& d : p.decls) {
        if (const auto* t = std::get_if<TypeDecl>(&d))
            types_.emplace(t->name, t);
        else
            methods_[std::get<MethodDecl>(d).receiver_type].push_back(&std::get<MethodDecl>(d));
    }
}

bool Checker::declared(const std::string& t) const {
    return types_.count(t) || (p_.extended && is_primitive_type_name(t));
}

bool Checker::is_struct(const std::string& t) const {
    auto it = types_.find(t);
    if (it != types_.end()) return it->second->is_struct();
    return p_.extended && is_primitive_type_name(t);
}

bool Checker::is_interface(const std::string& t) const {
    auto it = types_.find(t);
    return it != types_.end() && it->second->is_interface();
}

std::vector<Field> Checker::fields(const std::string& ts) const {
    auto it = types_.find(ts);
    if (it == types_.end() || !it->second->is_struct()) {
        if (is_struct(ts)) return {};
        type_error({}, "t-field", fmt::format("{} is not a structure type", ts));
    }
    return it->second->fields;
}

MethodSet Checker::methods(const std::string& t) const {
    MethodSet out;
    if (is_interface(t)) {
        for (const auto& s : types_.at(t)->specs) out.emplace(s.name, s.sig);
        return out;
    }
    if (auto it = methods_.find(t); it != methods_.end())
        for (const MethodDecl* m : it->second) out.emplace(m->name, m->sig);
    return out;
}

bool Checker::implements(const std::string& t, const std::string& u) const {
    if (!is_interface(u)) return t == u && is_struct(u);
    MethodSet have = methods(t);
    for (const auto& [name, sig] : methods(u)) {
        auto it = have.find(name);
        if (it == have.end() || !same_signature(it->second, sig)) return false;
    }
    return true;
}

std::string Checker::name_of(const Type& t, SourcePos pos) const {
    if (!t.is_named() || !t.args().empty())
        type_error(pos, "t-named", fmt::format("{} is not an FG type name", t.str()));
    return t.name();
}

void Checker::type_ok(const std::string& t, SourcePos pos) const {
    if (!declared(t)) type_error(pos, "t-named", fmt::format("undeclared type {}", t));
}

std::string Checker::type_expr(const Env& gamma, const Expr& e, bool allow_stupid) const {
    if (const auto* v = e.get_if<Expr::Var>()) {
        for (auto it = gamma.rbegin(); it != gamma.rend(); ++it)
            if (it->first == v->name) return it->second;
        type_error(e.pos(), "t-var", fmt::format("unbound variable {}", v->name));
    }
    if (const auto* c = e.get_if<Expr::Call>()) {
        if (!c->type_args.empty()) type_error(e.pos(), "t-call", "type arguments in FG");
        std::string recv = type_expr(gamma, c->receiver, allow_stupid);
        MethodSet ms = methods(recv);
        auto it = ms.find(c->method);
        if (it == ms.end())
            type_error(e.pos(), "t-call", fmt::format("type {} has no method {}", recv, c->method));
        const Signature& sig = it->second;
        if (sig.params.size() != c->args.size())
            type_error(e.pos(), "t-call", fmt::format("method {} expects {} arguments, got {}",
                                                      c->method, sig.params.size(), c->args.size()));
        for (std::size_t i = 0; i < c->args.size(); ++i) {
            std::string actual = type_expr(gamma, c->args[i], allow_stupid);
            std::string formal = name_of(sig.params[i].type, e.pos());
            if (!implements(actual, formal))
                type_error(c->args[i].pos(), "t-call",
                           fmt::format("argument {} of {}: {} does not implement {}", i + 1,
                                       c->method, actual, formal));
        }
        return name_of(sig.result, e.pos());
    }
    if (const auto* s = e.get_if<Expr::StructLit>()) {
        std::string ts = name_of(s->type, e.pos());
        type_ok(ts, e.pos());
        if (!types_.count(ts) || !is_struct(ts))
            type_error(e.pos(), "t-literal", fmt::format("{} is not a structure type", ts));
        const auto& fs = types_.at(ts)->fields;
        if (fs.size() != s->args.size())
            type_error(e.pos(), "t-literal", fmt::format("{} has {} fields, got {} values", ts,
                                                         fs.size(), s->args.size()));
        for (std::size_t i = 0; i < fs.size(); ++i) {
            std::string actual = type_expr(gamma, s->args[i], allow_stupid);
            std::string want = name_of(fs[i].type, e.pos());
            if (!implements(actual, want))
                type_error(s->args[i].pos(), "t-literal",
                           fmt::format("field {} of {}: {} does not implement {}", fs[i].name, ts,
                                       actual, want));
        }
        return ts;
    }
    if (const auto* f = e.get_if<Expr::Select>()) {
        std::string recv = type_expr(gamma, f->receiver, allow_stupid);
        if (!is_struct(recv))
            type_error(e.pos(), "t-field",
                       fmt::format("selecting {} from non-structure type {}", f->field, recv));
        for (const auto& fd : fields(recv))
            if (fd.name == f->field) return name_of(fd.type, e.pos());
        type_error(e.pos(), "t-field", fmt::format("type {} has no field {}", recv, f->field));
    }
    if (const auto* a = e.get_if<Expr::Assert>()) {
        std::string target = name_of(a->type, e.pos());
        type_ok(target, e.pos());
        std::string from = type_expr(gamma, a->receiver, allow_stupid);
        if (is_struct(from)) {
            if (!allow_stupid)
                type_error(e.pos(), "t-stupid", fmt::format("assertion on non-interface type {}", from));
            return target;
        }
        if (is_struct(target) && !implements(target, from))
            type_error(e.pos(), "t-assert",
                       fmt::format("impossible assertion: {} does not implement {}", target, from));
        return target;
    }
    if (e.is<Expr::IntLit>()) return "int";
    if (e.is<Expr::BoolLit>()) return "bool";
    if (e.is<Expr::StrLit>()) return "string";
    if (const auto* b = e.get_if<Expr::BinOp>()) {
        std::string l = type_expr(gamma, b->lhs, allow_stupid);
        std::string r = type_expr(gamma, b->rhs, allow_stupid);
        std::string want = b->op == BinaryOp::And ? "bool" : "int";
        if (l != want || r != want)
            type_error(e.pos(), "t-binop",
                       fmt::format("operator {} expects {} operands, got {} and {}",
                                   binary_op_text(b->op), want, l, r));
        return b->op == BinaryOp::Add ? "int" : "bool";
    }
    if (const auto* s = e.get_if<Expr::Sprintf>()) {
        auto verbs = sprintf_verbs(s->format);
        if (!verbs || verbs->size() != s->args.size())
            type_error(e.pos(), "t-sprintf", "format does not match arguments");
        for (std::size_t i = 0; i < s->args.size(); ++i) {
            std::string t = type_expr(gamma, s->args[i], allow_stupid);
            if (t != ((*verbs)[i] == 'd' ? "int" : "string"))
                type_error(s->args[i].pos(), "t-sprintf", fmt::format("bad argument type {}", t));
        }
        return "string";
    }
    type_error(e.pos(), "t-expr", "malformed expression");
}

void Checker::check_decl(const Decl& d) const {
    if (const auto* t = std::get_if<TypeDecl>(&d)) {
        if (!t->formals.empty()) type_error(t->pos, "t-type", "type parameters in FG");
        if (t->is_struct()) {
            std::set<std::string> seen;
            for (const auto& f : t->fields) {
                if (!seen.insert(f.name).second)
                    type_error(t->pos, "t-struct", fmt::format("duplicate field {}", f.name));
                type_ok(name_of(f.type, t->pos), t->pos);
            }
            return;
        }
        if (!t->embeds.empty()) type_error(t->pos, "t-interface", "unexpanded embedding");
        std::map<std::string, const Signature*> seen;
        for (const auto& s : t->specs) {
            if (!s.sig.type_formals.empty())
                type_error(s.pos, "t-specification", "type parameters in FG");
            auto [it, fresh] = seen.emplace(s.name, &s.sig);
            if (!fresh && !same_signature(*it->second, s.sig))
                type_error(s.pos, "t-interface", fmt::format("method {} is not unique", s.name));
            std::set<std::string> params;
            for (const auto& p : s.sig.params) {
                if (!params.insert(p.name).second)
                    type_error(s.pos, "t-specification", fmt::format("duplicate parameter {}", p.name));
                type_ok(name_of(p.type, s.pos), s.pos);
            }
            type_ok(name_of(s.sig.result, s.pos), s.pos);
        }
        return;
    }
    const auto& m = std::get<MethodDecl>(d);
    if (!m.receiver_formals.empty() || !m.sig.type_formals.empty())
        type_error(m.pos, "t-func", "type parameters in FG");
    std::set<std::string> vars{m.receiver_name};
    for (const auto& p : m.sig.params)
        if (!vars.insert(p.name).second)
            type_error(m.pos, "t-func", fmt::format("duplicate variable {}", p.name));
    if (!types_.count(m.receiver_type) || !is_struct(m.receiver_type))
        type_error(m.pos, "t-func",
                   fmt::format("receiver type {} is not a declared structure", m.receiver_type));
    Env gamma{{m.receiver_name, m.receiver_type}};
    for (const auto& p : m.sig.params) {
        std::string t = name_of(p.type, m.pos);
        type_ok(t, m.pos);
        gamma.emplace_back(p.name, t);
    }
    std::string result = name_of(m.sig.result, m.pos);
    type_ok(result, m.pos);
    std::string body = type_expr(gamma, m.body, false);
    if (!implements(body, result))
        type_error(m.body.pos(), "t-func",
                   fmt::format("body of {}.{} has type {}, which does not implement {}",
                               m.receiver_type, m.name, body, result));
}

std::vector<Diagnostic> Checker::check() const {
    std::vector<Diagnostic> out;
    auto report = [&](const TypeError& err) {
        Diagnostic d = err.diagnostic();
        d.file = p_.file;
        out.push_back(d);
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
        try {
            check_decl(d);
        } catch (const TypeError& err) {
            report(err);
        }
    }

    // Structures may not contain themselves through structure-typed fields.
    std::map<std::string, int> state;
    std::function<bool(const std::string&)> cyclic = [&](const std::string& s) {
        int& st = state[s];
        if (st == 1) return true;
        if (st == 2) return false;
        st = 1;
        for (const auto& f : types_.at(s)->fields) {
            const std::string& ft = f.type.name();
            if (types_.count(ft) && types_.at(ft)->is_struct() && cyclic(ft)) return true;
        }
        state[s] = 2;
        return false;
    };
    for (const auto& d : p_.decls) {
        const auto* t = std::get_if<TypeDecl>(&d);
        if (!t || !t->is_struct() || types_.at(t->name) != t) continue;
        state.clear();
        if (cyclic(t->name))
            out.push_back({p_.file, t->pos, "t-struct",
                           fmt::format("structure {} recursively contains itself", t->name)});
    }

    Env gamma;
    auto binding = [&](const std::string& name, const Expr& init, const std::optional<Type>& annot, SourcePos pos) {
        try {
            std::string t = type_expr(gamma, init, false);
            if (annot) {
                std::string want = name_of(*annot, pos);
                type_ok(want, pos);
                if (!implements(t, want))
                    type_error(pos, "t-main", fmt::format("value of type {} does not implement {}", t, want));
                t = want;
            }
            if (name != "_") gamma.emplace_back(name, t);
        } catch (const TypeError& err) {
            report(err);
        }
    };
    for (const auto& b : p_.bindings) binding(b.name, b.init, b.type, b.pos);
    if (p_.body.valid())
        binding("_", p_.body, p_.body_type, p_.body_pos);
    else
        out.push_back({p_.file, p_.body_pos, "t-prog", "program has no main body"});
    return out;
}

std::vector<Diagnostic> check_program_fg(const Program& p) { return Checker(p).check(); }

} // namespace fgo::fg
