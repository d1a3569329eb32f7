#include "fgo/monomorphise.hpp"

#include "fgo/fg_typing.hpp"
#include "fgo/parser.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <tuple>
#include <set>

namespace fgo {

const char* mutation_name(Mutation m) {
    switch (m) {
    case Mutation::None: return "none";
    case Mutation::OmitDummies: return "omit-dummies";
    case Mutation::ConstantDummyHash: return "constant-dummy-hash";
    case Mutation::SkipStructExtension: return "skip-s-ext";
    case Mutation::SkipInterfaceExtension: return "skip-i-ext";
    case Mutation::EraseAssertions: return "erase-assertions";
    }
    return "?";
}

std::vector<Mutation> all_mutations() {
    return {Mutation::OmitDummies, Mutation::ConstantDummyHash, Mutation::SkipStructExtension,
            Mutation::SkipInterfaceExtension, Mutation::EraseAssertions};
}

// ============================================================================
// Names
// ============================================================================

std::string NameMangler::arg(const Type& t) const {
    if (t.args().empty()) return explicit_empty_ ? t.name() + "<>" : t.name();
    return type(t);
}

std::string NameMangler::type(const Type& t) const {
    if (!t.closed())
        throw InternalError({"", {}, "m-type", fmt::format("cannot name open type {}", t.str())});
    if (t.args().empty()) return t.name();
    std::string out = t.name() + "<";
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ",";
        out += arg(t.args()[i]);
    }
    return out + ">";
}

std::string NameMangler::method(const std::string& m, const TypeList& psi) const {
    if (psi.empty()) return m;
    std::string out = m + "<";
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (i) out += ",";
        out += arg(psi[i]);
    }
    return out + ">";
}

std::string NameMangler::dummy(const std::string& m, std::size_t k) const {
    return fmt::format("{}<{}>", m, k);
}

std::optional<Type> NameMangler::demangle(const std::string& id) const {
    std::size_t i = 0;
    std::function<std::optional<Type>()> parse = [&]() -> std::optional<Type> {
        std::size_t start = i;
        while (i < id.size() && id[i] != '<' && id[i] != '>' && id[i] != ',') ++i;
        if (i == start) return std::nullopt;
        std::string name = id.substr(start, i - start);
        TypeList args;
        if (i < id.size() && id[i] == '<') {
            ++i;
            if (i < id.size() && id[i] == '>') {
                ++i;
                return Type::named(name);
            }
            for (;;) {
                auto a = parse();
                if (!a) return std::nullopt;
                args.push_back(*a);
                if (i < id.size() && id[i] == ',') {
                    ++i;
                    continue;
                }
                if (i < id.size() && id[i] == '>') {
                    ++i;
                    break;
                }
                return std::nullopt;
            }
        }
        return Type::named(name, std::move(args));
    };
    auto t = parse();
    if (!t || i != id.size() || type(*t) != id) return std::nullopt;
    return t;
}

std::string SignatureHasher::key(const std::string& m, const Signature& sig) {
    return m + sig.canonical().str();
}

std::size_t SignatureHasher::number(const std::string& m, const Signature& sig) {
    if (constant_) return 0;
    auto [it, fresh] = numbers_.emplace(key(m, sig), numbers_.size());
    return it->second;
}

// ============================================================================
// Translation
// ============================================================================

Monomorphiser::Monomorphiser(const FggChecker& c, InstanceSet omega, MonoOptions opts)
    : c_(c),
      omega_(std::move(omega)),
      opts_(opts),
      mangler_(opts.explicit_empty_args),
      hasher_(opts.mutation == Mutation::ConstantDummyHash) {
    top_ = "Top";
    for (int k = 1; c_.decl(top_); ++k) top_ = fmt::format("Top{}", k);
}

Type Monomorphiser::type(const Substitution& eta, const Type& t) const {
    return Type::named(mangler_.type(eta.apply(t)));
}

Expr Monomorphiser::expr(const Substitution& eta, const Expr& e) const {
    auto list = [&](const ExprList& xs) {
        ExprList out;
        out.reserve(xs.size());
        for (const auto& x : xs) out.push_back(expr(eta, x));
        return out;
    };
    if (const auto* x = e.get_if<Expr::Call>())
        return make_call(expr(eta, x->receiver), mangler_.method(x->method, eta.apply(x->type_args)), {},
                         list(x->args), e.pos());
    if (const auto* x = e.get_if<Expr::StructLit>())
        return make_struct_lit(type(eta, x->type), list(x->args), e.pos());
    if (const auto* x = e.get_if<Expr::Select>()) return make_select(expr(eta, x->receiver), x->field, e.pos());
    if (const auto* x = e.get_if<Expr::Assert>()) {
        if (opts_.mutation == Mutation::EraseAssertions) return expr(eta, x->receiver);
        return make_assert(expr(eta, x->receiver), type(eta, x->type), e.pos());
    }
    if (const auto* x = e.get_if<Expr::BinOp>())
        return make_binop(x->op, expr(eta, x->lhs), expr(eta, x->rhs), e.pos());
    if (const auto* x = e.get_if<Expr::Sprintf>()) return make_sprintf(x->format, list(x->args), e.pos());
    return e;
}

Signature Monomorphiser::sig(const Substitution& theta, const Signature& s) const {
    Signature out;
    for (const auto& p : s.params) out.params.push_back({p.name, type(theta, p.type)});
    out.result = type(theta, s.result);
    return out;
}

std::string Monomorphiser::dummy_name(const std::string& m, const Signature& instantiated) {
    return mangler_.dummy(m, hasher_.number(m, instantiated));
}

MethodSpec Monomorphiser::dummy_spec(const std::string& m, const Signature& instantiated, SourcePos pos) {
    return {dummy_name(m, instantiated), Signature{{}, {}, Type::named(top_)}, pos};
}

std::vector<MethodSpec> Monomorphiser::spec(const Substitution& eta, const std::vector<TypeList>& mu,
                                            const MethodSpec& s) {
    std::vector<MethodSpec> out;
    for (const auto& psi : mu) {
        Substitution theta = eta.extended(Substitution(s.sig.type_formals, psi));
        out.push_back({mangler_.method(s.name, psi), sig(theta, s.sig), s.pos});
    }
    if (opts_.mutation != Mutation::OmitDummies) out.push_back(dummy_spec(s.name, s.sig.instantiate(eta), s.pos));
    return out;
}

std::vector<Decl> Monomorphiser::decl(const Decl& d) {
    std::vector<Decl> out;
    if (const auto* td = std::get_if<TypeDecl>(&d)) {
        for (const auto& inst : omega_) {
            if (inst.is_method() || !inst.type.is_named() || inst.type.name() != td->name) continue;
            if (inst.type.args().size() != td->formals.size()) continue;
            Substitution eta(td->formals, inst.type.args());
            TypeDecl o;
            o.name = mangler_.type(inst.type);
            o.kind = td->kind;
            o.pos = td->pos;
            for (const auto& f : td->fields) o.fields.push_back({f.name, type(eta, f.type)});
            for (const auto& s : td->specs) {
                std::vector<TypeList> mu;
                for (const auto& mi : omega_)
                    if (mi.is_method() && mi.type == inst.type && *mi.method == s.name) mu.push_back(mi.psi);
                auto specs = spec(eta, mu, s);
                o.specs.insert(o.specs.end(), specs.begin(), specs.end());
            }
            out.emplace_back(std::move(o));
        }
        return out;
    }

    const auto& md = std::get<MethodDecl>(d);
    for (const auto& inst : omega_) {
        if (!inst.type.is_named() || inst.type.name() != md.receiver_type) continue;
        if (inst.type.args().size() != md.receiver_formals.size()) continue;
        if (inst.is_method()) {
            if (*inst.method != md.name || inst.psi.size() != md.sig.type_formals.size()) continue;
            Substitution theta(md.receiver_formals, inst.type.args());
            theta = theta.extended(Substitution(md.sig.type_formals, inst.psi));
            MethodDecl o;
            o.receiver_name = md.receiver_name;
            o.receiver_type = mangler_.type(inst.type);
            o.name = mangler_.method(md.name, inst.psi);
            o.sig = sig(theta, md.sig);
            o.body = expr(theta, md.body);
            o.pos = md.pos;
            out.emplace_back(std::move(o));
        } else {
            if (opts_.mutation == Mutation::OmitDummies) continue;
            // A dummy is only warranted when the instance actually has the method.
            if (!c_.try_subst_checked({}, md.receiver_formals, inst.type.args())) continue;
            Substitution eta(md.receiver_formals, inst.type.args());
            MethodDecl o;
            o.receiver_name = md.receiver_name;
            o.receiver_type = mangler_.type(inst.type);
            o.name = dummy_name(md.name, md.sig.instantiate(eta));
            o.sig = Signature{{}, {}, Type::named(top_)};
            o.body = make_struct_lit(Type::named(top_), {}, md.pos);
            o.pos = md.pos;
            out.emplace_back(std::move(o));
        }
    }
    return out;
}

namespace {

void sort_decls(std::vector<Decl>& decls) {
    auto key = [](const Decl& d) {
        if (const auto* t = std::get_if<TypeDecl>(&d)) return std::make_tuple(0, t->name, std::string());
        const auto& m = std::get<MethodDecl>(d);
        return std::make_tuple(1, m.receiver_type, m.name);
    };
    std::stable_sort(decls.begin(), decls.end(), [&](const Decl& a, const Decl& b) { return key(a) < key(b); });
}

} // namespace

Program Monomorphiser::program() {
    const Program& p = c_.program();
    Program out;
    out.mode = Mode::FG;
    out.extended = p.extended;
    out.file = p.file;
    TypeDecl top;
    top.name = top_;
    out.decls.emplace_back(std::move(top));
    for (const auto& d : p.decls) {
        auto ds = decl(d);
        out.decls.insert(out.decls.end(), std::make_move_iterator(ds.begin()), std::make_move_iterator(ds.end()));
    }
    sort_decls(out.decls);
    Substitution none;
    for (const auto& b : p.bindings) {
        MainBinding o{b.name, std::nullopt, expr(none, b.init), b.pos};
        if (b.type) o.type = type(none, *b.type);
        out.bindings.push_back(std::move(o));
    }
    if (p.body_type) out.body_type = type(none, *p.body_type);
    out.body = expr(none, p.body);
    out.body_pos = p.body_pos;
    return out;
}

MonoResult mono_program(const Program& source, const MonoOptions& opts) {
    Program p = expand_embeddings(source);
    FggChecker c(p);
    if (auto diags = c.check(); !diags.empty()) throw TypeError(diags.front());

    MonocheckResult mc = check_program_mono(c);
    if (!mc.ok())
        throw NomonoError({p.file, {}, "nomono", mc.witnesses.front().str()}, mc.witnesses);

    OmegaOptions oo = opts.omega;
    if (opts.mutation == Mutation::SkipStructExtension) oo.ext.structs = false;
    if (opts.mutation == Mutation::SkipInterfaceExtension) oo.ext.interfaces = false;
    OmegaResult om = omega(c, oo);
    if (!om.ok()) throw InternalError({p.file, {}, "omega-budget", om.diverged->str()});

    Monomorphiser m(c, om.set, opts);
    MonoResult r{m.program(), om.set};
    if (opts.check_output) {
        auto diags = fg::check_program_fg(r.program);
        if (!diags.empty())
            throw InternalError({p.file, diags.front().pos, "mono-output",
                                 fmt::format("translation is ill typed: {}", diags.front().str())});
    }
    return r;
}

// ============================================================================
// Normal form
// ============================================================================

namespace {

/// `m<k>` with a decimal k: the base name, or nothing.
std::optional<std::string> dummy_base(const std::string& name) {
    if (name.size() < 4 || name.back() != '>') return std::nullopt;
    std::size_t open = name.rfind('<');
    if (open == std::string::npos || open == 0) return std::nullopt;
    std::string digits = name.substr(open + 1, name.size() - open - 2);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](unsigned char ch) { return std::isdigit(ch); }))
        return std::nullopt;
    return name.substr(0, open);
}

} // namespace

Program normalise_fg(const Program& p) {
    // Each dummy is identified by where it occurs; dummies with equal base
    // names and equal occurrence sets are interchangeable.
    std::map<std::string, std::set<std::string>> where;
    for (const auto& d : p.decls) {
        if (const auto* t = std::get_if<TypeDecl>(&d)) {
            for (const auto& s : t->specs)
                if (dummy_base(s.name) && s.sig.params.empty()) where[s.name].insert("I " + t->name);
        } else {
            const auto& m = std::get<MethodDecl>(d);
            if (dummy_base(m.name) && m.sig.params.empty()) where[m.name].insert("S " + m.receiver_type);
        }
    }
    std::vector<std::pair<std::pair<std::string, std::set<std::string>>, std::string>> order;
    for (const auto& [name, occ] : where) order.push_back({{*dummy_base(name), occ}, name});
    std::sort(order.begin(), order.end());
    std::map<std::string, std::string> rename;
    for (std::size_t k = 0; k < order.size(); ++k)
        rename[order[k].second] = fmt::format("{}<{}>", order[k].first.first, k);
    auto renamed = [&](const std::string& n) {
        auto it = rename.find(n);
        return it == rename.end() ? n : it->second;
    };

    Program out = p;
    for (auto& d : out.decls) {
        if (auto* t = std::get_if<TypeDecl>(&d)) {
            for (auto& s : t->specs) s.name = renamed(s.name);
            std::sort(t->specs.begin(), t->specs.end(),
                      [](const MethodSpec& a, const MethodSpec& b) { return a.name < b.name; });
        } else {
            auto& m = std::get<MethodDecl>(d);
            m.name = renamed(m.name);
        }
    }
    sort_decls(out.decls);
    return out;
}

} // namespace fgo
