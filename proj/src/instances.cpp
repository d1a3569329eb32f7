#include "fgo/instances.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace fgo {

bool Instance::closed() const {
    if (!type.closed()) return false;
    return std::all_of(psi.begin(), psi.end(), [](const Type& t) { return t.closed(); });
}

std::string Instance::str() const {
    if (!method) return type.str();
    return fmt::format("{}.{}({})", type.str(), *method, format_types(psi));
}

bool operator==(const Instance& a, const Instance& b) {
    return a.type == b.type && a.method == b.method && a.psi == b.psi;
}

bool operator<(const Instance& a, const Instance& b) {
    if (a.type != b.type) return a.type < b.type;
    if (a.method != b.method) return a.method < b.method;
    return a.psi < b.psi;
}

std::string format_instances(const InstanceSet& s) {
    std::vector<std::string> lines;
    lines.reserve(s.size());
    for (const auto& i : s) lines.push_back(i.str());
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
}

namespace {

void collect_into(const FggChecker& c, const TypeEnv& delta, const ValueEnv& gamma, const Expr& e,
                  InstanceSet& out) {
    if (const auto* call = e.get_if<Expr::Call>()) {
        Type recv = c.type_expr(delta, gamma, call->receiver, true);
        out.insert(Instance::of_type(recv));
        out.insert(Instance::of_method(recv, call->method, call->type_args));
        collect_into(c, delta, gamma, call->receiver, out);
        for (const auto& a : call->args) collect_into(c, delta, gamma, a, out);
    } else if (const auto* lit = e.get_if<Expr::StructLit>()) {
        out.insert(Instance::of_type(lit->type));
        for (const auto& a : lit->args) collect_into(c, delta, gamma, a, out);
    } else if (const auto* sel = e.get_if<Expr::Select>()) {
        collect_into(c, delta, gamma, sel->receiver, out);
    } else if (const auto* as = e.get_if<Expr::Assert>()) {
        out.insert(Instance::of_type(as->type));
        collect_into(c, delta, gamma, as->receiver, out);
    } else if (const auto* b = e.get_if<Expr::BinOp>()) {
        collect_into(c, delta, gamma, b->lhs, out);
        collect_into(c, delta, gamma, b->rhs, out);
    } else if (const auto* p = e.get_if<Expr::Sprintf>()) {
        for (const auto& a : p->args) collect_into(c, delta, gamma, a, out);
    }
}

bool is_declared_struct(const FggChecker& c, const Type& t) {
    if (!t.is_named()) return false;
    const TypeDecl* d = c.decl(t.name());
    return d && d->is_struct();
}

} // namespace

InstanceSet collect_expr(const FggChecker& c, const TypeEnv& delta, const ValueEnv& gamma,
                         const Expr& e) {
    InstanceSet out;
    collect_into(c, delta, gamma, e, out);
    return out;
}

InstanceSet extend_once(const FggChecker& c, const TypeEnv& delta, const InstanceSet& omega,
                        const Extensions& ext) {
    InstanceSet out = omega;
    std::vector<const Instance*> types, calls;
    for (const auto& i : omega) (i.is_method() ? calls : types).push_back(&i);

    if (ext.fields) {
        for (const Instance* t : types) {
            if (!is_declared_struct(c, t->type)) continue;
            for (const auto& f : c.fields(t->type)) out.insert(Instance::of_type(f.type));
        }
    }

    if (ext.methods) {
        for (const Instance* call : calls) {
            MethodSet ms = c.methods(delta, call->type);
            auto it = ms.find(*call->method);
            if (it == ms.end() || it->second.type_formals.size() != call->psi.size()) continue;
            Substitution eta(it->second.type_formals, call->psi);
            for (const auto& p : it->second.params) out.insert(Instance::of_type(eta.apply(p.type)));
            out.insert(Instance::of_type(eta.apply(it->second.result)));
        }
    }

    if (ext.interfaces) {
        for (const Instance* call : calls) {
            if (!c.is_interface_type(call->type)) continue;
            for (const Instance* t : types) {
                if (t->type == call->type || !c.is_interface_type(t->type)) continue;
                if (c.implements(delta, t->type, call->type))
                    out.insert(Instance::of_method(t->type, *call->method, call->psi));
            }
        }
    }

    if (ext.structs) {
        for (const Instance* call : calls) {
            for (const Instance* t : types) {
                if (!is_declared_struct(c, t->type)) continue;
                if (!c.implements(delta, t->type, call->type)) continue;
                MethodBody b = c.body(t->type, *call->method, call->psi);
                out.insert(Instance::of_method(t->type, *call->method, call->psi));
                ValueEnv gamma{{b.receiver, b.receiver_type}};
                for (const auto& p : b.params) gamma.emplace_back(p.name, p.type);
                collect_into(c, delta, gamma, b.body, out);
            }
        }
    }
    return out;
}

std::string DivergenceGuard::str() const {
    std::string out = fmt::format("instance set still growing after {} iterations ({} -> {} instances)",
                                  iterations, previous_size, last_size);
    if (!fresh_sample.empty()) {
        out += "; new instances include";
        for (const auto& i : fresh_sample) {
            std::string text = i.str();
            if (text.size() > 80) text = text.substr(0, 77) + "...";
            out += " " + text;
        }
    }
    return out;
}

InstanceSet collect_main(const FggChecker& c) {
    const Program& p = c.program();
    InstanceSet out = collect_expr(c, {}, {}, p.main_body());
    ValueEnv gamma;
    auto add = [&](const InstanceSet& s) { out.insert(s.begin(), s.end()); };
    for (const auto& b : p.bindings) {
        add(collect_expr(c, {}, gamma, b.init));
        if (b.type) out.insert(Instance::of_type(*b.type));
        if (b.name != "_") gamma.emplace_back(b.name, b.type ? *b.type : c.type_expr({}, gamma, b.init, false));
    }
    add(collect_expr(c, {}, gamma, p.body));
    if (p.body_type) out.insert(Instance::of_type(*p.body_type));
    return out;
}

OmegaResult omega(const FggChecker& c, const OmegaOptions& opts) {
    OmegaResult r;
    r.set = collect_main(c);
    for (;;) {
        InstanceSet next = extend_once(c, {}, r.set, opts.ext);
        if (next.size() == r.set.size()) return r;
        ++r.iterations;
        if (r.iterations >= opts.max_iterations || next.size() >= opts.max_instances) {
            DivergenceGuard g{r.iterations, r.set.size(), next.size(), {}};
            for (const auto& i : next)
                if (!r.set.count(i)) g.fresh_sample.push_back(i);
            // The deepest fresh instances are the informative ones.
            std::stable_sort(g.fresh_sample.begin(), g.fresh_sample.end(),
                             [](const Instance& a, const Instance& b) {
                                 return a.type.symbol_count() > b.type.symbol_count();
                             });
            if (g.fresh_sample.size() > 5) g.fresh_sample.resize(5);
            r.set = std::move(next);
            r.diverged = std::move(g);
            return r;
        }
        r.set = std::move(next);
    }
}

OmegaResult omega(const Program& p, const OmegaOptions& opts) {
    FggChecker c(p);
    return omega(c, opts);
}

} // namespace fgo
