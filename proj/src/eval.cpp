#include "fgo/eval.hpp"

#include "fgo/pretty.hpp"

#include <fmt/format.h>

#include <cstdlib>

namespace fgo {

namespace {

StepResult stepped(Expr e) { return {StepResult::Kind::Stepped, std::move(e), {}, {}, {}}; }
StepResult stuck(const Expr& e, std::string why) {
    return {StepResult::Kind::Stuck, e, {}, {}, std::move(why)};
}

// Rebuilds `e` with its i-th immediate subterm replaced.
Expr replace_child(const Expr& e, std::size_t i, const Expr& sub) {
    if (const auto* c = e.get_if<Expr::Call>()) {
        if (i == 0) return make_call(sub, c->method, c->type_args, c->args, e.pos());
        ExprList args = c->args;
        args[i - 1] = sub;
        return make_call(c->receiver, c->method, c->type_args, std::move(args), e.pos());
    }
    if (const auto* s = e.get_if<Expr::StructLit>()) {
        ExprList args = s->args;
        args[i] = sub;
        return make_struct_lit(s->type, std::move(args), e.pos());
    }
    if (const auto* f = e.get_if<Expr::Select>()) return make_select(sub, f->field, e.pos());
    if (const auto* a = e.get_if<Expr::Assert>()) return make_assert(sub, a->type, e.pos());
    if (const auto* b = e.get_if<Expr::BinOp>())
        return i == 0 ? make_binop(b->op, sub, b->rhs, e.pos()) : make_binop(b->op, b->lhs, sub, e.pos());
    if (const auto* p = e.get_if<Expr::Sprintf>()) {
        ExprList args = p->args;
        args[i] = sub;
        return make_sprintf(p->format, std::move(args), e.pos());
    }
    return e;
}

// Immediate subterms in evaluation order.
ExprList children(const Expr& e) {
    if (const auto* c = e.get_if<Expr::Call>()) {
        ExprList out{c->receiver};
        out.insert(out.end(), c->args.begin(), c->args.end());
        return out;
    }
    if (const auto* s = e.get_if<Expr::StructLit>()) return s->args;
    if (const auto* f = e.get_if<Expr::Select>()) return {f->receiver};
    if (const auto* a = e.get_if<Expr::Assert>()) return {a->receiver};
    if (const auto* b = e.get_if<Expr::BinOp>()) return {b->lhs, b->rhs};
    if (const auto* p = e.get_if<Expr::Sprintf>()) return p->args;
    return {};
}

std::string format_value(const Expr& v) {
    if (const auto* i = v.get_if<Expr::IntLit>()) return std::to_string(i->value);
    if (const auto* s = v.get_if<Expr::StrLit>()) return s->value;
    return pretty(v);
}

// Applies the rule whose redex is `e`, all of whose evaluated subterms are values.
StepResult contract(const Machine& m, const Expr& e) {
    if (const auto* c = e.get_if<Expr::Call>()) {
        Type ts = value_type(c->receiver);
        MethodBody b;
        try {
            b = m.body(ts, c->method, c->type_args);
        } catch (const Error& err) {
            return stuck(e, err.diagnostic().message);
        }
        if (b.params.size() != c->args.size()) return stuck(e, "argument count mismatch");
        std::vector<std::pair<std::string, Expr>> bind{{b.receiver, c->receiver}};
        for (std::size_t i = 0; i < c->args.size(); ++i) bind.emplace_back(b.params[i].name, c->args[i]);
        return stepped(subst_vars(b.body, bind));
    }
    if (const auto* f = e.get_if<Expr::Select>()) {
        const auto* lit = f->receiver.get_if<Expr::StructLit>();
        if (!lit) return stuck(e, "field selection on a non-structure value");
        std::vector<Field> fs;
        try {
            fs = m.fields(lit->type);
        } catch (const Error& err) {
            return stuck(e, err.diagnostic().message);
        }
        for (std::size_t i = 0; i < fs.size() && i < lit->args.size(); ++i)
            if (fs[i].name == f->field) return stepped(lit->args[i]);
        return stuck(e, fmt::format("no field {}", f->field));
    }
    if (const auto* a = e.get_if<Expr::Assert>()) {
        if (m.implements(value_type(a->receiver), a->type)) return stepped(a->receiver);
        return {StepResult::Kind::Panic, e, a->receiver, a->type,
                fmt::format("{} does not implement {}", value_type(a->receiver).str(), a->type.str())};
    }
    if (const auto* b = e.get_if<Expr::BinOp>()) {
        const auto* li = b->lhs.get_if<Expr::IntLit>();
        const auto* ri = b->rhs.get_if<Expr::IntLit>();
        const auto* lb = b->lhs.get_if<Expr::BoolLit>();
        const auto* rb = b->rhs.get_if<Expr::BoolLit>();
        switch (b->op) {
        case BinaryOp::Add:
            if (li && ri)
                return stepped(make_int(static_cast<std::int64_t>(static_cast<std::uint64_t>(li->value) +
                                                                  static_cast<std::uint64_t>(ri->value)),
                                        e.pos()));
            break;
        case BinaryOp::Greater:
            if (li && ri) return stepped(make_bool(li->value > ri->value, e.pos()));
            break;
        case BinaryOp::Equal:
            if (li && ri) return stepped(make_bool(li->value == ri->value, e.pos()));
            break;
        case BinaryOp::And:
            if (lb && rb) return stepped(make_bool(lb->value && rb->value, e.pos()));
            break;
        }
        return stuck(e, fmt::format("ill-typed operands of {}", binary_op_text(b->op)));
    }
    if (const auto* p = e.get_if<Expr::Sprintf>()) {
        std::string out;
        std::size_t next = 0;
        for (std::size_t i = 0; i < p->format.size(); ++i) {
            if (p->format[i] != '%' || i + 1 >= p->format.size()) {
                out += p->format[i];
                continue;
            }
            char v = p->format[++i];
            if (v == '%') {
                out += '%';
            } else if (next < p->args.size()) {
                out += format_value(p->args[next++]);
            }
        }
        return stepped(make_string(out, e.pos()));
    }
    if (const auto* v = e.get_if<Expr::Var>()) return stuck(e, fmt::format("free variable {}", v->name));
    return stuck(e, "no rule applies");
}

} // namespace

StepResult step(const Machine& m, const Expr& e) {
    if (is_value(e)) return {StepResult::Kind::Value, e, {}, {}, {}};
    // `&&` short-circuits once its left operand is false.
    if (const auto* b = e.get_if<Expr::BinOp>(); b && b->op == BinaryOp::And) {
        if (const auto* l = b->lhs.get_if<Expr::BoolLit>(); l && !l->value)
            return stepped(make_bool(false, e.pos()));
    }
    ExprList kids = children(e);
    for (std::size_t i = 0; i < kids.size(); ++i) {
        if (is_value(kids[i])) continue;
        StepResult r = step(m, kids[i]);
        if (r.kind == StepResult::Kind::Stepped) r.expr = replace_child(e, i, r.expr);
        if (r.kind == StepResult::Kind::Panic) r.expr = e;
        return r;
    }
    return contract(m, e);
}

std::size_t count_redexes(const Machine& m, const Expr& e) {
    if (is_value(e)) return 0;
    if (const auto* b = e.get_if<Expr::BinOp>(); b && b->op == BinaryOp::And) {
        if (const auto* l = b->lhs.get_if<Expr::BoolLit>(); l && !l->value) return 1;
    }
    ExprList kids = children(e);
    std::size_t n = 0;
    bool all_values = true;
    for (std::size_t i = 0; i < kids.size(); ++i) {
        // A hole may sit in position i only when every earlier subterm is a value.
        if (all_values) n += count_redexes(m, kids[i]);
        all_values = all_values && is_value(kids[i]);
    }
    if (all_values && !e.is<Expr::Var>()) {
        StepResult r = contract(m, e);
        if (r.kind != StepResult::Kind::Stuck) ++n;
    }
    return n;
}

std::size_t RunOptions::default_fuel() {
    if (const char* env = std::getenv("FGO_FUEL")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return static_cast<std::size_t>(v);
    }
    return 10000;
}

RunResult run(const Machine& m, const Expr& e, const RunOptions& opts) {
    RunResult out;
    Expr cur = e;
    std::optional<Type> cur_type;
    if (opts.dynamic_checks) cur_type = m.type_of(cur);
    if (opts.trace) out.trace.push_back(cur);
    for (;;) {
        if (opts.dynamic_checks && count_redexes(m, cur) > 1)
            throw InternalError({"", cur.pos(), "determinism",
                                 fmt::format("more than one redex in {}", pretty(cur))});
        StepResult r = step(m, cur);
        switch (r.kind) {
        case StepResult::Kind::Value:
            out.outcome = RunResult::Outcome::Value;
            out.result = cur;
            return out;
        case StepResult::Kind::Panic:
            out.outcome = RunResult::Outcome::Panic;
            out.result = cur;
            out.panic_value = r.value;
            out.panic_type = r.asserted;
            return out;
        case StepResult::Kind::Stuck:
            throw InternalError({"", cur.pos(), "progress",
                                 fmt::format("stuck term {}: {}", pretty(cur), r.message)});
        case StepResult::Kind::Stepped:
            break;
        }
        if (out.steps >= opts.fuel) {
            out.outcome = RunResult::Outcome::FuelExhausted;
            out.result = cur;
            return out;
        }
        ++out.steps;
        if (opts.dynamic_checks) {
            Type next;
            try {
                next = m.type_of(r.expr);
            } catch (const TypeError& err) {
                throw InternalError({"", cur.pos(), "preservation",
                                     fmt::format("step {}: {} --> {} is ill typed: {}", out.steps,
                                                 pretty(cur), pretty(r.expr), err.diagnostic().message)});
            }
            if (!m.implements(next, *cur_type))
                throw InternalError({"", cur.pos(), "preservation",
                                     fmt::format("step {}: {} : {} --> {} : {}", out.steps, pretty(cur),
                                                 cur_type->str(), pretty(r.expr), next.str())});
            cur_type = next;
        }
        cur = r.expr;
        if (opts.trace) out.trace.push_back(cur);
    }
}

std::string format_trace(const std::vector<Expr>& trace) {
    std::string out;
    for (std::size_t i = 0; i < trace.size(); ++i) out += fmt::format("{}: {}\n", i, pretty(trace[i]));
    return out;
}

std::string outcome_name(RunResult::Outcome o) {
    switch (o) {
    case RunResult::Outcome::Value: return "value";
    case RunResult::Outcome::Panic: return "panic";
    case RunResult::Outcome::FuelExhausted: return "fuel-exhausted";
    }
    return "?";
}

} // namespace fgo
