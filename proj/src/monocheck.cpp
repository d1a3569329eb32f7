#include "fgo/monocheck.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace fgo {

std::string OccursWitness::str() const {
    return fmt::format("{}.{}: iteration {}: {}: {} occurs in {}", receiver_type, method, iteration,
                       instance.str(), param, offending.str());
}

std::optional<std::size_t> occurs_at(const TypeFormals& formals, const TypeList& actuals) {
    if (formals.size() != actuals.size())
        throw std::invalid_argument(fmt::format("occurs check on {} formals and {} actuals",
                                                formals.size(), actuals.size()));
    for (std::size_t i = 0; i < formals.size(); ++i) {
        const std::string& a = formals[i].param;
        const Type& t = actuals[i];
        if (!(t.is_param() && t.name() == a) && t.mentions(a)) return i;
    }
    return std::nullopt;
}

bool occurs(const TypeFormals& formals, const TypeList& actuals) {
    return occurs_at(formals, actuals).has_value();
}

namespace {

/// One participant of the dovetailed search.
struct Participant {
    const MethodDecl* decl = nullptr;  // null for main
    TypeEnv delta;
    InstanceSet set;
    bool done = false;
};

std::optional<OccursWitness> find_witness(const Participant& p, std::size_t iteration) {
    if (!p.decl) return std::nullopt;
    const MethodDecl& d = *p.decl;
    for (const auto& i : p.set) {
        if (!i.is_method() || *i.method != d.name || !i.type.is_named() ||
            i.type.name() != d.receiver_type)
            continue;
        if (i.type.args().size() != d.receiver_formals.size() ||
            i.psi.size() != d.sig.type_formals.size())
            continue;
        if (auto k = occurs_at(d.receiver_formals, i.type.args()))
            return OccursWitness{d.receiver_type, d.name, i, d.receiver_formals[*k].param,
                                 i.type.args()[*k], iteration};
        if (auto k = occurs_at(d.sig.type_formals, i.psi))
            return OccursWitness{d.receiver_type, d.name, i, d.sig.type_formals[*k].param, i.psi[*k],
                                 iteration};
    }
    return std::nullopt;
}

Participant seed(const MethodDecl& d) {
    Participant p;
    p.decl = &d;
    p.delta = d.receiver_formals;
    p.delta.insert(p.delta.end(), d.sig.type_formals.begin(), d.sig.type_formals.end());
    Type recv = d.receiver();
    p.set.insert(Instance::of_type(recv));
    p.set.insert(Instance::of_method(recv, d.name, formal_params(d.sig.type_formals)));
    return p;
}

/// Advances one participant by one application of G. Returns a witness
/// found in the new set, if any.
std::optional<OccursWitness> advance(const FggChecker& c, Participant& p, std::size_t round) {
    InstanceSet next = extend_once(c, p.delta, p.set);
    if (next.size() == p.set.size()) {
        p.done = true;
        return std::nullopt;
    }
    p.set = std::move(next);
    return find_witness(p, round);
}

} // namespace

std::optional<OccursWitness> check_method(const FggChecker& c, const MethodDecl& d,
                                          const MonocheckOptions& opts) {
    Participant p = seed(d);
    if (auto w = find_witness(p, 0)) return w;
    for (std::size_t round = 1; !p.done; ++round) {
        if (round > opts.max_rounds)
            throw InternalError({"", d.pos, "monocheck",
                                 fmt::format("no decision for {}.{} after {} rounds", d.receiver_type,
                                             d.name, opts.max_rounds)});
        if (auto w = advance(c, p, round)) return w;
    }
    return std::nullopt;
}

MonocheckResult check_program_mono(const FggChecker& c, const MonocheckOptions& opts) {
    std::vector<Participant> ps;
    for (const MethodDecl* d : c.program().method_decls()) ps.push_back(seed(*d));
    Participant main_p;
    main_p.set = collect_main(c);
    ps.push_back(std::move(main_p));

    MonocheckResult r;
    for (const auto& p : ps)
        if (auto w = find_witness(p, 0)) r.witnesses.push_back(*w);

    while (r.witnesses.empty()) {
        // `main` has no formals and so never witnesses; it does not keep the
        // search alive on its own.
        bool active = false;
        for (const auto& p : ps) active = active || (p.decl && !p.done);
        if (!active) break;
        ++r.rounds;
        if (r.rounds > opts.max_rounds)
            throw InternalError({c.program().file, {}, "monocheck",
                                 fmt::format("no decision after {} dovetailing rounds", opts.max_rounds)});
        for (auto& p : ps) {
            if (p.done) continue;
            if (auto w = advance(c, p, r.rounds)) r.witnesses.push_back(*w);
        }
    }
    return r;
}

MonocheckResult check_program_mono(const Program& p, const MonocheckOptions& opts) {
    FggChecker c(p);
    return check_program_mono(c, opts);
}

} // namespace fgo
