#pragma once

#include "fgo/fgg_typing.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fgo {

/// Either a type instance `τ` or a method instance `τ.m(ψ)`.
struct Instance {
    Type type;
    std::optional<std::string> method;
    TypeList psi;

    static Instance of_type(Type t) { return {std::move(t), std::nullopt, {}}; }
    static Instance of_method(Type t, std::string m, TypeList psi) {
        return {std::move(t), std::move(m), std::move(psi)};
    }

    bool is_method() const { return method.has_value(); }
    bool closed() const;
    /// `List(int)` or `List(int).Map(bool)`.
    std::string str() const;

    friend bool operator==(const Instance& a, const Instance& b);
    friend bool operator<(const Instance& a, const Instance& b);
};

using InstanceSet = std::set<Instance>;

std::string format_instances(const InstanceSet& s);

/// `Δ; Γ ⊢ e ▸ ω`.
InstanceSet collect_expr(const FggChecker& c, const TypeEnv& delta, const ValueEnv& gamma,
                         const Expr& e);

/// Instances of the program's `main`, both as written (each `var` typed at
/// its declared type) and after the bindings are substituted away.
InstanceSet collect_main(const FggChecker& c);

/// Which of the four extension functions `extend_once` applies. All are on
/// for the real analysis; tests switch them off individually.
struct Extensions {
    bool fields = true;
    bool methods = true;
    bool interfaces = true;
    bool structs = true;
};

/// `G_Δ(ω)`.
InstanceSet extend_once(const FggChecker& c, const TypeEnv& delta, const InstanceSet& omega,
                        const Extensions& ext = {});

struct OmegaOptions {
    std::size_t max_iterations = 1000;
    std::size_t max_instances = 1000000;
    Extensions ext;
};

struct DivergenceGuard {
    std::size_t iterations = 0;
    std::size_t previous_size = 0;
    std::size_t last_size = 0;
    /// A few of the instances added by the last iteration.
    std::vector<Instance> fresh_sample;

    std::string str() const;
};

struct OmegaResult {
    InstanceSet set;
    /// Number of applications of G that added something.
    std::size_t iterations = 0;
    std::optional<DivergenceGuard> diverged;

    bool ok() const { return !diverged; }
};

/// Iterates `G_∅` from the instances of the main body up to a fixpoint or
/// the budget. The program must already be well typed.
OmegaResult omega(const FggChecker& c, const OmegaOptions& opts = {});
OmegaResult omega(const Program& p, const OmegaOptions& opts = {});

} // namespace fgo
