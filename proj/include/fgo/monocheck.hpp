#pragma once

#include "fgo/instances.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fgo {

/// Evidence that a method may need unboundedly many instances.
struct OccursWitness {
    std::string receiver_type;
    std::string method;
    Instance instance;
    std::string param;
    Type offending;
    std::size_t iteration = 0;

    /// `Box.Nest: iteration 1: Box(Box(a)).Nest(): a occurs in Box(a)`
    std::string str() const;
};

/// `Φ ≺ φ`: some parameter occurs strictly inside its own actual.
/// Throws std::invalid_argument on an arity mismatch.
bool occurs(const TypeFormals& formals, const TypeList& actuals);

/// The first position at which `occurs` holds.
std::optional<std::size_t> occurs_at(const TypeFormals& formals, const TypeList& actuals);

struct MonocheckOptions {
    /// Safety cap on dovetailing rounds; exceeding it is reported as an
    /// internal error.
    std::size_t max_rounds = 1000;
};

/// Runs the open-instance fixpoint for one method to completion.
std::optional<OccursWitness> check_method(const FggChecker& c, const MethodDecl& d,
                                          const MonocheckOptions& opts = {});

struct MonocheckResult {
    std::vector<OccursWitness> witnesses;
    std::size_t rounds = 0;

    bool ok() const { return witnesses.empty(); }
};

/// Dovetails the per-method checks (and the closed fixpoint of `main`),
/// one extension step per participant per round. Stops after the first
/// round that produces a witness, or once every method has reached its
/// fixpoint.
MonocheckResult check_program_mono(const FggChecker& c, const MonocheckOptions& opts = {});
MonocheckResult check_program_mono(const Program& p, const MonocheckOptions& opts = {});

} // namespace fgo
