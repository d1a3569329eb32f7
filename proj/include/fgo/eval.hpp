#pragma once

#include "fgo/ast.hpp"
#include "fgo/fg_typing.hpp"
#include "fgo/fgg_typing.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fgo {

// ============================================================================
// Shared stepping core
// ============================================================================

/// The program-dependent parts of reduction. FG and FGG differ only in how
/// method bodies are looked up and how `<:` is decided at run time.
class Machine {
public:
    virtual ~Machine() = default;
    virtual MethodBody body(const Type& ts, const std::string& method, const TypeList& psi) const = 0;
    virtual std::vector<Field> fields(const Type& ts) const = 0;
    virtual bool implements(const Type& t, const Type& u) const = 0;
    /// Run-time typing of a closed term, admitting stupid assertions.
    virtual Type type_of(const Expr& e) const = 0;
};

struct StepResult {
    enum class Kind { Stepped, Value, Panic, Stuck };
    Kind kind = Kind::Stuck;
    /// The next term (Stepped), the value (Value), or the whole panicking term.
    Expr expr;
    /// For Panic: the value whose assertion failed and the asserted type.
    Expr value;
    Type asserted;
    std::string message;
};

StepResult step(const Machine& m, const Expr& e);

/// Number of decompositions `e = E[r]` with `r` a redex or failing assertion.
/// Determinism of reduction means this never exceeds one.
std::size_t count_redexes(const Machine& m, const Expr& e);

struct RunOptions {
    /// Defaults to `FGO_FUEL` when set, else 10000.
    std::size_t fuel = default_fuel();
    bool dynamic_checks = false;
    bool trace = false;

    static std::size_t default_fuel();
};

struct RunResult {
    enum class Outcome { Value, Panic, FuelExhausted };
    Outcome outcome = Outcome::FuelExhausted;
    Expr result;       // final term
    std::size_t steps = 0;
    Expr panic_value;  // for Panic
    Type panic_type;
    std::vector<Expr> trace;

    bool ok() const { return outcome == Outcome::Value; }
};

/// Iterates `step`. A stuck term, or with dynamic checks a failed
/// preservation check, raises InternalError.
RunResult run(const Machine& m, const Expr& e, const RunOptions& opts = {});

/// `0: term` lines, one per trace entry.
std::string format_trace(const std::vector<Expr>& trace);

std::string outcome_name(RunResult::Outcome o);

// ============================================================================
// FG
// ============================================================================

class FgMachine : public Machine {
public:
    explicit FgMachine(const Program& p) : p_(p), checker_(p) {}
    MethodBody body(const Type& ts, const std::string& method, const TypeList& psi) const override;
    std::vector<Field> fields(const Type& ts) const override;
    bool implements(const Type& t, const Type& u) const override;
    Type type_of(const Expr& e) const override;
    const fg::Checker& checker() const { return checker_; }

private:
    const Program& p_;
    fg::Checker checker_;
};

StepResult step_fg(const Program& p, const Expr& e);
RunResult run_fg(const Program& p, const RunOptions& opts = {});

// ============================================================================
// FGG
// ============================================================================

class FggMachine : public Machine {
public:
    explicit FggMachine(const Program& p) : checker_(p) {}
    MethodBody body(const Type& ts, const std::string& method, const TypeList& psi) const override;
    std::vector<Field> fields(const Type& ts) const override;
    bool implements(const Type& t, const Type& u) const override;
    Type type_of(const Expr& e) const override;
    const FggChecker& checker() const { return checker_; }

private:
    FggChecker checker_;
};

StepResult step_fgg(const Program& p, const Expr& e);
RunResult run_fgg(const Program& p, const RunOptions& opts = {});

} // namespace fgo
