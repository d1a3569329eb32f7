#pragma once

#include "fgo/eval.hpp"
#include "fgo/monomorphise.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace fgo {

struct BisimOptions {
    std::size_t fuel = RunOptions::default_fuel();
    /// Also assert determinism and preservation on both sides at every step.
    bool dynamic_checks = false;
    bool trace = false;
    MonoOptions mono;
};

struct BisimVerdict {
    enum class Kind { Pass, Mismatch, Desync, Skipped };
    Kind kind = Kind::Pass;
    /// Steps taken in lockstep.
    std::size_t steps = 0;
    /// How the run ended, or what went wrong.
    std::string detail;
    /// For Mismatch: the source term, its translation, and the FG term reached.
    Expr source;
    Expr expected;
    Expr actual;
    /// Pairs of terms visited, when tracing.
    std::vector<std::pair<Expr, Expr>> trace;

    bool passed() const { return kind == Kind::Pass; }
    std::string str() const;
};

const char* verdict_name(BisimVerdict::Kind k);

/// Steps the FGG program and its translation together, comparing the
/// translation of each FGG term with the FG term reached.
BisimVerdict bisim_run(const Program& p, const BisimOptions& opts = {});

struct BisimReportEntry {
    std::string file;
    BisimVerdict verdict;
};

/// Runs every `.fgg` file of `dir` in name order. Unreadable or ill-formed
/// files are reported as Desync with the error.
std::vector<BisimReportEntry> bisim_corpus(const std::string& dir, const BisimOptions& opts = {});

/// TAP lines: `1..N`, then `ok 1 - file # pass 12 steps` or `not ok ...`.
std::string format_tap(const std::vector<BisimReportEntry>& entries);

} // namespace fgo
