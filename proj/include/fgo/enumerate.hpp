#pragma once

#include "fgo/ast.hpp"
#include "fgo/bisim.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace fgo {

/// Shape limits of generated programs. Sizes follow `symbol_count`.
struct EnumerateOptions {
    std::size_t max_size = 8;
    std::size_t min_size = 1;
    std::size_t max_fields = 2;
    std::size_t max_params = 2;
    std::size_t max_specs = 2;
    std::size_t max_type_params = 2;
    std::size_t max_empty_interfaces = 1;
    std::size_t max_empty_structs = 2;
    /// Programs need at least one method declaration and one struct field.
    bool require_method = true;
    bool require_field = true;
};

/// Invoked once per generated program; returning false stops the enumeration.
using ProgramSink = std::function<bool(const Program&)>;

/// Generates FGG programs of size `min_size..max_size`, smaller sizes first.
/// Within one size, type declarations vary slowest and `main` fastest.
/// Returns the number of programs passed to `sink`.
std::size_t enumerate(const EnumerateOptions& opts, const ProgramSink& sink);

/// Number of programs of each size `0..max_size`.
std::vector<std::size_t> enumerate_counts(const EnumerateOptions& opts);

struct PipelineOptions {
    EnumerateOptions enumerate;
    BisimOptions bisim = [] {
        BisimOptions b;
        b.fuel = 200;
        return b;
    }();
    /// Worker threads for checking; 0 picks the hardware concurrency.
    std::size_t workers = 0;
    /// Stop generating once this many failures are known; 0 means never.
    std::size_t stop_after = 0;
    bool shrink = true;
};

struct PipelineFailure {
    /// Position of the program in the enumeration.
    std::size_t index = 0;
    Program program;
    BisimVerdict verdict;
};

struct PipelineReport {
    std::size_t programs = 0;
    /// Generated programs rejected by the checker; nonzero is a generator bug.
    std::size_t ill_typed = 0;
    std::size_t passed = 0;
    /// Rejected by the monomorphisability check.
    std::size_t skipped = 0;
    std::vector<PipelineFailure> failures;
    double seconds = 0;

    bool ok() const { return ill_typed == 0 && failures.empty(); }
    std::string str() const;
};

/// Enumerates programs and runs the bisimulation test on each, shrinking
/// any failures.
PipelineReport fuzz_pipeline(const PipelineOptions& opts);

/// Removes declarations from `p` while the result still type checks and
/// `still_fails` holds of it.
Program shrink(const Program& p, const std::function<bool(const Program&)>& still_fails);

} // namespace fgo
