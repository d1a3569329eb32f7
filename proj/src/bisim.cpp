#include "fgo/bisim.hpp"

#include "fgo/parser.hpp"
#include "fgo/pretty.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <filesystem>

namespace fgo {

const char* verdict_name(BisimVerdict::Kind k) {
    switch (k) {
    case BisimVerdict::Kind::Pass: return "pass";
    case BisimVerdict::Kind::Mismatch: return "mismatch";
    case BisimVerdict::Kind::Desync: return "desync";
    case BisimVerdict::Kind::Skipped: return "skipped";
    }
    return "?";
}

std::string BisimVerdict::str() const {
    std::string out = fmt::format("{} after {} steps", verdict_name(kind), steps);
    if (!detail.empty()) out += ": " + detail;
    if (kind == Kind::Mismatch && expected.valid() && actual.valid())
        out += fmt::format("\n  source:   {}\n  expected: {}\n  actual:   {}", pretty(source), pretty(expected),
                           pretty(actual));
    return out;
}

namespace {

const char* kind_text(StepResult::Kind k) {
    switch (k) {
    case StepResult::Kind::Stepped: return "stepped";
    case StepResult::Kind::Value: return "a value";
    case StepResult::Kind::Panic: return "panicked";
    case StepResult::Kind::Stuck: return "stuck";
    }
    return "?";
}

void check_step(const Machine& m, const Expr& before, const Expr& after, const char* side) {
    if (count_redexes(m, before) > 1)
        throw InternalError({"", before.pos(), "determinism",
                             fmt::format("{}: more than one redex in {}", side, pretty(before))});
    Type t0 = m.type_of(before);
    Type t1;
    try {
        t1 = m.type_of(after);
    } catch (const TypeError& e) {
        throw InternalError({"", after.pos(), "preservation",
                             fmt::format("{}: {} is ill typed: {}", side, pretty(after), e.diagnostic().message)});
    }
    if (!m.implements(t1, t0))
        throw InternalError({"", after.pos(), "preservation",
                             fmt::format("{}: {} : {} after {} : {}", side, pretty(after), t1.str(),
                                         pretty(before), t0.str())});
}

} // namespace

BisimVerdict bisim_run(const Program& source, const BisimOptions& opts) {
    BisimVerdict v;
    Program p = expand_embeddings(source);
    MonoResult mono;
    try {
        mono = mono_program(p, opts.mono);
    } catch (const NomonoError& e) {
        v.kind = BisimVerdict::Kind::Skipped;
        v.detail = "nomono-witness: " + e.diagnostic().message;
        return v;
    } catch (const InternalError& e) {
        v.kind = BisimVerdict::Kind::Mismatch;
        v.detail = "translation failed: " + e.diagnostic().str();
        return v;
    }

    FggMachine src(p);
    FgMachine tgt(mono.program);
    Monomorphiser translate(src.checker(), mono.omega, opts.mono);

    Expr d = p.main_body();
    Expr dt = mono.program.main_body();
    auto compare = [&](const Expr& e, const Expr& et) -> bool {
        Expr expected;
        try {
            expected = translate.expr({}, e);
        } catch (const Error& err) {
            v.kind = BisimVerdict::Kind::Mismatch;
            v.detail = "cannot translate term: " + err.diagnostic().message;
            v.source = e;
            return false;
        }
        if (expected == et) return true;
        v.kind = BisimVerdict::Kind::Mismatch;
        v.detail = "translation of the source term differs from the target term";
        v.source = e;
        v.expected = expected;
        v.actual = et;
        return false;
    };
    if (!compare(d, dt)) return v;
    if (opts.trace) v.trace.emplace_back(d, dt);

    try {
        for (;;) {
            StepResult a = step(src, d);
            StepResult b = step(tgt, dt);
            if (a.kind == StepResult::Kind::Stuck || b.kind == StepResult::Kind::Stuck || a.kind != b.kind) {
                v.kind = BisimVerdict::Kind::Desync;
                v.detail = fmt::format("source {}, target {}", kind_text(a.kind), kind_text(b.kind));
                if (!a.message.empty()) v.detail += "; source: " + a.message;
                if (!b.message.empty()) v.detail += "; target: " + b.message;
                return v;
            }
            if (a.kind == StepResult::Kind::Value) {
                v.detail = "both sides are values";
                return v;
            }
            if (a.kind == StepResult::Kind::Panic) {
                Type expected = translate.type({}, a.asserted);
                if (expected != b.asserted) {
                    v.kind = BisimVerdict::Kind::Mismatch;
                    v.detail = fmt::format("panics at different assertions: {} and {}", expected.str(),
                                           b.asserted.str());
                    return v;
                }
                v.detail = fmt::format("both sides panic asserting {}", b.asserted.str());
                return v;
            }
            if (v.steps >= opts.fuel) {
                v.detail = "fuel exhausted on both sides";
                return v;
            }
            if (opts.dynamic_checks) {
                check_step(src, d, a.expr, "source");
                check_step(tgt, dt, b.expr, "target");
            }
            ++v.steps;
            d = a.expr;
            dt = b.expr;
            if (opts.trace) v.trace.emplace_back(d, dt);
            if (!compare(d, dt)) return v;
        }
    } catch (const Error& e) {
        v.kind = BisimVerdict::Kind::Desync;
        v.detail = e.diagnostic().str();
        return v;
    }
}

std::vector<BisimReportEntry> bisim_corpus(const std::string& dir, const BisimOptions& opts) {
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".fgg") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    std::vector<BisimReportEntry> out;
    for (const auto& f : files) {
        BisimReportEntry e{f, {}};
        try {
            Program p = load_program(f, Mode::FGG);
            e.verdict = bisim_run(p, opts);
        } catch (const Error& err) {
            e.verdict.kind = BisimVerdict::Kind::Desync;
            e.verdict.detail = err.diagnostic().str();
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::string format_tap(const std::vector<BisimReportEntry>& entries) {
    std::string out = fmt::format("1..{}\n", entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& [file, v] = entries[i];
        std::string first_line = v.detail.substr(0, v.detail.find('\n'));
        switch (v.kind) {
        case BisimVerdict::Kind::Pass:
            out += fmt::format("ok {} - {} # pass {} steps\n", i + 1, file, v.steps);
            break;
        case BisimVerdict::Kind::Skipped:
            out += fmt::format("ok {} - {} # SKIP {}\n", i + 1, file, first_line);
            break;
        default:
            out += fmt::format("not ok {} - {} # {}: {}\n", i + 1, file, verdict_name(v.kind), first_line);
            break;
        }
    }
    return out;
}

} // namespace fgo
