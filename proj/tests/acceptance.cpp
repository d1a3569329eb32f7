// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "support/support.hpp"

#include "fgo/bisim.hpp"
#include "fgo/enumerate.hpp"
#include "fgo/eval.hpp"
#include "fgo/fg_typing.hpp"
#include "fgo/monocheck.hpp"
#include "fgo/monomorphise.hpp"
#include "fgo/parser.hpp"
#include "fgo/pretty.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

using namespace fgo;
using namespace fgo::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void fail(std::string why) {
        pass = false;
        notes.push_back(std::move(why));
    }
    void note(std::string what) { notes.push_back(std::move(what)); }
};

std::vector<std::string> fgg_corpus() { return files_in("corpus/fgg", ".fgg"); }

// ---------------------------------------------------------------------------

Outcome evaluation() {
    struct Case {
        const char* file;
        const char* expected;
    };
    const Case cases[] = {
        {"corpus/fg/functions.fg", "false"},
        {"corpus/fg/incr.fg", "-2"},
        {"corpus/fg/equality.fg", "true"},
        {"corpus/fgg/equality.fgg", "true"},
        {"corpus/fgg/expression_eval.fgg", "3"},
        {"corpus/fgg/expression_string.fgg", "\"(1+2)\""},
    };
    Outcome o;
    for (const auto& c : cases) {
        auto start = Clock::now();
        Program p = load(c.file);
        RunResult r = p.mode == Mode::FG ? run_fg(p) : run_fgg(p);
        double t = seconds_since(start);
        std::string got = r.ok() ? pretty(r.result) : outcome_name(r.outcome);
        if (got != c.expected) o.fail(fmt::format("{}: expected {}, got {}", c.file, c.expected, got));
        if (t >= 1.0) o.fail(fmt::format("{}: took {:.2f}s", c.file, t));
        o.note(fmt::format("{} -> {} ({:.3f}s)", c.file, got, t));
    }
    return o;
}

Outcome instance_set() {
    Outcome o;
    Program p = load("corpus/fgg/dispatcher.fgg");
    OmegaResult r = omega(p);
    std::vector<std::string> got;
    for (const auto& i : r.set) got.push_back(i.str());
    std::vector<std::string> want = {"Dispatcher", "Dispatcher.Dispatch()", "Event", "Event.Process(Int)",
                                     "Int", "UIEvent", "UIEvent.Process(Int)"};
    std::sort(want.begin(), want.end());
    if (got != want) o.fail(fmt::format("instance set is {{{}}}", fmt::join(got, ", ")));
    if (r.iterations != 2) o.fail(fmt::format("fixpoint after {} iterations", r.iterations));
    o.note(fmt::format("{} instances, {} iterations", got.size(), r.iterations));
    return o;
}

Outcome translation_goldens() {
    Outcome o;
    const std::pair<const char*, const char*> cases[] = {
        {"corpus/fgg/dispatcher.fgg", "golden/dispatcher.fg"},
        {"corpus/fgg/lists.fgg", "golden/lists_mono.fg"},
    };
    for (const auto& [source, golden] : cases) {
        Program out = normalise_fg(mono_program(load(source)).program);
        Program want = normalise_fg(load(golden));
        std::string diff = diff_lines(pretty(want), pretty(out));
        if (!(out == want) || !diff.empty())
            o.fail(fmt::format("{} differs from {}:\n{}", source, golden, diff));
        else
            o.note(fmt::format("{} matches {} (0 diffs)", source, golden));
    }
    return o;
}

Outcome non_monomorphisable() {
    Outcome o;
    auto start = Clock::now();
    MonocheckResult box = check_program_mono(load("corpus/nomono/box.fgg"));
    double t = seconds_since(start);
    if (box.ok()) {
        o.fail("box.fgg passed the check");
    } else {
        const OccursWitness& w = box.witnesses.front();
        std::string text = w.str();
        if (w.receiver_type != "Box" || text.find("Box(Box(") == std::string::npos)
            o.fail("witness does not describe Box nesting: " + text);
        o.note("witness: " + text);
    }
    if (t >= 1.0) o.fail(fmt::format("box.fgg took {:.2f}s", t));
    for (const auto& f : fgg_corpus()) {
        auto s = Clock::now();
        MonocheckResult r = check_program_mono(load_program(f, Mode::FGG));
        double dt = seconds_since(s);
        if (!r.ok()) o.fail(fmt::format("{}: {}", f, r.witnesses.front().str()));
        if (dt >= 1.0) o.fail(fmt::format("{}: took {:.2f}s", f, dt));
    }
    o.note(fmt::format("{} monomorphisable corpus programs accepted", fgg_corpus().size()));
    return o;
}

Outcome soundness() {
    Outcome o;
    std::size_t n = 0;
    for (const auto& f : fgg_corpus()) {
        try {
            MonoOptions opts;
            opts.check_output = false;
            Program out = mono_program(load_program(f, Mode::FGG), opts).program;
            auto diags = fg::check_program_fg(out);
            if (!diags.empty()) o.fail(fmt::format("{}: {}", f, format_diagnostics(diags)));
            ++n;
        } catch (const Error& e) {
            o.fail(fmt::format("{}: {}", f, e.diagnostic().str()));
        }
    }
    o.note(fmt::format("{} translations type check", n));
    return o;
}

Outcome bisimulation() {
    Outcome o;
    std::size_t panics = 0;
    for (const auto& e : bisim_corpus(test_path("corpus/fgg"))) {
        if (!e.verdict.passed()) o.fail(fmt::format("{}: {}", e.file, e.verdict.str()));
        if (e.verdict.detail.find("panic") != std::string::npos) ++panics;
    }
    o.note(fmt::format("{} programs, {} panic-correspondence cases", fgg_corpus().size(), panics));
    if (panics == 0) o.fail("no panic-correspondence case in the corpus");
    return o;
}

Outcome dynamic_metatheory() {
    Outcome o;
    RunOptions ro;
    ro.dynamic_checks = true;
    std::size_t steps = 0, programs = 0;
    auto run_one = [&](const std::string& name, const Program& p, bool fgg) {
        try {
            RunResult r = fgg ? run_fgg(p, ro) : run_fg(p, ro);
            steps += r.steps;
            ++programs;
            if (r.outcome == RunResult::Outcome::FuelExhausted) o.note(name + ": fuel exhausted");
        } catch (const Error& e) {
            o.fail(fmt::format("{}: {}", name, e.diagnostic().str()));
        }
    };
    for (const auto& f : files_in("corpus/fg", ".fg")) run_one(f, load_program(f, Mode::FG), false);
    for (const auto& f : fgg_corpus()) {
        Program p = load_program(f, Mode::FGG);
        run_one(f, p, true);
        run_one(f + " (translated)", mono_program(p).program, false);
    }
    BisimOptions bo;
    bo.dynamic_checks = true;
    for (const auto& e : bisim_corpus(test_path("corpus/fgg"), bo))
        if (!e.verdict.passed()) o.fail(fmt::format("{}: {}", e.file, e.verdict.str()));
    o.note(fmt::format("{} runs, {} checked steps, 0 violations expected", programs, steps));
    return o;
}

Outcome property_suites() {
    Outcome o;
    std::size_t n = 0;
    auto check = [&](const std::string& name, const Program& p) {
        try {
            if (auto v = check_properties(p)) o.fail(fmt::format("{}: {}", name, *v));
        } catch (const NomonoError&) {
            return;
        } catch (const Error& e) {
            o.fail(fmt::format("{}: {}", name, e.diagnostic().str()));
        }
        ++n;
    };
    for (const auto& f : fgg_corpus()) check(f, load_program(f, Mode::FGG));
    EnumerateOptions eo;
    eo.max_size = 10;
    std::size_t index = 0;
    enumerate(eo, [&](const Program& p) {
        check(fmt::format("enumerated #{}:\n{}", index++, pretty(p)), p);
        return o.notes.size() < 5;
    });
    o.note(fmt::format("{} programs (corpus + enumeration to size 10)", n));
    return o;
}

Outcome scaled_experiment(std::size_t size, std::size_t mutation_size) {
    Outcome o;
    PipelineOptions po;
    po.enumerate.max_size = size;
    PipelineReport rep = fuzz_pipeline(po);
    if (rep.ill_typed) o.fail(fmt::format("{} generated programs are ill typed", rep.ill_typed));
    for (const auto& f : rep.failures) o.fail(fmt::format("#{}: {}\n{}", f.index, f.verdict.str(), pretty(f.program)));
    if (rep.seconds >= 600) o.fail(fmt::format("took {:.0f}s", rep.seconds));
    o.note(fmt::format("size <= {}: {} programs, {} passed, {} skipped, {:.1f}s", size, rep.programs, rep.passed,
                       rep.skipped, rep.seconds));

    for (Mutation m : all_mutations()) {
        std::size_t corpus_caught = 0;
        BisimOptions bo;
        bo.mono.mutation = m;
        for (const auto& e : bisim_corpus(test_path("corpus/fgg"), bo))
            if (!e.verdict.passed() && e.verdict.kind != BisimVerdict::Kind::Skipped) ++corpus_caught;
        PipelineOptions mo;
        mo.enumerate.max_size = mutation_size;
        mo.bisim.mono.mutation = m;
        mo.stop_after = 1;
        mo.shrink = false;
        PipelineReport mr = fuzz_pipeline(mo);
        std::size_t enum_caught = mr.failures.size();
        if (corpus_caught + enum_caught == 0)
            o.fail(fmt::format("mutation {} not caught", mutation_name(m)));
        o.note(fmt::format("mutation {}: {} corpus failures, {} enumerated failures (size <= {}, first stops)",
                           mutation_name(m), corpus_caught, enum_caught, mutation_size));
    }
    return o;
}

} // namespace

int main(int argc, char** argv) {
    std::size_t size = 12;
    if (const char* s = std::getenv("FGO_ACCEPTANCE_SIZE")) size = std::strtoul(s, nullptr, 10);
    std::size_t mutation_size = 10;
    if (const char* s = std::getenv("FGO_MUTATION_SIZE")) mutation_size = std::strtoul(s, nullptr, 10);
    bool verbose = argc > 1 && std::strcmp(argv[1], "-v") == 0;

    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"example evaluation", evaluation},
        {"instance-set reproduction (Dispatcher)", instance_set},
        {"translation golden tests", translation_goldens},
        {"non-monomorphisability", non_monomorphisable},
        {"soundness: translations type check", soundness},
        {"bisimulation on the corpus", bisimulation},
        {"dynamic preservation and progress", dynamic_metatheory},
        {"property suites", property_suites},
        {"scaled enumeration experiment and mutations", [size, mutation_size] { return scaled_experiment(size, mutation_size); }},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, fn] : criteria) {
        ++index;
        auto start = Clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        std::printf("[%s] %d. %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", index, name, seconds_since(start));
        if (!o.pass || verbose)
            for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
