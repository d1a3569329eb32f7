#include "fgo/bisim.hpp"
#include "fgo/enumerate.hpp"
#include "fgo/eval.hpp"
#include "fgo/fg_typing.hpp"
#include "fgo/fgg_typing.hpp"
#include "fgo/instances.hpp"
#include "fgo/monocheck.hpp"
#include "fgo/monomorphise.hpp"
#include "fgo/parser.hpp"
#include "fgo/pretty.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using json = nlohmann::json;
using namespace fgo;

namespace {

struct Globals {
    bool dynamic_checks = false;
    std::size_t fuel = RunOptions::default_fuel();
    bool json = false;
    const CLI::Option* fuel_option = nullptr;

    bool fuel_given() const { return fuel_option && fuel_option->count() > 0; }
};

/// Emits either the JSON report or the human text, and yields the exit code.
int finish(const Globals& g, json report, const std::string& text, bool ok) {
    report["ok"] = ok;
    if (g.json)
        std::cout << report.dump(2) << "\n";
    else if (!text.empty())
        std::cout << text << (text.back() == '\n' ? "" : "\n");
    return ok ? 0 : 1;
}

json diagnostic_json(const Diagnostic& d) {
    return {{"file", d.file}, {"line", d.pos.line}, {"col", d.pos.col}, {"rule", d.rule}, {"message", d.message}};
}

int report_error(const Globals& g, json report, const Error& e) {
    report["error"] = diagnostic_json(e.diagnostic());
    if (!g.json) std::cerr << e.diagnostic().str() << "\n";
    return finish(g, std::move(report), "", false);
}

int report_diagnostics(const Globals& g, json report, const std::vector<Diagnostic>& ds) {
    json arr = json::array();
    for (const auto& d : ds) arr.push_back(diagnostic_json(d));
    report["diagnostics"] = arr;
    if (!g.json && !ds.empty()) std::cerr << format_diagnostics(ds);
    return finish(g, std::move(report), ds.empty() ? "ok" : "", ds.empty());
}

int cmd_check(const Globals& g, const std::string& file, Mode mode) {
    json r{{"command", mode == Mode::FG ? "check-fg" : "check-fgg"}, {"file", file}};
    try {
        Program p = load_program(file, mode);
        return report_diagnostics(g, r, mode == Mode::FG ? fg::check_program_fg(p) : check_program_fgg(p));
    } catch (const Error& e) {
        return report_error(g, r, e);
    }
}

int cmd_run(const Globals& g, const std::string& file, Mode mode, bool trace) {
    json r{{"command", mode == Mode::FG ? "run-fg" : "run-fgg"}, {"file", file}};
    try {
        Program p = load_program(file, mode);
        auto diags = mode == Mode::FG ? fg::check_program_fg(p) : check_program_fgg(p);
        if (!diags.empty()) return report_diagnostics(g, r, diags);
        RunOptions opts;
        opts.fuel = g.fuel;
        opts.dynamic_checks = g.dynamic_checks;
        opts.trace = trace;
        RunResult res = mode == Mode::FG ? run_fg(p, opts) : run_fgg(p, opts);
        r["outcome"] = outcome_name(res.outcome);
        r["steps"] = res.steps;
        r["result"] = pretty(res.result);
        std::string text;
        if (trace) text += format_trace(res.trace);
        switch (res.outcome) {
        case RunResult::Outcome::Value:
            text += pretty(res.result);
            break;
        case RunResult::Outcome::Panic:
            r["panic"] = {{"value", pretty(res.panic_value)}, {"asserted", res.panic_type.str()}};
            text += fmt::format("panic: {} does not implement {}", pretty(res.panic_value), res.panic_type.str());
            break;
        case RunResult::Outcome::FuelExhausted:
            text += fmt::format("fuel exhausted after {} steps: {}", res.steps, pretty(res.result));
            break;
        }
        if (trace) {
            json t = json::array();
            for (const auto& e : res.trace) t.push_back(pretty(e));
            r["trace"] = t;
        }
        return finish(g, r, text, res.ok());
    } catch (const Error& e) {
        return report_error(g, r, e);
    }
}

Program load_checked_fgg(const std::string& file) {
    Program p = load_program(file, Mode::FGG);
    if (auto ds = check_program_fgg(p); !ds.empty()) throw TypeError(ds.front());
    return p;
}

int cmd_omega(const Globals& g, const std::string& file, std::size_t budget) {
    json r{{"command", "omega"}, {"file", file}};
    try {
        Program p = load_checked_fgg(file);
        OmegaOptions oo;
        oo.max_iterations = budget;
        OmegaResult om = omega(p, oo);
        json insts = json::array();
        for (const auto& i : om.set) insts.push_back(i.str());
        r["instances"] = insts;
        r["iterations"] = om.iterations;
        std::string text = format_instances(om.set);
        if (om.diverged) {
            r["diverged"] = om.diverged->str();
            text += "diverged: " + om.diverged->str();
        }
        return finish(g, r, text, om.ok());
    } catch (const Error& e) {
        return report_error(g, r, e);
    }
}

int cmd_nomono(const Globals& g, const std::string& file) {
    json r{{"command", "nomono"}, {"file", file}};
    try {
        Program p = load_checked_fgg(file);
        MonocheckResult mc = check_program_mono(p);
        json ws = json::array();
        std::string text;
        for (const auto& w : mc.witnesses) {
            ws.push_back({{"receiver", w.receiver_type},
                          {"method", w.method},
                          {"instance", w.instance.str()},
                          {"param", w.param},
                          {"type", w.offending.str()},
                          {"iteration", w.iteration}});
            text += w.str() + "\n";
        }
        r["witnesses"] = ws;
        r["rounds"] = mc.rounds;
        return finish(g, r, mc.ok() ? "monomorphisable" : text, mc.ok());
    } catch (const Error& e) {
        return report_error(g, r, e);
    }
}

int cmd_mono(const Globals& g, const std::string& file, const std::string& out, bool go_compat,
             bool emit_omega, bool explicit_empty) {
    json r{{"command", "mono"}, {"file", file}};
    try {
        Program p = load_checked_fgg(file);
        MonoOptions mo;
        mo.explicit_empty_args = explicit_empty;
        MonoResult m = mono_program(p, mo);
        PrettyOptions po;
        po.glyphs = go_compat ? Glyphs::GoCompat : Glyphs::Ascii;
        std::string text = pretty(m.program, po);
        if (!out.empty()) {
            std::ofstream f(out, std::ios::binary);
            if (!f) throw Error({out, {}, "io", "cannot write file"});
            f << text;
            text.clear();
        }
        if (emit_omega) {
            json insts = json::array();
            for (const auto& i : m.omega) insts.push_back(i.str());
            r["instances"] = insts;
            if (!g.json) std::cerr << format_instances(m.omega);
        }
        r["program"] = pretty(m.program, po);
        return finish(g, r, text, true);
    } catch (const NomonoError& e) {
        return report_error(g, r, e);
    } catch (const Error& e) {
        return report_error(g, r, e);
    }
}

json verdict_json(const BisimVerdict& v) {
    return {{"verdict", verdict_name(v.kind)}, {"steps", v.steps}, {"detail", v.detail}};
}

int cmd_bisim(const Globals& g, const std::string& target, bool trace) {
    json r{{"command", "bisim"}, {"file", target}};
    BisimOptions bo;
    bo.fuel = g.fuel;
    bo.dynamic_checks = g.dynamic_checks;
    bo.trace = trace;
    try {
        std::vector<BisimReportEntry> entries;
        if (target != "-" && std::filesystem::is_directory(target)) {
            entries = bisim_corpus(target, bo);
        } else {
            entries.push_back({target, bisim_run(load_checked_fgg(target), bo)});
        }
        bool ok = true;
        json files = json::array();
        std::string text;
        for (const auto& e : entries) {
            ok = ok && (e.verdict.kind == BisimVerdict::Kind::Pass || e.verdict.kind == BisimVerdict::Kind::Skipped);
            json j = verdict_json(e.verdict);
            j["file"] = e.file;
            if (trace) {
                json t = json::array();
                for (const auto& [a, b] : e.verdict.trace) t.push_back({pretty(a), pretty(b)});
                j["trace"] = t;
                for (std::size_t i = 0; i < e.verdict.trace.size(); ++i)
                    text += fmt::format("{}: {}\n{}  ~ {}\n", i, pretty(e.verdict.trace[i].first),
                                        std::string(std::to_string(i).size(), ' '),
                                        pretty(e.verdict.trace[i].second));
            }
            files.push_back(j);
        }
        r["results"] = files;
        text += format_tap(entries);
        for (const auto& e : entries)
            if (e.verdict.kind == BisimVerdict::Kind::Mismatch) text += "# " + e.verdict.str() + "\n";
        return finish(g, r, text, ok);
    } catch (const Error& e) {
        return report_error(g, r, e);
    }
}

int cmd_enumerate(const Globals& g, std::size_t size, bool count_only, bool run_bisim) {
    json r{{"command", "enumerate"}, {"size", size}};
    EnumerateOptions eo;
    eo.max_size = size;
    if (!run_bisim) {
        std::vector<std::size_t> by_size(size + 1, 0);
        std::size_t total = 0;
        std::string text;
        enumerate(eo, [&](const Program& p) {
            ++total;
            std::size_t n = symbol_count(p);
            if (n < by_size.size()) ++by_size[n];
            if (!count_only && !g.json) text += pretty(p) + "\n";
            return true;
        });
        r["total"] = total;
        r["by_size"] = by_size;
        std::string summary = fmt::format("{} programs", total);
        return finish(g, r, count_only ? summary : text + summary, true);
    }
    PipelineOptions po;
    po.enumerate = eo;
    if (g.fuel_given()) po.bisim.fuel = g.fuel;
    po.bisim.dynamic_checks = g.dynamic_checks;
    PipelineReport rep = fuzz_pipeline(po);
    r["programs"] = rep.programs;
    r["ill_typed"] = rep.ill_typed;
    r["passed"] = rep.passed;
    r["skipped"] = rep.skipped;
    json fails = json::array();
    for (const auto& f : rep.failures) fails.push_back({{"program", pretty(f.program)}, {"verdict", verdict_json(f.verdict)}});
    r["failures"] = fails;
    return finish(g, r, rep.str(), rep.ok());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Featherweight Go and Featherweight Generic Go toolkit"};
    app.require_subcommand(1);
    Globals g;
    app.add_flag("--dynamic-checks", g.dynamic_checks, "Check determinism and preservation at every step");
    g.fuel_option = app.add_option("--fuel", g.fuel,
                                   "Reduction step limit (default: FGO_FUEL or 10000; 200 for enumerate)");
    app.add_flag("--json", g.json, "Machine-readable output");

    std::string file;
    int code = 0;

    auto* check_fg = app.add_subcommand("check-fg", "Type check an FG program");
    check_fg->add_option("file", file, "Program, or - for standard input")->required();
    check_fg->callback([&] { code = cmd_check(g, file, Mode::FG); });

    bool trace = false;
    auto* run_fg_cmd = app.add_subcommand("run-fg", "Evaluate an FG program");
    run_fg_cmd->add_option("file", file)->required();
    run_fg_cmd->add_flag("--trace", trace, "Print every intermediate term");
    run_fg_cmd->callback([&] { code = cmd_run(g, file, Mode::FG, trace); });

    auto* check_fgg = app.add_subcommand("check-fgg", "Type check an FGG program");
    check_fgg->add_option("file", file)->required();
    check_fgg->callback([&] { code = cmd_check(g, file, Mode::FGG); });

    auto* run_fgg_cmd = app.add_subcommand("run-fgg", "Evaluate an FGG program");
    run_fgg_cmd->add_option("file", file)->required();
    run_fgg_cmd->add_flag("--trace", trace, "Print every intermediate term");
    run_fgg_cmd->callback([&] { code = cmd_run(g, file, Mode::FGG, trace); });

    std::size_t budget = OmegaOptions{}.max_iterations;
    auto* omega_cmd = app.add_subcommand("omega", "Print the instance set of an FGG program");
    omega_cmd->add_option("file", file)->required();
    omega_cmd->add_option("--budget", budget, "Iteration limit of the fixpoint");
    omega_cmd->callback([&] { code = cmd_omega(g, file, budget); });

    auto* nomono = app.add_subcommand("nomono", "Run the monomorphisability check");
    nomono->add_option("file", file)->required();
    nomono->callback([&] { code = cmd_nomono(g, file); });

    std::string out;
    bool go_compat = false, emit_omega = false, explicit_empty = false;
    auto* mono = app.add_subcommand("mono", "Translate an FGG program to FG");
    mono->add_option("file", file)->required();
    mono->add_option("-o,--output", out, "Write the FG program here instead of standard output");
    mono->add_flag("--go-compat", go_compat, "Use Go-compatible glyphs in generated names");
    mono->add_flag("--emit-omega", emit_omega, "Also print the instance set (to standard error)");
    mono->add_flag("--explicit-empty", explicit_empty, "Write nullary type arguments as t<>");
    mono->callback([&] { code = cmd_mono(g, file, out, go_compat, emit_omega, explicit_empty); });

    auto* bisim = app.add_subcommand("bisim", "Bisimulation test of a program or a directory of programs");
    bisim->add_option("target", file)->required();
    bisim->add_flag("--trace", trace, "Print both sides at every step");
    bisim->callback([&] { code = cmd_bisim(g, file, trace); });

    std::size_t size = 8;
    bool count_only = false, run_bisim = false;
    auto* en = app.add_subcommand("enumerate", "Enumerate well-typed FGG programs up to a size");
    en->add_option("--size", size, "Size bound (method and type symbol occurrences)")->required();
    en->add_flag("--count-only", count_only, "Only print how many programs there are");
    en->add_flag("--run-bisim", run_bisim, "Check and bisimulate every program");
    en->callback([&] { code = cmd_enumerate(g, size, count_only, run_bisim); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return code;
}
