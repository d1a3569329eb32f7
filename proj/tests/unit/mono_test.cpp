#include "support/support.hpp"

#include "fgo/bisim.hpp"
#include "fgo/fg_typing.hpp"
#include "fgo/monomorphise.hpp"
#include "fgo/parser.hpp"
#include "fgo/pretty.hpp"

#include <gtest/gtest.h>

using namespace fgo;
using namespace fgo::testing;

namespace {

Type T(const char* src) { return parse_type(src, {.extended = true}); }

} // namespace

TEST(Mangler, TypeNames) {
    NameMangler m;
    EXPECT_EQ(m.type(T("int")), "int");
    EXPECT_EQ(m.type(T("List(int)")), "List<int>");
    EXPECT_EQ(m.type(T("Pair(List(int), bool)")), "Pair<List<int>,bool>");
    NameMangler explicit_empty(true);
    EXPECT_EQ(explicit_empty.type(T("f(g, h)")), "f<g<>,h<>>");
    EXPECT_EQ(explicit_empty.type(T("g")), "g");
}

TEST(Mangler, MethodNames) {
    NameMangler m;
    EXPECT_EQ(m.method("Map", {}), "Map");
    EXPECT_EQ(m.method("Map", {T("bool")}), "Map<bool>");
    EXPECT_EQ(m.method("Zip", {T("int"), T("List(int)")}), "Zip<int,List<int>>");
}

TEST(Mangler, DemangleInvertsTypeNames) {
    for (bool explicit_empty : {false, true}) {
        NameMangler m(explicit_empty);
        for (const char* src : {"int", "List(int)", "Pair(List(int), bool)", "f(g(h), Pair(a, b))"}) {
            Type t = T(src);
            auto back = m.demangle(m.type(t));
            ASSERT_TRUE(back.has_value()) << src;
            EXPECT_EQ(*back, t) << src;
        }
    }
    NameMangler m;
    EXPECT_EQ(m.demangle("List<int"), std::nullopt);
    EXPECT_EQ(m.demangle("<>"), std::nullopt);
}

TEST(Mangler, GoCompatibleGlyphs) {
    EXPECT_EQ(render_identifier("Pair<int,bool>", Glyphs::GoCompat), "Pairᐸintᐨboolᐳ");
    EXPECT_EQ(render_identifier("Pair<int,bool>", Glyphs::Ascii), "Pair<int,bool>");
}

TEST(Hasher, NumbersAlphaEquivalenceClasses) {
    auto sig = [](const char* src) {
        Program p = parse(std::string("package main\ntype Any interface {}\ntype I interface { ") + src +
                          " }\ntype U struct {}\nfunc main() { _ = U{} }\n");
        return p.find_type("I")->specs[0].sig;
    };
    SignatureHasher h;
    std::size_t a = h.number("M", sig("M(type a Any)(x a) a"));
    std::size_t b = h.number("M", sig("M(type b Any)(y b) b"));
    std::size_t c = h.number("M", sig("M(type b Any)(y b) Any"));
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    EXPECT_EQ(h.size(), 2u);
    EXPECT_EQ(SignatureHasher::key("M", sig("M(type a Any)(x a) a")), SignatureHasher::key("M", sig("M(type q Any)(z q) q")));

    SignatureHasher constant(true);
    EXPECT_EQ(constant.number("M", sig("M(type a Any)(x a) a")), constant.number("M", sig("M(type b Any)(y b) Any")));
}

TEST(Mono, GoldenTranslations) {
    const std::pair<const char*, const char*> cases[] = {
        {"corpus/fgg/dispatcher.fgg", "golden/dispatcher.fg"},
        {"corpus/fgg/lists.fgg", "golden/lists_mono.fg"},
    };
    for (const auto& [source, golden] : cases) {
        Program out = normalise_fg(mono_program(load(source)).program);
        Program want = normalise_fg(load(golden));
        EXPECT_EQ(out, want) << source << "\n" << diff_lines(pretty(want), pretty(out));
    }
}

TEST(Mono, NormalisationIsIdempotent) {
    for (const auto& f : files_in("corpus/fgg", ".fgg")) {
        Program once = normalise_fg(mono_program(load_program(f, Mode::FGG)).program);
        EXPECT_EQ(normalise_fg(once), once) << f;
    }
}

TEST(Mono, OutputTypeChecksAndReparses) {
    for (const auto& f : files_in("corpus/fgg", ".fgg")) {
        MonoOptions o;
        o.check_output = false;
        Program out = mono_program(load_program(f, Mode::FGG), o).program;
        EXPECT_EQ(out.mode, Mode::FG);
        EXPECT_TRUE(fg::check_program_fg(out).empty()) << f << "\n" << pretty(out);
        Program again = load_source(pretty(out), f, Mode::FG);
        EXPECT_EQ(again, out) << f;
        Program go = load_source(pretty(out, {Glyphs::GoCompat}), f, Mode::FG);
        EXPECT_TRUE(fg::check_program_fg(go).empty()) << f;
    }
}

TEST(Mono, TopTypeAvoidsDeclaredNames) {
    MonoResult r = mono_program(load("corpus/fgg/var_interface.fgg"));
    EXPECT_EQ(r.program.find_type("Top"), nullptr);
    ASSERT_NE(r.program.find_type("Top1"), nullptr);
    const TypeDecl* idish = r.program.find_type("Idish");
    ASSERT_NE(idish, nullptr);
    std::vector<std::string> specs;
    for (const auto& s : idish->specs) specs.push_back(s.name + " " + s.sig.str());
    EXPECT_EQ(specs, (std::vector<std::string>{"Id<U> (y U) U", "Id<0> () Top1"}));
}

TEST(Mono, NomonoProgramsRaise) {
    try {
        mono_program(load("corpus/nomono/box.fgg"));
        FAIL() << "expected rejection";
    } catch (const NomonoError& e) {
        EXPECT_FALSE(e.witnesses.empty());
    }
}

TEST(Mono, SubtypingAndDummyHashProperties) {
    for (const auto& f : files_in("corpus/fgg", ".fgg"))
        EXPECT_EQ(check_properties(load_program(f, Mode::FGG), 3), std::nullopt) << f;
}

// ---------------------------------------------------------------------------

TEST(Bisim, CorpusPasses) {
    auto entries = bisim_corpus(test_path("corpus/fgg"));
    ASSERT_EQ(entries.size(), files_in("corpus/fgg", ".fgg").size());
    std::size_t panics = 0;
    for (const auto& e : entries) {
        EXPECT_TRUE(e.verdict.passed()) << e.file << ": " << e.verdict.str();
        if (e.verdict.detail.find("panic") != std::string::npos) ++panics;
    }
    EXPECT_GE(panics, 1u);
}

TEST(Bisim, MutationsAreCaughtOnTheCorpus) {
    for (Mutation m : all_mutations()) {
        BisimOptions o;
        o.mono.mutation = m;
        std::size_t caught = 0;
        for (const auto& e : bisim_corpus(test_path("corpus/fgg"), o))
            if (!e.verdict.passed() && e.verdict.kind != BisimVerdict::Kind::Skipped) ++caught;
        EXPECT_GE(caught, 1u) << mutation_name(m);
    }
}

TEST(Bisim, SkipsNomonoPrograms) {
    BisimVerdict v = bisim_run(load("corpus/nomono/box.fgg"));
    EXPECT_EQ(v.kind, BisimVerdict::Kind::Skipped);
}

TEST(Bisim, TapReport) {
    std::vector<BisimReportEntry> entries(2);
    entries[0].file = "a.fgg";
    entries[0].verdict.steps = 3;
    entries[1].file = "b.fgg";
    entries[1].verdict.kind = BisimVerdict::Kind::Mismatch;
    std::string tap = format_tap(entries);
    EXPECT_TRUE(tap.starts_with("1..2\n")) << tap;
    EXPECT_NE(tap.find("ok 1 - a.fgg"), std::string::npos) << tap;
    EXPECT_NE(tap.find("not ok 2 - b.fgg"), std::string::npos) << tap;
}
