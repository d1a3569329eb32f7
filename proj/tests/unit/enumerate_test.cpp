#include "support/support.hpp"

#include "fgo/enumerate.hpp"
#include "fgo/fgg_typing.hpp"
#include "fgo/parser.hpp"
#include "fgo/pretty.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace fgo;
using namespace fgo::testing;

namespace {

std::vector<Program> all_up_to(std::size_t size) {
    EnumerateOptions o;
    o.max_size = size;
    std::vector<Program> out;
    enumerate(o, [&](const Program& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

} // namespace

// The smallest programs need a struct with a field (`A`, `B { f0 A }`: 3),
// one method (receiver, name, result: 3) and `main` (`A{}`: 1). The body
// then has size 0, so it is `x` or `x.f0`: receiver A returning A, receiver
// B returning A via the field, receiver B returning B.
TEST(Enumerate, SmallestSizeByHand) {
    auto counts = enumerate_counts({.max_size = 7});
    EXPECT_EQ(counts, (std::vector<std::size_t>{0, 0, 0, 0, 0, 0, 0, 3}));
    std::set<std::string> bodies;
    for (const Program& p : all_up_to(7)) {
        const MethodDecl* m = p.method_decls().front();
        bodies.insert(m->receiver_type + "." + m->sig.result.str() + "=" + pretty(m->body));
    }
    EXPECT_EQ(bodies, (std::set<std::string>{"A.A=x", "B.A=x.f0", "B.B=x"}));
}

TEST(Enumerate, FrozenCounts) {
    auto counts = enumerate_counts({.max_size = 10});
    EXPECT_EQ(counts, (std::vector<std::size_t>{0, 0, 0, 0, 0, 0, 0, 3, 90, 1331, 13757}));
}

TEST(Enumerate, CountsMatchTheStream) {
    auto counts = enumerate_counts({.max_size = 9});
    std::vector<std::size_t> seen(10);
    for (const Program& p : all_up_to(9)) ++seen.at(symbol_count(p));
    EXPECT_EQ(seen, counts);
}

TEST(Enumerate, ProgramsAreDistinctWellTypedAndInBounds) {
    auto programs = all_up_to(9);
    std::set<std::string> texts;
    std::size_t last = 0;
    for (const Program& p : programs) {
        std::string text = pretty(p);
        EXPECT_TRUE(texts.insert(text).second) << "duplicate:\n" << text;
        EXPECT_TRUE(check_program_fgg(p).empty()) << text;
        std::size_t n = symbol_count(p);
        EXPECT_GE(n, last) << "sizes must not decrease";
        last = n;

        std::size_t empty_ifaces = 0, empty_structs = 0, fields = 0;
        for (const TypeDecl* t : p.type_decls()) {
            EXPECT_LE(t->formals.size(), 2u);
            EXPECT_LE(t->fields.size(), 2u);
            EXPECT_LE(t->specs.size(), 2u);
            EXPECT_TRUE(t->embeds.empty());
            if (t->is_interface() && t->specs.empty()) ++empty_ifaces;
            if (t->is_struct() && t->fields.empty()) ++empty_structs;
            fields += t->fields.size();
            for (const auto& f : t->formals) EXPECT_TRUE(p.find_type(f.bound.name())->is_interface()) << text;
        }
        EXPECT_LE(empty_ifaces, 1u) << text;
        EXPECT_LE(empty_structs, 2u) << text;
        EXPECT_GE(fields, 1u) << text;
        EXPECT_FALSE(p.method_decls().empty()) << text;
        for (const MethodDecl* m : p.method_decls()) {
            EXPECT_LE(m->sig.params.size(), 2u);
            EXPECT_LE(m->sig.type_formals.size(), 2u);
        }
    }
}

TEST(Enumerate, DeterministicOrder) {
    auto a = all_up_to(8), b = all_up_to(8);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]) << i;
}

TEST(Enumerate, SinkCanStopEarly) {
    std::size_t calls = 0;
    std::size_t n = enumerate({.max_size = 12}, [&](const Program&) {
        ++calls;
        return false;
    });
    EXPECT_EQ(n, 1u);
    EXPECT_EQ(calls, 1u);
}

TEST(Enumerate, TinyBoundsAreEmpty) {
    EXPECT_EQ(enumerate({.max_size = 1}, [](const Program&) { return true; }), 0u);
    EXPECT_EQ(enumerate({.max_size = 6}, [](const Program&) { return true; }), 0u);
}

TEST(Enumerate, MinSizeSelectsASlice) {
    EnumerateOptions o;
    o.min_size = 9;
    o.max_size = 9;
    std::size_t n = enumerate(o, [](const Program& p) {
        EXPECT_EQ(symbol_count(p), 9u);
        return true;
    });
    EXPECT_EQ(n, 1331u);
}

TEST(Pipeline, SmallRunIsClean) {
    PipelineOptions o;
    o.enumerate.max_size = 9;
    PipelineReport r = fuzz_pipeline(o);
    EXPECT_TRUE(r.ok()) << r.str();
    EXPECT_EQ(r.programs, 3u + 90u + 1331u);
    EXPECT_EQ(r.passed + r.skipped, r.programs);
}

TEST(Pipeline, FindsAndShrinksAMutation) {
    PipelineOptions o;
    o.enumerate.max_size = 10;
    o.bisim.mono.mutation = Mutation::EraseAssertions;
    o.stop_after = 1;
    PipelineReport r = fuzz_pipeline(o);
    ASSERT_FALSE(r.failures.empty());
    const PipelineFailure& f = r.failures.front();
    EXPECT_FALSE(f.verdict.passed());
    EXPECT_TRUE(check_program_fgg(f.program).empty());
    EXPECT_FALSE(bisim_run(f.program, o.bisim).passed());
    EXPECT_LE(symbol_count(f.program), 10u);
}

TEST(Pipeline, ShrinkDropsIrrelevantDeclarations) {
    Program p = load_source(R"(package main
type A struct {}
type B struct { f0 A }
type C struct {}
func (x A) m0() A { return x }
func (x C) m1() C { return x }
func main() { _ = B{A{}} }
)",
                            "<t>", Mode::FGG);
    Program small = shrink(p, [](const Program& q) { return q.find_type("B") != nullptr; });
    EXPECT_EQ(small.find_type("C"), nullptr);
    EXPECT_TRUE(small.method_decls().empty());
    EXPECT_NE(small.find_type("B"), nullptr);
}
