#include "support/support.hpp"

#include "fgo/fg_typing.hpp"
#include "fgo/parser.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <sys/wait.h>

#ifndef FGO_CLI
#error "FGO_CLI must name the command-line binary"
#endif

using namespace fgo::testing;
using nlohmann::json;

namespace {

struct Result {
    int status = -1;
    std::string out;
};

Result run(const std::string& args) {
    std::string cmd = std::string(FGO_CLI) + " " + args + " 2>&1";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int raw = pclose(pipe);
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

std::string file(const char* relative) { return test_path(relative); }

} // namespace

TEST(Cli, RunPrintsTheValue) {
    Result r = run("run-fg " + file("corpus/fg/incr.fg"));
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "-2\n");
    r = run("run-fgg " + file("corpus/fgg/expression_string.fgg"));
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "\"(1+2)\"\n");
    r = run("run-fgg " + file("corpus/fgg/lists.fgg"));
    EXPECT_EQ(r.out, "Cons(bool){false, Cons(bool){true, Nil(bool){}}}\n");
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("check-fgg " + file("corpus/fgg/lists.fgg")).status, 0);
    EXPECT_EQ(run("check-fgg " + file("corpus/invalid/missing_method.fgg")).status, 1);
    EXPECT_EQ(run("check-fg " + file("corpus/invalid/stupid_assertion.fg")).status, 1);
    EXPECT_EQ(run("nomono " + file("corpus/nomono/box.fgg")).status, 1);
    EXPECT_EQ(run("nomono " + file("corpus/fgg/dispatcher.fgg")).status, 0);
    EXPECT_EQ(run("run-fg /nonexistent/file.fg").status, 1);
    EXPECT_EQ(run("").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("run-fg").status, 2);
}

TEST(Cli, DiagnosticsAreLocated) {
    Result r = run("check-fgg " + file("corpus/invalid/missing_method.fgg"));
    EXPECT_NE(r.out.find("missing_method.fgg:12:20: t-call:"), std::string::npos) << r.out;
}

TEST(Cli, JsonOutputParses) {
    json run_json = json::parse(run("--json run-fgg " + file("corpus/fgg/equality.fgg")).out);
    EXPECT_EQ(run_json["command"], "run-fgg");
    EXPECT_EQ(run_json["result"], "true");
    EXPECT_EQ(run_json["ok"], true);

    json check = json::parse(run("--json check-fgg " + file("corpus/invalid/missing_method.fgg")).out);
    EXPECT_EQ(check["ok"], false);
    ASSERT_EQ(check["diagnostics"].size(), 1u);
    EXPECT_EQ(check["diagnostics"][0]["rule"], "t-call");

    json omega = json::parse(run("--json omega " + file("corpus/fgg/dispatcher.fgg")).out);
    EXPECT_EQ(omega["instances"].size(), 7u);
    EXPECT_EQ(omega["iterations"], 2);

    json nomono = json::parse(run("--json nomono " + file("corpus/nomono/box.fgg")).out);
    EXPECT_EQ(nomono["witnesses"][0]["receiver"], "Box");

    json counts = json::parse(run("--json enumerate --size 9 --count-only").out);
    EXPECT_EQ(counts["total"], 3 + 90 + 1331);
}

TEST(Cli, MonoOutputRunsAsFg) {
    auto dir = std::filesystem::temp_directory_path() / "fgo_cli_test";
    std::filesystem::create_directories(dir);
    for (bool go_compat : {false, true}) {
        std::string out = (dir / (go_compat ? "lists_go.fg" : "lists.fg")).string();
        Result m = run("mono " + std::string(go_compat ? "--go-compat " : "") + "-o " + out + " " +
                       file("corpus/fgg/lists.fgg"));
        ASSERT_EQ(m.status, 0) << m.out;
        EXPECT_TRUE(fgo::fg::check_program_fg(fgo::load_program(out, fgo::Mode::FG)).empty());
        Result target = run("run-fg " + out);
        EXPECT_EQ(target.status, 0) << target.out;
        EXPECT_EQ(target.out, go_compat ? "Consᐸboolᐳ{false, Consᐸboolᐳ{true, Nilᐸboolᐳ{}}}\n"
                                        : "Cons<bool>{false, Cons<bool>{true, Nil<bool>{}}}\n");
    }
    std::filesystem::remove_all(dir);
}

TEST(Cli, BisimDirectoryAsTap) {
    Result r = run("bisim " + file("corpus/fgg"));
    EXPECT_EQ(r.status, 0) << r.out;
    EXPECT_TRUE(r.out.starts_with("1.." + std::to_string(files_in("corpus/fgg", ".fgg").size()) + "\n")) << r.out;
    EXPECT_EQ(r.out.find("not ok"), std::string::npos) << r.out;
}

TEST(Cli, TraceListsEveryStep) {
    Result r = run("run-fg --trace " + file("corpus/fg/incr.fg"));
    EXPECT_EQ(r.status, 0);
    EXPECT_TRUE(r.out.starts_with("0: ")) << r.out;
}

TEST(Cli, FuelLimitIsReported) {
    Result r = run("--fuel 1 run-fgg " + file("corpus/fgg/lists.fgg"));
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.out.find("fuel"), std::string::npos) << r.out;
}
