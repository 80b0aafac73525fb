#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

// Drives the installed binary end to end: exit codes, report formats, and
// byte-stable JSON. The binary path comes in through ILPKIT_BIN.

namespace {

using nlohmann::json;

struct RunResult {
    int code = -1;
    std::string out;
};

std::string temp_path(const std::string& tag) {
    static int counter = 0;
    return (std::filesystem::temp_directory_path() /
            ("ilpkit_cli_" + std::to_string(::getpid()) + "_" + tag + "_" +
             std::to_string(counter++)))
        .string();
}

// stdin comes from a temp file; stderr is dropped so diagnostics can never
// leak into the captured report stream.
RunResult run_cli(const std::string& args, const std::string& input = "") {
    std::string in_path = temp_path("in");
    {
        std::ofstream f(in_path);
        f << input;
    }
    std::string cmd =
        std::string("'") + ILPKIT_BIN + "' " + args + " < '" + in_path + "' 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t n;
    while ((n = ::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = ::pclose(pipe);
    std::filesystem::remove(in_path);
    REQUIRE(WIFEXITED(status));
    r.code = WEXITSTATUS(status);
    return r;
}

constexpr const char* kTrivial = "ilp 1 1\n1\nb: 1\n";
constexpr const char* kInfeasible = "ilp 1 1\n2\nb: 1\n";

}  // namespace

TEST_CASE("solve maps verdicts and failures to exit codes") {
    RunResult feasible = run_cli("solve --method dp", kTrivial);
    CHECK(feasible.code == 0);
    CHECK(feasible.out.find("feasible") != std::string::npos);

    CHECK(run_cli("solve --method box", kInfeasible).code == 1);
    CHECK(run_cli("solve --method warp", kTrivial).code == 2);
    CHECK(run_cli("solve --method dp --box-budget 1", "ilp 1 3\n1 1 1\nb: 2\n").code == 3);

    RunResult json_run = run_cli("solve --method steinitz --json", kTrivial);
    CHECK(json_run.code == 0);
    json j = json::parse(json_run.out);
    CHECK(j["verdict"] == "feasible");
    CHECK(j["witness"] == json::array({1}));
}

TEST_CASE("detect gen output passes detect verify") {
    RunResult gen = run_cli("detect gen --d 2 --cols 18");
    REQUIRE(gen.code == 0);
    CHECK(gen.out.find("mat 14 18") != std::string::npos);

    RunResult ver = run_cli("detect verify --d 2", gen.out);
    CHECK(ver.code == 0);
    CHECK(ver.out.find("verified: yes") != std::string::npos);
}

TEST_CASE("detect verify reports the non-detecting row as a counterexample") {
    RunResult ver = run_cli("detect verify --d 2 --json", "mat 1 2\n1 1\n");
    CHECK(ver.code == 4);
    json j = json::parse(ver.out);
    CHECK(j["verified"] == false);
    CHECK(j["counterexample"]["u"] == json::array({2, 0}));
    CHECK(j["counterexample"]["v"] == json::array({1, 1}));
}

TEST_CASE("reduce emits a traced instance that feeds back into solve") {
    std::string cnf = "p cnf 3 1\n1 -2 3 0\n";
    RunResult red = run_cli("reduce sat --stage ilp", cnf);
    REQUIRE(red.code == 0);
    CHECK(red.out.find("# trace: 34sat") != std::string::npos);
    CHECK(red.out.find("# trace: ilp") != std::string::npos);

    RunResult solved = run_cli("solve --method dp", red.out);
    CHECK(solved.code == 0);
    RunResult steinitz = run_cli("solve --method steinitz", red.out);
    CHECK(steinitz.code == 0);

    RunResult relaxed = run_cli("reduce sat --stage 34sat", "p cnf 1 2\n1 0\n-1 0\n");
    CHECK(relaxed.code == 0);
    CHECK(relaxed.out.find("c trace: 34sat") != std::string::npos);
    CHECK(relaxed.out.find("p cnf ") != std::string::npos);

    RunResult full = run_cli("reduce sat --json", cnf);
    REQUIRE(full.code == 0);
    json j = json::parse(full.out);
    CHECK(j["stage"] == "pm1-targets");
    CHECK(j["trace"].size() == 5);
    CHECK(j["trace"].back()["entry_min"] == -1);
    CHECK(j["trace"].back()["entry_max"] == 1);
    CHECK(j["trace"].back()["b_min"] == 0);
    CHECK(j["trace"].back()["b_max"] == 1);
}

TEST_CASE("gadget output drives structure and solve") {
    RunResult num = run_cli("gadget number --delta 3 --value 5");
    REQUIRE(num.code == 0);
    CHECK(num.out.find("# designated: {\"z\":0,\"u\":4,\"y\":[1,2,3]}") != std::string::npos);
    CHECK(num.out.find("# expected_solutions: 2") != std::string::npos);

    CHECK(run_cli("solve --method dp", num.out).code == 0);

    RunResult td = run_cli("structure td --json", num.out);
    REQUIRE(td.code == 0);
    json tj = json::parse(td.out);
    CHECK(tj["depth"] == 3);
    CHECK(tj["parent"].size() == 4);

    RunResult ss = run_cli("gadget subsetsum --values 1,2 --target 3 --json");
    REQUIRE(ss.code == 0);
    json sj = json::parse(ss.out);
    CHECK(sj["designated"]["y"].size() == 2);
    CHECK(sj["designated"].contains("w"));
    CHECK(sj["expected_solutions"] == 0);

    RunResult pm1 = run_cli("gadget subsetsum --values 1,2 --target 3 --pm1 --json");
    REQUIRE(pm1.code == 0);
    json pj = json::parse(pm1.out);
    for (const auto& row : pj["instance"]["a"])
        for (const auto& e : row) CHECK(std::abs(e.get<long long>()) <= 1);
}

TEST_CASE("bench reports are byte-stable and gate on failing checks") {
    RunResult first = run_cli("bench support --json --seed 11");
    RunResult second = run_cli("bench support --json --seed 11");
    CHECK(first.code == 0);
    CHECK(first.out == second.out);
    json j = json::parse(first.out);
    CHECK(j["suite"] == "support");
    CHECK(j["pass"] == true);
    CHECK(j["seed"] == 11);

    // the declared one-row bound has counterexamples, so this suite fails by
    // design and the exit code must say so
    RunResult red = run_cli("bench graver-bounds --trials 30 --seed 7 --json");
    CHECK(red.code == 4);
    json rj = json::parse(red.out);
    CHECK(rj["pass"] == false);
    bool found = false;
    for (const auto& c : rj["checks"])
        if (c["name"] == "one-row l1 norms within 2*max-1") {
            found = true;
            CHECK(c["pass"] == false);
        }
    CHECK(found);

    CHECK(run_cli("bench nonsense").code == 2);
}

TEST_CASE("pipeline bench is reproducible through the binary") {
    std::string args = "bench pipeline --n 6 --trials 60 --seed 7 --json";
    RunResult first = run_cli(args);
    RunResult second = run_cli(args);
    REQUIRE(first.code == 0);
    CHECK(first.out == second.out);
    json j = json::parse(first.out);
    CHECK(j["pass"] == true);
    CHECK(j["measurements"]["unsat_instances"].get<int>() > 0);
}

TEST_CASE("the report stream can be redirected to a file") {
    std::string out_path = temp_path("out");
    RunResult r = run_cli("detect gen --d 2 --cols 2 --output '" + out_path + "'");
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(out_path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    CHECK(text.find("mat 2 2") != std::string::npos);
    std::filesystem::remove(out_path);
}
