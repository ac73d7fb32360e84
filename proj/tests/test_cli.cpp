#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <rdmap/io.hpp>

// Exercises the installed command-line binary end to end via std::system.

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string capture = "cli_capture_" + std::to_string(counter++) + ".txt";
    const std::string cmd =
        std::string(RDMAP_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
    const int status = std::system(cmd.c_str());
    int code = -1;
    if (status != -1) code = WEXITSTATUS(status);
    std::ifstream in(capture);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(capture.c_str());
    return {code, ss.str()};
}

std::string data(const std::string& name) {
    return std::string(RDMAP_DATA_DIR) + "/" + name;
}

struct Cleanup {
    std::string path;
    ~Cleanup() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("monotone command prints pinned 12-decimal values") {
    SECTION("maximally entangled state, relative entropy to its projection") {
        const RunResult r =
            run_cli("monotone " + data("bell.json") + " --destroyer discord");
        CHECK(r.exit_code == 0);
        CHECK(r.out == "1.000000000000\n");
    }
    SECTION("plus state against complete dephasing") {
        const RunResult r =
            run_cli("monotone " + data("plus.json") + " --destroyer dephasing");
        CHECK(r.exit_code == 0);
        CHECK(r.out == "1.000000000000\n");
    }
    SECTION("classically correlated state carries nothing") {
        const RunResult r =
            run_cli("monotone " + data("cq.json") + " --destroyer discord");
        CHECK(r.exit_code == 0);
        CHECK(r.out == "0.000000000000\n");
    }
    SECTION("trace distance variant") {
        const RunResult r = run_cli("monotone " + data("plus.json") +
                                    " --destroyer dephasing --measure trace-distance");
        CHECK(r.exit_code == 0);
        CHECK(r.out == "0.500000000000\n");
    }
    SECTION("twirl destroyer from a group file") {
        const RunResult r = run_cli("monotone " + data("plus.json") +
                                    " --destroyer twirl:" + data("zgroup.json"));
        CHECK(r.exit_code == 0);
        CHECK(r.out == "1.000000000000\n");
    }
    SECTION("unknown measure is an input error") {
        const RunResult r = run_cli("monotone " + data("plus.json") +
                                    " --destroyer dephasing --measure fidelity");
        CHECK(r.exit_code == 2);
    }
}

TEST_CASE("classify command emits a full report") {
    Cleanup report{"cli_report.json"};
    const RunResult r = run_cli("classify " + data("e1.json") +
                                " --destroyer dephasing --remixes 40 --samples 40"
                                " --out " + report.path);
    REQUIRE(r.exit_code == 0);  // run completed; verdicts live in the report

    std::ifstream in(report.path);
    REQUIRE(in.good());
    const rdmap::json j = rdmap::json::parse(in);
    CHECK(j.at("conditions").at("commuting").at("verdict") == "fail");
    CHECK(j.at("conditions").at("selective-nongenerating").at("verdict") == "witnessed");
    // measuring in the +/- basis turns hidden off-diagonal terms into
    // populations, so the activation side fails too
    CHECK(j.at("conditions").at("nonactivating").at("verdict") == "fail");
    CHECK(j.at("config").at("samples").get<int>() == 40);
    CHECK(j.at("consistent").get<bool>());
}

TEST_CASE("classify lifts subsystem channels when dims are given") {
    Cleanup report{"cli_mu_report.json"};
    const RunResult r = run_cli("classify " + data("mu.json") +
                                " --destroyer discord --dims 3,3"
                                " --samples 30 --remixes 10 --out " + report.path);
    REQUIRE(r.exit_code == 0);
    std::ifstream in(report.path);
    REQUIRE(in.good());
    const rdmap::json j = rdmap::json::parse(in);
    CHECK(j.at("conditions").at("nongenerating").at("verdict") == "fail");
    // the offending free input ships with the report
    const rdmap::json w = j.at("conditions").at("nongenerating").at("witness");
    const rdmap::DensityMatrix witness = rdmap::state_from_json(w);
    CHECK(witness.dim() == 9);
    CHECK(rdmap::is_cq(witness).cq);
}

TEST_CASE("classify surfaces input problems as exit 2") {
    SECTION("malformed json") {
        const RunResult r = run_cli("classify " + data("malformed.json") +
                                    " --destroyer dephasing");
        CHECK(r.exit_code == 2);
    }
    SECTION("missing file") {
        const RunResult r = run_cli("classify no_such_file.json --destroyer dephasing");
        CHECK(r.exit_code == 2);
    }
    SECTION("unknown destroyer spec") {
        const RunResult r =
            run_cli("classify " + data("e1.json") + " --destroyer entanglement");
        CHECK(r.exit_code == 2);
    }
    SECTION("collapse target that is not free") {
        const RunResult r = run_cli("monotone " + data("plus.json") +
                                    " --destroyer extreme:" + data("plus.json"));
        CHECK(r.exit_code == 2);
    }
    SECTION("state file failing density validation") {
        const RunResult r = run_cli("monotone " + data("notdensity.json") +
                                    " --destroyer dephasing");
        CHECK(r.exit_code == 2);
        CHECK(r.out.find("error") != std::string::npos);
    }
}

TEST_CASE("scan command emits the flagged csv") {
    Cleanup csv{"cli_scan.csv"};
    const RunResult r = run_cli(
        "scan --family swap --from -0.01 --to 0.01 --step 0.002 --out " + csv.path);
    REQUIRE(r.exit_code == 0);
    std::ifstream in(csv.path);
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line == "epsilon,value_bits,jump_flag");
    int rows = 0, flags = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.size() >= 2 && line.substr(line.size() - 2) == ",1") ++flags;
    }
    CHECK(rows == 11);
    CHECK(flags == 1);

    SECTION("unknown family is an input error") {
        CHECK(run_cli("scan --family nope").exit_code == 2);
    }
}

TEST_CASE("suite command is deterministic across seeds at reduced sampling") {
    const std::string flags = " --samples 20 --remixes 60";
    const RunResult a = run_cli("suite" + flags);
    CHECK(a.exit_code == 0);
    CHECK(a.out.find("ALL CHECKS PASSED") != std::string::npos);
    CHECK(a.out.find("[FAIL]") == std::string::npos);

    const RunResult b = run_cli("suite --seed 7" + flags);
    CHECK(b.exit_code == 0);

    // same pass/fail sequence row for row
    auto verdicts = [](const std::string& text) {
        std::string v;
        std::istringstream ss(text);
        std::string line;
        while (std::getline(ss, line)) {
            if (line.rfind("[PASS]", 0) == 0) v += 'P';
            if (line.rfind("[FAIL]", 0) == 0) v += 'F';
        }
        return v;
    };
    CHECK(verdicts(a.out) == verdicts(b.out));
    CHECK(verdicts(a.out).size() >= 15);
}

TEST_CASE("version flag") {
    const RunResult r = run_cli("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find(rdmap::kVersion) != std::string::npos);
}
