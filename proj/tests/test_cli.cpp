// Copyright 2026 The ebpps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

// End-to-end tests of the ebpps binary. The path to the built binary comes
// from the EBPPS_CLI environment variable (set by ctest).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const fs::path& scratch_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() /
                 ("ebpps_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string cli_path() {
    const char* path = std::getenv("EBPPS_CLI");
    REQUIRE_MESSAGE(path != nullptr, "EBPPS_CLI must point at the built binary");
    return path;
}

RunResult run(const std::string& args, const std::string& stdin_text = "") {
    static int counter = 0;
    const fs::path out = scratch_dir() / ("out" + std::to_string(counter));
    const fs::path err = scratch_dir() / ("err" + std::to_string(counter));
    const fs::path in = scratch_dir() / ("in" + std::to_string(counter));
    ++counter;
    std::string command = cli_path() + " " + args;
    if (!stdin_text.empty()) {
        std::ofstream(in) << stdin_text;
        command += " < " + in.string();
    }
    command += " > " + out.string() + " 2> " + err.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
}

fs::path write_file(const std::string& name, const std::string& content) {
    const fs::path path = scratch_dir() / name;
    std::ofstream(path) << content;
    return path;
}

std::string golden_tsv() {
    std::string text = "# six light and six heavy items\n";
    for (int i = 1; i <= 6; ++i) text += "a" + std::to_string(i) + "\t1\n";
    for (int i = 1; i <= 6; ++i) text += "b" + std::to_string(i) + "\t4\n";
    return text;
}

}  // namespace

TEST_CASE("sample: deterministic output and a correct summary") {
    const auto input = write_file("golden.tsv", golden_tsv());
    const auto report = scratch_dir() / "summary.json";
    const std::string args =
        "sample -n 10 --seed 7 --report " + report.string() + " " + input.string();

    const RunResult first = run(args);
    REQUIRE(first.exit_code == 0);
    const RunResult second = run(args);
    CHECK(first.out == second.out);

    const json summary = json::parse(slurp(report));
    CHECK(summary.at("version") == 1);
    CHECK(summary.at("t") == 12);
    CHECK(summary.at("total_weight") == 30.0);
    CHECK(summary.at("max_weight") == 4.0);
    CHECK(summary.at("rho") == 0.25);
    CHECK(summary.at("latent_size") == 7.5);
    const auto size = summary.at("sample_size").get<std::size_t>();
    CHECK((size == 7 || size == 8));

    // all six heavy ids must be in the emitted sample
    for (int i = 1; i <= 6; ++i)
        CHECK(first.out.find("b" + std::to_string(i)) != std::string::npos);
    // line count matches the reported size
    CHECK(static_cast<std::size_t>(
              std::count(first.out.begin(), first.out.end(), '\n')) == size);
}

TEST_CASE("sample: stdin input and empty streams") {
    const RunResult empty = run("sample -n 5 -");
    CHECK(empty.exit_code == 0);
    CHECK(empty.out.empty());
    CHECK(json::parse(empty.err).at("latent_size") == 0.0);

    const RunResult piped = run("sample -n 5 --seed 3 -", "x\t2\ny\t2\n");
    CHECK(piped.exit_code == 0);
    CHECK(json::parse(piped.err).at("t") == 2);
    CHECK(piped.out == "x\ny\n");
}

TEST_CASE("sample: malformed input reports the line and exits 2") {
    const auto bad_weight = write_file("bad1.tsv", "ok\t1\nbroken\tabc\n");
    const RunResult r1 = run("sample -n 3 " + bad_weight.string());
    CHECK(r1.exit_code == 2);
    CHECK(r1.err.find(":2:") != std::string::npos);

    const auto no_tab = write_file("bad2.tsv", "justanid\n");
    const RunResult r2 = run("sample -n 3 " + no_tab.string());
    CHECK(r2.exit_code == 2);

    const auto negative = write_file("bad3.tsv", "x\t-1\n");
    const RunResult r3 = run("sample -n 3 " + negative.string());
    CHECK(r3.exit_code == 2);
    CHECK(r3.err.find("positive") != std::string::npos);

    const RunResult r4 = run("sample " + bad_weight.string());
    CHECK(r4.exit_code == 2);  // missing --bound
}

TEST_CASE("sample: snapshot plus resume equals an uninterrupted run") {
    const std::string full_text = golden_tsv();
    const auto full = write_file("full.tsv", full_text);
    // split after seven data lines
    std::string part1 = "# six light and six heavy items\n";
    for (int i = 1; i <= 6; ++i) part1 += "a" + std::to_string(i) + "\t1\n";
    part1 += "b1\t4\n";
    std::string part2;
    for (int i = 2; i <= 6; ++i) part2 += "b" + std::to_string(i) + "\t4\n";
    const auto first_half = write_file("part1.tsv", part1);
    const auto second_half = write_file("part2.tsv", part2);
    const auto state = scratch_dir() / "state.json";

    const RunResult whole = run("sample -n 10 --seed 11 " + full.string());
    REQUIRE(whole.exit_code == 0);

    const RunResult head = run("sample -n 10 --seed 11 --snapshot " +
                               state.string() + " " + first_half.string());
    REQUIRE(head.exit_code == 0);
    const RunResult tail =
        run("sample --resume " + state.string() + " " + second_half.string());
    REQUIRE(tail.exit_code == 0);

    CHECK(tail.out == whole.out);
    CHECK(json::parse(tail.err) == json::parse(whole.err));

    // conflicting options against a snapshot are refused
    const RunResult conflict =
        run("sample -n 3 --resume " + state.string() + " " + second_half.string());
    CHECK(conflict.exit_code == 2);
    const RunResult reseed = run("sample --seed 5 --resume " + state.string() +
                                 " " + second_half.string());
    CHECK(reseed.exit_code == 2);

    // a corrupt snapshot is an input error
    const auto broken = write_file("broken.json", "{not json");
    const RunResult corrupt =
        run("sample --resume " + broken.string() + " " + second_half.string());
    CHECK(corrupt.exit_code == 2);
}

TEST_CASE("sample: a million uniform-weight lines fill the bound exactly") {
    std::string text;
    text.reserve(12'000'000);
    for (int i = 0; i < 1'000'000; ++i)
        text += "u" + std::to_string(i) + "\t1\n";
    const auto input = write_file("million.tsv", text);
    const RunResult r = run("sample -n 100 --seed 17 " + input.string());
    REQUIRE(r.exit_code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 100);
    const json summary = json::parse(r.err);
    CHECK(summary.at("latent_size") == 100.0);
    CHECK(summary.at("sample_size") == 100);
    CHECK(summary.at("t") == 1'000'000);
}

TEST_CASE("verify: passing report on a sound stream") {
    const auto input = write_file("verify.tsv", golden_tsv());
    const RunResult r =
        run("verify -n 10 --trials 2000 --seed 5 " + input.string());
    CHECK(r.exit_code == 0);
    const json report = json::parse(r.out);
    CHECK(report.at("pass") == true);
    CHECK(report.at("trials") == 2000);
    CHECK(report.at("per_item_frequency").at("b1") == 1.0);
}

TEST_CASE("compare: reproduces the known contrast") {
    const auto input = write_file("compare.tsv", golden_tsv());
    const auto report_path = scratch_dir() / "compare.json";
    const RunResult r =
        run("compare -n 10 --report " + report_path.string() + " " + input.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("0.250000") != std::string::npos);
    CHECK(r.out.find("0.666667") != std::string::npos);

    const json report = json::parse(slurp(report_path));
    CHECK(report.at("tau").get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(report.at("threshold_pps_violation").get<double>() ==
          doctest::Approx(5.0 / 3.0).epsilon(1e-9));
    CHECK(report.at("expected_size_exact_pps").get<double>() ==
          doctest::Approx(7.5).epsilon(1e-12));
    CHECK(report.at("expected_size_threshold").get<double>() ==
          doctest::Approx(10.0).epsilon(1e-9));
    CHECK(report.at("rho").get<double>() == 0.25);
}

TEST_CASE("bench: runs and respects the discard budget") {
    const auto report_path = scratch_dir() / "bench.json";
    const RunResult r = run("bench --count 20000 --distribution uniform -n 50 "
                            "--seed 1 --report " + report_path.string());
    CHECK(r.exit_code == 0);
    const json report = json::parse(slurp(report_path));
    CHECK(report.at("items") == 20000);
    CHECK(report.at("discard_budget_ok") == true);
    CHECK(report.at("discards").get<std::uint64_t>() <= 20000);

    const RunResult spike = run("bench --count 5000 --distribution 'spike(1000,1e6)' "
                                "-n 20 --seed 2");
    CHECK(spike.exit_code == 0);

    const RunResult zipf = run("bench --count 5000 --distribution 'zipf(1.2)' "
                               "-n 20 --seed 3");
    CHECK(zipf.exit_code == 0);

    const RunResult unknown = run("bench --count 10 --distribution nosuch -n 5");
    CHECK(unknown.exit_code == 2);
}
