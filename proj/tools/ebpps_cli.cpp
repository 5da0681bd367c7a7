// Copyright 2026 The ebpps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

// ebpps command line: stream weighted items through the bounded exact-PPS
// sampler, verify its statistical contracts, compare against the threshold
// baseline, and benchmark throughput.
//
// Input is TSV, one `id<TAB>weight` per line, UTF-8; blank lines are skipped
// and lines starting with '#' are comments. `-` reads stdin.
//
// Exit codes: 0 success, 1 verification failure, 2 input/usage error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ebpps/sampler.hpp"
#include "ebpps/threshold_pps.hpp"
#include "ebpps/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitInputError = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class TsvReader {
public:
    explicit TsvReader(const std::string& path) : name_(path) {
        if (path == "-") {
            stream_ = &std::cin;
        } else {
            file_.open(path);
            if (!file_) throw InputError("cannot open input file: " + path);
            stream_ = &file_;
            name_ = path;
        }
    }

    // false at end of input; throws InputError with a line number otherwise
    bool next(ebpps::WeightedItem& item) {
        std::string line;
        while (std::getline(*stream_, line)) {
            ++line_number_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos || tab == 0)
                fail("expected id<TAB>weight");
            const std::string weight_text = line.substr(tab + 1);
            char* end = nullptr;
            const double weight = std::strtod(weight_text.c_str(), &end);
            if (end == weight_text.c_str() || *end != '\0')
                fail("cannot parse weight '" + weight_text + "'");
            if (!std::isfinite(weight) || weight <= 0.0)
                fail("weight must be positive and finite");
            item.id = line.substr(0, tab);
            item.weight = weight;
            return true;
        }
        return false;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw InputError(name_ + ":" + std::to_string(line_number_) + ": " + message);
    }

    std::string name_;
    std::ifstream file_;
    std::istream* stream_ = nullptr;
    std::uint64_t line_number_ = 0;
};

std::vector<ebpps::WeightedItem> read_all(const std::string& path) {
    TsvReader reader(path);
    std::vector<ebpps::WeightedItem> items;
    ebpps::WeightedItem item;
    while (reader.next(item)) items.push_back(item);
    return items;
}

void emit_report(const json& report, const std::string& report_path) {
    if (report_path.empty()) {
        std::cerr << report.dump(2) << "\n";
    } else {
        std::ofstream out(report_path);
        if (!out) throw InputError("cannot open report file: " + report_path);
        out << report.dump(2) << "\n";
    }
}

json summary_json(const ebpps::Sampler& sampler, std::size_t sample_size) {
    json j{{"version", 1},
           {"t", sampler.items_seen()},
           {"total_weight", sampler.total_weight()},
           {"rho", sampler.rho()},
           {"latent_size", sampler.latent().latent_size()},
           {"sample_size", sample_size},
           {"discards", sampler.discards().total_discards}};
    if (sampler.items_seen() == 0)
        j["max_weight"] = nullptr;
    else
        j["max_weight"] = sampler.max_weight();
    return j;
}

int run_sample(const std::string& input, std::size_t bound, std::uint64_t seed,
               bool bound_given, bool seed_given, const std::string& report_path,
               const std::string& snapshot_path, const std::string& resume_path) {
    ebpps::Sampler sampler = [&]() {
        if (resume_path.empty()) return ebpps::Sampler(bound, seed);
        std::ifstream in(resume_path);
        if (!in) throw InputError("cannot open snapshot file: " + resume_path);
        json snapshot;
        in >> snapshot;
        ebpps::Sampler resumed = ebpps::Sampler::from_json(snapshot);
        if (bound_given && resumed.bound() != bound)
            throw InputError("--bound conflicts with the resumed snapshot");
        if (seed_given)
            throw InputError("--seed cannot be changed when resuming");
        return resumed;
    }();

    TsvReader reader(input);
    ebpps::WeightedItem item;
    while (reader.next(item)) sampler.process(std::move(item));

    if (!snapshot_path.empty()) {
        std::ofstream out(snapshot_path);
        if (!out) throw InputError("cannot open snapshot file: " + snapshot_path);
        out << sampler.to_json().dump() << "\n";
    }

    const ebpps::Sample sample = sampler.extract();
    for (const auto& sampled : sample) std::cout << sampled.id << "\n";
    emit_report(summary_json(sampler, sample.size()), report_path);
    return kExitOk;
}

int run_verify(const std::string& input, std::size_t bound, std::uint64_t trials,
               std::uint64_t seed, const std::string& report_path) {
    const auto stream = read_all(input);
    const auto report = ebpps::verify::monte_carlo_inclusion(stream, bound, trials, seed);
    const json j = report.to_json();
    std::cout << j.dump(2) << "\n";
    if (!report_path.empty()) emit_report(j, report_path);
    return report.pass() ? kExitOk : kExitVerificationFailure;
}

int run_compare(const std::string& input, std::size_t bound,
                const std::string& report_path) {
    const auto stream = read_all(input);
    if (stream.empty()) throw InputError("compare needs a non-empty input");

    std::vector<double> weights;
    weights.reserve(stream.size());
    for (const auto& item : stream) weights.push_back(item.weight);

    const double rho = ebpps::closed_form_rho(weights, bound);
    const auto threshold = ebpps::solve_tau(weights, bound);

    // group by weight for the table
    std::map<double, std::size_t> weight_counts;
    for (double w : weights) ++weight_counts[w];

    double exact_expected_size = 0.0;
    for (double w : weights) exact_expected_size += rho * w;

    std::cout << std::setprecision(6) << std::fixed;
    std::cout << std::setw(14) << "weight" << std::setw(10) << "count"
              << std::setw(14) << "exact_pps" << std::setw(14) << "threshold"
              << "\n";
    json rows = json::array();
    for (const auto& [weight, count] : weight_counts) {
        const double exact_p = rho * weight;
        const double threshold_p = std::min(1.0, threshold.tau * weight);
        std::cout << std::setw(14) << weight << std::setw(10) << count
                  << std::setw(14) << exact_p << std::setw(14) << threshold_p
                  << "\n";
        rows.push_back({{"weight", weight},
                        {"count", count},
                        {"exact_pps", exact_p},
                        {"threshold", threshold_p}});
    }
    const double violation = ebpps::pps_violation(threshold);
    std::cout << "expected sample size: exact_pps=" << exact_expected_size
              << " threshold=" << threshold.expected_size() << " (bound " << bound
              << ")\n";
    std::cout << "rho=" << rho << " tau=" << threshold.tau
              << " threshold_pps_violation=" << violation << "\n";

    emit_report(json{{"version", 1},
                     {"bound", bound},
                     {"rho", rho},
                     {"tau", threshold.tau},
                     {"rows", std::move(rows)},
                     {"expected_size_exact_pps", exact_expected_size},
                     {"expected_size_threshold", threshold.expected_size()},
                     {"threshold_pps_violation", violation}},
                report_path);
    return kExitOk;
}

// weight generators for the benchmark workloads
struct Distribution {
    std::string kind;
    double zipf_exponent = 1.0;
    std::uint64_t spike_period = 100000;
    double spike_ratio = 1e6;
};

Distribution parse_distribution(const std::string& text) {
    Distribution d;
    const auto open = text.find('(');
    d.kind = text.substr(0, open);
    std::vector<double> params;
    if (open != std::string::npos) {
        if (text.back() != ')') throw InputError("malformed distribution: " + text);
        std::stringstream inner(text.substr(open + 1, text.size() - open - 2));
        std::string part;
        while (std::getline(inner, part, ','))
            params.push_back(std::stod(part));
    }
    if (d.kind == "uniform") {
        if (!params.empty()) throw InputError("uniform takes no parameters");
    } else if (d.kind == "zipf") {
        if (params.size() > 1) throw InputError("zipf takes one parameter");
        if (!params.empty()) d.zipf_exponent = params[0];
    } else if (d.kind == "spike") {
        if (params.size() > 2) throw InputError("spike takes two parameters");
        if (!params.empty()) d.spike_period = static_cast<std::uint64_t>(params[0]);
        if (params.size() > 1) d.spike_ratio = params[1];
        if (d.spike_period == 0) throw InputError("spike period must be positive");
    } else {
        throw InputError("unknown distribution: " + text);
    }
    return d;
}

double next_weight(const Distribution& d, std::uint64_t t, ebpps::RandomSource& rng) {
    if (d.kind == "uniform") return 1.0 - rng.next_double();  // (0, 1]
    if (d.kind == "zipf")
        return std::pow(static_cast<double>(1 + rng.next_index(1000000)),
                        -d.zipf_exponent);
    return (t + 1) % d.spike_period == 0 ? d.spike_ratio : 1.0;
}

int run_bench(std::uint64_t count, const std::string& distribution_text,
              std::size_t bound, std::uint64_t seed,
              const std::string& report_path) {
    const Distribution distribution = parse_distribution(distribution_text);

    ebpps::Sampler sampler(bound, seed);
    ebpps::RandomSource weight_rng(ebpps::RandomSource::derive_seed(seed, 1));

    std::uint64_t max_item_discards = 0;
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t t = 0; t < count; ++t) {
        const double weight = next_weight(distribution, t, weight_rng);
        const std::uint64_t before = sampler.discards().total_discards;
        sampler.process("x" + std::to_string(t), weight);
        max_item_discards =
            std::max(max_item_discards, sampler.discards().total_discards - before);
    }
    const auto elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();

    const std::uint64_t discards = sampler.discards().total_discards;
    const bool discard_budget_ok = discards <= sampler.items_seen();
    const double ratio =
        count == 0 ? 0.0 : static_cast<double>(discards) / static_cast<double>(count);

    std::cout << "items=" << count << " elapsed=" << std::setprecision(3)
              << std::fixed << elapsed << "s rate="
              << static_cast<std::uint64_t>(count / std::max(elapsed, 1e-9))
              << "/s discards=" << discards << " discards_per_item="
              << std::setprecision(6) << ratio
              << " max_item_discards=" << max_item_discards << "\n";

    emit_report(json{{"version", 1},
                     {"items", count},
                     {"bound", bound},
                     {"distribution", distribution_text},
                     {"elapsed_sec", elapsed},
                     {"items_per_sec", count / std::max(elapsed, 1e-9)},
                     {"discards", discards},
                     {"discards_per_item", ratio},
                     {"max_item_discards", max_item_discards},
                     {"latent_size", sampler.latent().latent_size()},
                     {"discard_budget_ok", discard_budget_ok}},
                report_path);
    return discard_budget_ok ? kExitOk : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded-size sampling with exact probability-proportional-to-size guarantees"};
    app.require_subcommand(1);

    std::string input = "-";
    std::size_t bound = 1;
    std::uint64_t seed = 0;
    std::uint64_t trials = 100000;
    std::uint64_t count = 1000000;
    std::string report_path, snapshot_path, resume_path;
    std::string distribution = "uniform";

    auto* sample = app.add_subcommand("sample", "Stream a TSV input and emit a sample");
    sample->add_option("input", input, "TSV file, or - for stdin");
    auto* sample_bound = sample->add_option("-n,--bound", bound, "maximum sample size");
    auto* sample_seed = sample->add_option("--seed", seed, "RNG seed");
    sample->add_option("--report", report_path, "write the JSON summary here instead of stderr");
    sample->add_option("--snapshot", snapshot_path, "save the sampler state after processing");
    sample->add_option("--resume", resume_path, "restore sampler state before processing");

    auto* verify = app.add_subcommand("verify", "Monte-Carlo certification of the inclusion probabilities");
    verify->add_option("input", input, "TSV file, or - for stdin");
    verify->add_option("-n,--bound", bound, "maximum sample size")->required();
    verify->add_option("--trials", trials, "independent sampler runs");
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--report", report_path, "also write the JSON report here");

    auto* compare = app.add_subcommand("compare", "Exact-PPS vs threshold-PPS inclusion probabilities");
    compare->add_option("input", input, "TSV file, or - for stdin");
    compare->add_option("-n,--bound", bound, "target/maximum sample size")->required();
    compare->add_option("--report", report_path, "write the JSON comparison here instead of stderr");

    auto* bench = app.add_subcommand("bench", "Throughput and discard statistics on a generated stream");
    bench->add_option("--count", count, "number of items to generate");
    bench->add_option("--distribution", distribution,
                      "uniform | zipf(s) | spike(period,ratio)");
    bench->add_option("-n,--bound", bound, "maximum sample size")->required();
    bench->add_option("--seed", seed, "RNG seed");
    bench->add_option("--report", report_path, "write the JSON results here instead of stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (sample->parsed()) {
            if (resume_path.empty() && sample_bound->count() == 0)
                throw InputError("sample requires -n/--bound (or --resume)");
            return run_sample(input, bound, seed, sample_bound->count() > 0,
                              sample_seed->count() > 0, report_path,
                              snapshot_path, resume_path);
        }
        if (verify->parsed())
            return run_verify(input, bound, trials, seed, report_path);
        if (compare->parsed()) return run_compare(input, bound, report_path);
        if (bench->parsed())
            return run_bench(count, distribution, bound, seed, report_path);
    } catch (const InputError& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitInputError;
    } catch (const nlohmann::json::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kExitVerificationFailure;
    }
    return kExitOk;
}
