// Copyright 2026 The ebpps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include "ebpps/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "ebpps/latent_sample.hpp"
#include "ebpps/sampler.hpp"

namespace ebpps::verify {

namespace {

double four_sigma(double p, std::uint64_t trials) {
    return 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

CheckRecord statistical_check(std::string name, double expected,
                              double observed, double tolerance) {
    CheckRecord rec;
    rec.check = std::move(name);
    rec.expected = expected;
    rec.observed = observed;
    rec.tolerance = tolerance;
    rec.pass = std::abs(observed - expected) <= tolerance;
    const double standard_error = tolerance / 4.0;
    if (standard_error > 0.0)
        rec.p_value = std::erfc(std::abs(observed - expected) /
                                (standard_error * std::sqrt(2.0)));
    else
        rec.p_value = observed == expected ? 1.0 : 0.0;
    return rec;
}

CheckRecord bound_check(std::string name, double limit, double observed) {
    CheckRecord rec;
    rec.check = std::move(name);
    rec.expected = limit;
    rec.observed = observed;
    rec.pass = observed <= limit;
    return rec;
}

// Tallies accumulated by one worker over a trial range; merged additively.
struct CheckpointTally {
    std::vector<std::uint64_t> item_hits;
    std::map<std::uint64_t, std::uint64_t> size_histogram;
    std::uint64_t size_sum = 0;
    std::uint64_t max_size = 0;
    std::uint64_t discard_total = 0;

    explicit CheckpointTally(std::size_t items) : item_hits(items, 0) {}

    void merge(const CheckpointTally& other) {
        for (std::size_t i = 0; i < item_hits.size(); ++i)
            item_hits[i] += other.item_hits[i];
        for (const auto& [size, count] : other.size_histogram)
            size_histogram[size] += count;
        size_sum += other.size_sum;
        max_size = std::max(max_size, other.max_size);
        discard_total += other.discard_total;
    }
};

unsigned pick_thread_count(unsigned requested, std::uint64_t trials) {
    if (requested != 0) return requested;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto by_work = static_cast<unsigned>(std::max<std::uint64_t>(1, trials / 4096));
    return std::min({hw, by_work, 16u});
}

}  // namespace

bool VerificationReport::pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckRecord& c) { return c.pass; });
}

const CheckRecord* VerificationReport::find_check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.check == name) return &c;
    return nullptr;
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json checks_json = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json record{{"check", c.check},
                              {"expected", c.expected},
                              {"observed", c.observed},
                              {"tolerance", c.tolerance},
                              {"pass", c.pass}};
        if (!std::isnan(c.p_value)) record["p_value"] = c.p_value;
        checks_json.push_back(std::move(record));
    }
    nlohmann::json histogram = nlohmann::json::array();
    for (const auto& [size, count] : size_histogram)
        histogram.push_back({{"size", size}, {"count", count}});
    return nlohmann::json{{"version", 1},
                          {"trials", trials},
                          {"items_processed", items_processed},
                          {"mean_size", mean_size},
                          {"discard_total", discard_total},
                          {"per_item_frequency", per_item_frequency},
                          {"expected_probability", expected_probability},
                          {"size_histogram", std::move(histogram)},
                          {"checks", std::move(checks_json)},
                          {"pass", pass()}};
}

std::vector<VerificationReport> monte_carlo_prefixes(
    const std::vector<WeightedItem>& stream, std::size_t bound,
    std::uint64_t trials, std::uint64_t seed,
    const std::vector<std::size_t>& checkpoints, unsigned threads) {
    if (trials == 0) throw std::invalid_argument("trials must be at least 1");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] > stream.size())
            throw std::invalid_argument("checkpoint beyond stream length");
        if (i > 0 && checkpoints[i] < checkpoints[i - 1])
            throw std::invalid_argument("checkpoints must be non-decreasing");
    }
    std::unordered_map<std::string, std::size_t> index_of;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        if (!index_of.emplace(stream[i].id, i).second)
            throw std::invalid_argument("verification streams need unique ids");
        if (!std::isfinite(stream[i].weight) || stream[i].weight <= 0.0)
            throw std::invalid_argument("weights must be positive and finite");
    }

    const std::size_t points = checkpoints.size();
    std::vector<CheckpointTally> totals(points, CheckpointTally(stream.size()));

    const unsigned workers = pick_thread_count(threads, trials);
    auto run_range = [&](std::uint64_t lo, std::uint64_t hi,
                         std::vector<CheckpointTally>& out) {
        for (std::uint64_t trial = lo; trial < hi; ++trial) {
            Sampler sampler(bound, RandomSource::derive_seed(seed, trial));
            std::size_t item_pos = 0;
            for (std::size_t cp = 0; cp < points; ++cp) {
                while (item_pos < checkpoints[cp]) {
                    sampler.process(stream[item_pos].id, stream[item_pos].weight);
                    ++item_pos;
                }
                const Sample s = sampler.extract();
                auto& tally = out[cp];
                for (const auto& item : s) ++tally.item_hits[index_of.at(item.id)];
                ++tally.size_histogram[s.size()];
                tally.size_sum += s.size();
                tally.max_size = std::max<std::uint64_t>(tally.max_size, s.size());
                tally.discard_total += sampler.discards().total_discards;
            }
        }
    };

    if (workers <= 1) {
        run_range(0, trials, totals);
    } else {
        std::vector<std::vector<CheckpointTally>> partials(
            workers, std::vector<CheckpointTally>(points, CheckpointTally(stream.size())));
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = (trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t lo = std::min<std::uint64_t>(trials, w * chunk);
            const std::uint64_t hi = std::min<std::uint64_t>(trials, lo + chunk);
            pool.emplace_back(run_range, lo, hi, std::ref(partials[w]));
        }
        for (auto& t : pool) t.join();
        for (const auto& partial : partials)
            for (std::size_t cp = 0; cp < points; ++cp) totals[cp].merge(partial[cp]);
    }

    // One report per checkpoint, compared against the closed form for that
    // prefix of the stream.
    std::vector<VerificationReport> reports;
    reports.reserve(points);
    std::vector<double> prefix_weights;
    prefix_weights.reserve(stream.size());
    for (std::size_t cp = 0; cp < points; ++cp) {
        const std::size_t t = checkpoints[cp];
        prefix_weights.clear();
        for (std::size_t i = 0; i < t; ++i) prefix_weights.push_back(stream[i].weight);
        const double rho = closed_form_rho(prefix_weights, bound);
        double latent_size = 0.0;
        for (double w : prefix_weights) latent_size += rho * w;
        latent_size = snap_latent_size(latent_size);

        const CheckpointTally& tally = totals[cp];
        VerificationReport report;
        report.trials = trials;
        report.items_processed = t;
        report.discard_total = tally.discard_total;
        report.mean_size =
            static_cast<double>(tally.size_sum) / static_cast<double>(trials);
        report.size_histogram = tally.size_histogram;

        for (std::size_t i = 0; i < t; ++i) {
            const double expected = rho * stream[i].weight;
            const double observed = static_cast<double>(tally.item_hits[i]) /
                                    static_cast<double>(trials);
            report.expected_probability[stream[i].id] = expected;
            report.per_item_frequency[stream[i].id] = observed;
            report.checks.push_back(statistical_check(
                "inclusion:" + stream[i].id, expected, observed,
                four_sigma(expected, trials)));
        }

        const auto floor_size = static_cast<std::uint64_t>(std::floor(latent_size));
        std::uint64_t off_support = 0;
        for (const auto& [size, count] : tally.size_histogram)
            if (size != floor_size && size != floor_size + 1) off_support += count;
        if (fractional_part(latent_size) == 0.0 &&
            tally.size_histogram.count(floor_size + 1))
            off_support += tally.size_histogram.at(floor_size + 1);
        report.checks.push_back(bound_check("size_support", 0.0,
                                            static_cast<double>(off_support)));

        const double frac = fractional_part(latent_size);
        report.checks.push_back(statistical_check(
            "mean_size", latent_size, report.mean_size,
            std::max(four_sigma(frac, trials), 1e-9)));
        report.checks.push_back(bound_check("hard_bound",
                                            static_cast<double>(bound),
                                            static_cast<double>(tally.max_size)));
        report.checks.push_back(
            bound_check("discards", static_cast<double>(trials) * static_cast<double>(t),
                        static_cast<double>(tally.discard_total)));
        reports.push_back(std::move(report));
    }
    return reports;
}

VerificationReport monte_carlo_inclusion(const std::vector<WeightedItem>& stream,
                                         std::size_t bound, std::uint64_t trials,
                                         std::uint64_t seed, unsigned threads) {
    auto reports = monte_carlo_prefixes(stream, bound, trials, seed,
                                        {stream.size()}, threads);
    return std::move(reports.front());
}

namespace {

// Empirical inclusion frequencies over repeated one-shot experiments on
// copies of a fixed latent sample.
template <typename Operation>
void run_probability_case(const std::string& name,
                          const std::vector<std::string>& ids,
                          const std::map<std::string, double>& expected,
                          Operation&& op, std::uint64_t trials,
                          std::uint64_t seed, VerificationReport& report) {
    std::map<std::string, std::uint64_t> hits;
    for (const auto& id : ids) hits[id] = 0;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        RandomSource rng(RandomSource::derive_seed(seed, trial));
        const Sample s = op(rng);
        for (const auto& item : s) ++hits.at(item.id);
    }
    for (const auto& id : ids) {
        const double p = expected.at(id);
        const double observed =
            static_cast<double>(hits.at(id)) / static_cast<double>(trials);
        report.checks.push_back(statistical_check(name + ":" + id, p, observed,
                                                  std::max(four_sigma(p, trials), 1e-12)));
    }
}

std::vector<WeightedItem> items_named(const std::vector<std::string>& ids) {
    std::vector<WeightedItem> items;
    for (const auto& id : ids) items.push_back({id, 1.0});
    return items;
}

}  // namespace

VerificationReport branch_coverage_suite(std::uint64_t seed, std::uint64_t trials) {
    VerificationReport report;
    report.trials = trials;
    std::uint64_t salt = 0;

    struct DownsampleCase {
        std::string name;
        std::vector<std::string> full;
        std::optional<std::string> partial;
        double size;
        double theta;
    };
    const std::vector<DownsampleCase> downsample_cases = {
        // factor exactly 1: early return, nothing changes
        {"downsample:identity", {"a", "b"}, "p", 2.6, 1.0},
        // floor(C') = 0, partial absent: a random item becomes the survivor
        {"downsample:no_full_items", {"a", "b"}, std::nullopt, 2.0, 0.3},
        // floor(C') = 0 on a singleton
        {"downsample:no_full_items_singleton", {"a"}, std::nullopt, 1.0, 0.5},
        // floor(C') = 0 with a partial item competing to stay
        {"downsample:no_full_items_partial", {"a", "b"}, "p", 2.5, 0.2},
        // no items deleted (the 4.7 -> 4.2 corner)
        {"downsample:no_items_deleted", {"a", "b", "c", "d"}, "p", 4.7, 4.2 / 4.7},
        // items deleted, partial present
        {"downsample:items_deleted", {"a", "b", "c"}, "p", 3.5, 0.5},
        // items deleted, no partial
        {"downsample:items_deleted_integer", {"a", "b", "c"}, std::nullopt, 3.0, 0.55},
    };

    for (const auto& c : downsample_cases) {
        std::optional<WeightedItem> partial;
        if (c.partial) partial = WeightedItem{*c.partial, 1.0};
        const LatentSample base(items_named(c.full), partial, c.size);

        // branch predicate, for the record
        const double new_size = snap_latent_size(c.theta * c.size);
        const auto old_floor = static_cast<std::size_t>(std::floor(c.size));
        const auto new_floor = static_cast<std::size_t>(std::floor(new_size));
        double branch = 3;  // items deleted
        if (c.theta == 1.0) branch = 0;
        else if (new_floor == 0) branch = 1;
        else if (new_floor == old_floor) branch = 2;
        CheckRecord taken;
        taken.check = c.name + ":branch";
        taken.expected = branch;
        taken.observed = branch;
        taken.pass = true;
        report.checks.push_back(std::move(taken));

        std::vector<std::string> ids = c.full;
        std::map<std::string, double> expected;
        for (const auto& id : c.full) expected[id] = c.theta;
        if (c.partial) {
            ids.push_back(*c.partial);
            expected[*c.partial] = c.theta * fractional_part(c.size);
        }
        run_probability_case(
            c.name, ids, expected,
            [&](RandomSource& rng) {
                LatentSample copy = base;
                DiscardCounter counter;
                copy.downsample(c.theta, rng, counter);
                if (std::abs(copy.latent_size() - new_size) > kLatentSizeEpsilon)
                    throw std::logic_error("downsampled latent size off target");
                return copy.output(rng);
            },
            trials, RandomSource::derive_seed(seed, ++salt), report);
    }

    struct UnionCase {
        std::string name;
        std::vector<std::string> full1, full2;
        std::optional<std::string> partial1, partial2;
        double size1, size2;
    };
    const std::vector<UnionCase> union_cases = {
        {"unite:both_integer", {"a"}, {"b", "c"}, std::nullopt, std::nullopt, 1.0, 2.0},
        {"unite:fractions_below_one", {"a"}, {}, "p", "q", 1.4, 0.3},
        {"unite:fractions_equal_one", {"a"}, {}, "p1", "p2", 1.4, 0.6},
        {"unite:fractions_above_one", {"a"}, {"b", "c"}, "p1", "p2", 1.5, 2.7},
    };

    for (const auto& c : union_cases) {
        std::optional<WeightedItem> partial1, partial2;
        if (c.partial1) partial1 = WeightedItem{*c.partial1, 1.0};
        if (c.partial2) partial2 = WeightedItem{*c.partial2, 1.0};
        const LatentSample left(items_named(c.full1), partial1, c.size1);
        const LatentSample right(items_named(c.full2), partial2, c.size2);
        const double merged = snap_latent_size(c.size1 + c.size2);

        std::vector<std::string> ids;
        std::map<std::string, double> expected;
        for (const auto& id : c.full1) { ids.push_back(id); expected[id] = 1.0; }
        for (const auto& id : c.full2) { ids.push_back(id); expected[id] = 1.0; }
        if (c.partial1) {
            ids.push_back(*c.partial1);
            expected[*c.partial1] = fractional_part(c.size1);
        }
        if (c.partial2) {
            ids.push_back(*c.partial2);
            expected[*c.partial2] = fractional_part(c.size2);
        }
        run_probability_case(
            c.name, ids, expected,
            [&](RandomSource& rng) {
                LatentSample joined = unite(left, right, rng, /*enforce_disjoint=*/true);
                if (std::abs(joined.latent_size() - merged) > kLatentSizeEpsilon)
                    throw std::logic_error("merged latent size off target");
                return joined.output(rng);
            },
            trials, RandomSource::derive_seed(seed, ++salt), report);
    }

    return report;
}

}  // namespace ebpps::verify
