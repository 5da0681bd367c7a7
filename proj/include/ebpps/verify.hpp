// Copyright 2026 The ebpps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "ebpps/weighted_item.hpp"

namespace ebpps::verify {

/// One comparison in a verification run. For statistical checks `tolerance`
/// is four standard errors and `p_value` the two-sided normal-approximation
/// p-value (rerun with fresh seeds and read these to soak-test); for
/// structural checks tolerance is zero, `expected` is the bound the
/// observation must not exceed, and `p_value` stays NaN.
struct CheckRecord {
    std::string check;
    double expected = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    double p_value = std::numeric_limits<double>::quiet_NaN();
    bool pass = false;
};

struct VerificationReport {
    std::uint64_t trials = 0;
    std::uint64_t items_processed = 0;
    double mean_size = 0.0;
    std::uint64_t discard_total = 0;
    std::map<std::string, double> per_item_frequency;
    std::map<std::string, double> expected_probability;
    std::map<std::uint64_t, std::uint64_t> size_histogram;
    std::vector<CheckRecord> checks;

    bool pass() const;
    const CheckRecord* find_check(const std::string& name) const;
    nlohmann::json to_json() const;
};

/// Runs `trials` independent samplers over the stream (per-trial derived
/// seeds), extracts one sample each at stream end, and certifies against the
/// closed form rho * w_i:
///   - every per-item frequency within 4 standard errors (exact for p in {0,1}),
///   - extracted sizes confined to the two integers around the latent size,
///   - mean size within 4 standard errors of the latent size,
///   - no sample ever exceeding the bound (hard failure),
///   - total discards within the insertion budget.
/// Stream ids must be unique (throws std::invalid_argument otherwise).
/// `threads` = 0 picks a sensible worker count; trials are deterministic
/// regardless of the partitioning.
VerificationReport monte_carlo_inclusion(const std::vector<WeightedItem>& stream,
                                         std::size_t bound,
                                         std::uint64_t trials,
                                         std::uint64_t seed,
                                         unsigned threads = 0);

/// Same experiment but tallied at several prefix lengths of the stream in a
/// single pass per trial; returns one report per checkpoint. Checkpoints must
/// be non-decreasing positions in [0, stream length].
std::vector<VerificationReport> monte_carlo_prefixes(
    const std::vector<WeightedItem>& stream, std::size_t bound,
    std::uint64_t trials, std::uint64_t seed,
    const std::vector<std::size_t>& checkpoints, unsigned threads = 0);

/// Exercises every branch of the downsample operation (factor 1 shortcut,
/// no full items retained, no items deleted, items deleted) and every
/// fraction case of unite (both zero, sum below/equal/above one), each with
/// structural checks plus Monte-Carlo confirmation that the per-item
/// probability contract holds. Includes the 4.7 -> 4.2 no-items-deleted
/// corner.
VerificationReport branch_coverage_suite(std::uint64_t seed = 0xEBB5ULL,
                                         std::uint64_t trials = 200000);

}  // namespace ebpps::verify
