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
#include <string>
#include <vector>

#include <json.hpp>

#include "ebpps/latent_sample.hpp"
#include "ebpps/random_source.hpp"
#include "ebpps/weighted_item.hpp"

namespace ebpps {

struct SamplerConfig {
    std::size_t bound = 1;       // maximum sample size, >= 1
    std::uint64_t seed = 0;
};

/// One-pass weighted sampler over a stream of unknown length. After any
/// number of items, every scanned item is present in an extracted sample
/// with probability exactly rho * weight, where
///
///     rho = min(1 / max_weight, bound / total_weight),
///
/// so inclusion probabilities stay exactly proportional to the weights. The
/// sample never exceeds `bound` items; when a full-size sample is infeasible
/// under proportionality, the extracted size concentrates on the two
/// integers around its maximal expectation.
///
/// Memory is a single array of `bound` items plus one partial slot. The
/// amortized processing cost is O(1) per item (discards are bounded by
/// insertions); a single item can cost up to O(bound) when a heavy arrival
/// shrinks the sample. Note that an endless stream whose total weight grows
/// without bound while the max weight stays put drives rho toward zero and
/// keeps the sample churning; that is correct, just worth knowing.
///
/// Instances are single-threaded; run independent samplers in parallel.
class Sampler {
public:
    Sampler(std::size_t bound, std::uint64_t seed);
    explicit Sampler(const SamplerConfig& config)
        : Sampler(config.bound, config.seed) {}

    /// Folds one item into the sampler. Weights must be positive and finite;
    /// anything else throws std::invalid_argument and leaves the state
    /// untouched.
    void process(WeightedItem item);
    void process(std::string id, double weight) {
        process(WeightedItem{std::move(id), weight});
    }

    /// Materializes a sample from the current latent state. May be called at
    /// any time, any number of times; the latent sample is unchanged, so
    /// extraction never perturbs the statistics of future processing.
    Sample extract() { return latent_.output(rng_); }

    /// Expected size of an extracted sample: min(total_weight/max_weight, bound).
    double expected_sample_size() const;

    /// Inclusion probability rho * weight for an item of the given weight
    /// (hypothetical weights allowed). Requires at least one processed item;
    /// negative weights throw std::invalid_argument.
    double inclusion_probability(double weight) const;

    std::size_t bound() const { return bound_; }
    std::uint64_t items_seen() const { return items_seen_; }
    double total_weight() const { return total_weight_; }
    double max_weight() const { return max_weight_; }
    double rho() const { return rho_; }
    const DiscardCounter& discards() const { return counter_; }
    const LatentSample& latent() const { return latent_; }

    /// Versioned snapshot of the complete state (accumulators, RNG state,
    /// latent sample). from_json(to_json()) resumes bit-exactly: a resumed
    /// sampler produces the same bytes as one that never stopped.
    nlohmann::json to_json() const;
    static Sampler from_json(const nlohmann::json& snapshot);

private:
    Sampler() : rng_(0) {}

    std::size_t bound_ = 1;
    std::uint64_t seed_ = 0;
    RandomSource rng_;
    LatentSample latent_;
    DiscardCounter counter_;
    double total_weight_ = 0.0;
    double max_weight_ = -std::numeric_limits<double>::infinity();
    double rho_ = 0.0;
    std::uint64_t items_seen_ = 0;
};

/// Closed-form proportionality constant for a whole weight multiset:
/// min(1/max w, bound/sum w). Zero for an empty set. This is the analytic
/// reference the verification harness compares empirical frequencies against.
double closed_form_rho(const std::vector<double>& weights, std::size_t bound);

}  // namespace ebpps
