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
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ebpps::oracle {

// Exact-arithmetic mirror of the sampling operations. Instead of drawing
// random numbers it carries the full probability distribution over latent
// sample contents, with every branch probability an exact rational. That
// yields inclusion probabilities with zero sampling error, the independent
// baseline the Monte-Carlo harness is judged against. Intended for small
// instances; the distribution support is capped and a std::length_error is
// raised when enumeration would outgrow it.

using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t kDefaultMaxConfigs = 200000;

/// Latent sample contents: which item indices are full, which (if any) is
/// partial. The latent size is carried separately since it is the same for
/// every branch.
struct Config {
    std::vector<int> full;  // sorted ascending
    int partial = -1;       // -1 means empty slot

    bool operator<(const Config& other) const {
        return full != other.full ? full < other.full : partial < other.partial;
    }
    bool operator==(const Config& other) const {
        return full == other.full && partial == other.partial;
    }
};

/// A distribution over latent-sample contents at a fixed latent size.
/// Probabilities always sum to exactly 1.
struct LatentDistribution {
    Rational size{0};
    std::map<Config, Rational> configs;
};

/// Point distribution on one explicit latent sample. Validates the
/// structural invariants against `size`.
LatentDistribution make_latent(std::vector<int> full_items, int partial_item,
                               Rational size);

/// Exact enumeration of the downsample operation: every random branch is
/// expanded with its probability. theta in [0,1].
LatentDistribution downsample(const LatentDistribution& dist, const Rational& theta,
                              std::size_t max_configs = kDefaultMaxConfigs);

/// Exact enumeration of the unite operation over two independent
/// distributions with disjoint item index sets.
LatentDistribution unite(const LatentDistribution& left,
                         const LatentDistribution& right,
                         std::size_t max_configs = kDefaultMaxConfigs);

/// Probability that the given item index appears in a sample extracted from
/// a random latent sample of the distribution.
Rational inclusion_probability(const LatentDistribution& dist, int item);

/// Runs the full streaming recurrence (downsample old state, downsample the
/// new singleton, unite) in exact arithmetic over integer weights and returns
/// each item's inclusion probability at stream end.
std::vector<Rational> exhaustive_inclusion(const std::vector<std::int64_t>& weights,
                                           std::int64_t bound,
                                           std::size_t max_configs = kDefaultMaxConfigs);

/// min(1/max w, bound/sum w) * w_i, exactly.
std::vector<Rational> closed_form_inclusion(const std::vector<std::int64_t>& weights,
                                            std::int64_t bound);

Rational floor_of(const Rational& value);
Rational fractional_of(const Rational& value);

}  // namespace ebpps::oracle
