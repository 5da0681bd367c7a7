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

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "ebpps/random_source.hpp"
#include "ebpps/weighted_item.hpp"

namespace ebpps {

/// Latent sizes within this distance of an integer are snapped to that
/// integer, so float drift can never fabricate a spurious partial item.
inline constexpr double kLatentSizeEpsilon = 1e-9;

inline double snap_latent_size(double c) {
    const double rounded = std::round(c);
    return (std::abs(c - rounded) < kLatentSizeEpsilon) ? rounded : c;
}

inline double fractional_part(double c) {
    return c - std::floor(c);
}

/// A sample of real-valued "latent" size C: floor(C) full items that are
/// always emitted, plus at most one partial item emitted with probability
/// C - floor(C). The fractional relaxation is what lets a bounded-size
/// sample keep every inclusion probability exactly proportional to weight.
///
/// Structural invariants, maintained by every operation:
///   - full_items().size() == floor(latent_size())
///   - partial_item() is present iff latent_size() has a fractional part
///   - no item sits in both the full set and the partial slot
///
/// A LatentSample is not safe for concurrent mutation; instances may be
/// moved freely between threads.
class LatentSample {
public:
    /// Empty latent sample, size 0.
    LatentSample() = default;

    /// Latent sample holding exactly one item with certainty (size 1).
    static LatentSample singleton(WeightedItem item);

    /// Assembles a latent sample from parts, validating the structural
    /// invariants. Throws std::invalid_argument if the parts disagree with
    /// the (snapped) latent size. Meant for tests and verification drivers;
    /// streaming code grows samples through downsample/unite instead.
    LatentSample(std::vector<WeightedItem> full_items,
                 std::optional<WeightedItem> partial_item,
                 double latent_size);

    double latent_size() const { return size_; }
    const std::vector<WeightedItem>& full_items() const { return full_; }
    const std::optional<WeightedItem>& partial_item() const { return partial_; }
    bool empty() const { return size_ == 0.0; }

    /// Pre-allocates backing storage so streaming mutation never reallocates.
    void reserve(std::size_t capacity) { full_.reserve(capacity); }

    /// Materializes a sample: all full items, plus the partial item with
    /// probability equal to the fractional part of the latent size. Repeatable;
    /// the latent sample itself is untouched. |result| is floor(C) or ceil(C)
    /// and its expectation is exactly C.
    Sample output(RandomSource& rng) const;

    /// Scales the latent size to theta * C while scaling every item's
    /// inclusion probability (as seen through output()) by exactly theta.
    /// In place; items ejected from the sample are tallied in `counter`.
    ///
    /// Throws std::invalid_argument for theta outside [0,1] and
    /// std::logic_error when the sample is empty.
    void downsample(double theta, RandomSource& rng, DiscardCounter& counter);

    bool contains(const std::string& id) const;

private:
    friend LatentSample unite(LatentSample left, LatentSample right,
                              RandomSource& rng, bool enforce_disjoint);

    void check_invariants() const;

    std::vector<WeightedItem> full_;
    std::optional<WeightedItem> partial_;
    double size_ = 0.0;
};

/// Merges two latent samples over disjoint item sets into one of latent size
/// C1 + C2, preserving every item's inclusion probability. The disjointness
/// contract is the caller's; streaming code satisfies it by construction
/// (the right operand is always the newly scanned item). Pass
/// enforce_disjoint = true in verification paths to get a std::logic_error
/// on overlapping ids -- only meaningful when ids are unique.
LatentSample unite(LatentSample left, LatentSample right, RandomSource& rng,
                   bool enforce_disjoint = false);

/// Exchanges a uniformly random full item with the partial item.
/// Precondition (std::logic_error): both sides non-empty.
void swap1(std::vector<WeightedItem>& full_items,
           std::optional<WeightedItem>& partial_item, RandomSource& rng);

/// Moves a uniformly random full item into the partial slot, discarding any
/// previous occupant. Precondition (std::logic_error): full set non-empty.
void move1(std::vector<WeightedItem>& full_items,
           std::optional<WeightedItem>& partial_item, RandomSource& rng);

/// Keeps a uniform random subset of `keep` items, in place. Runs a partial
/// Fisher-Yates shuffle that ejects the |items| - keep discards to the tail
/// one swap each, then truncates; the counter is bumped by exactly that many
/// discards. Throws std::invalid_argument if keep exceeds the item count.
void sample_without_replacement(std::vector<WeightedItem>& items,
                                std::size_t keep, RandomSource& rng,
                                DiscardCounter& counter);

}  // namespace ebpps
