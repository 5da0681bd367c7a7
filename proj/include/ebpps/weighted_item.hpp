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
#include <string>
#include <vector>

namespace ebpps {

/// An item carried through the sampler: an opaque identifier plus a positive,
/// finite weight. Identifiers are never interpreted beyond equality; two
/// stream positions may legally carry the same id and are treated as distinct
/// items.
struct WeightedItem {
    std::string id;
    double weight = 0.0;
};

inline bool operator==(const WeightedItem& a, const WeightedItem& b) {
    return a.id == b.id && a.weight == b.weight;
}

/// A materialized sample: the concrete set of items handed to the user.
using Sample = std::vector<WeightedItem>;

/// Tracks how many items have been ejected from a latent sample. Ejections
/// are bounded by insertions (at most one per stream item), which is what
/// makes the per-item processing cost O(1) amortized.
struct DiscardCounter {
    std::uint64_t total_discards = 0;
    std::uint64_t items_seen = 0;
};

}  // namespace ebpps
