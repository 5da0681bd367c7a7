// Copyright 2026 The ebpps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include "ebpps/latent_sample.hpp"

#include <cassert>
#include <stdexcept>
#include <utility>

namespace ebpps {

namespace {

std::size_t floor_size(double c) {
    return static_cast<std::size_t>(std::floor(c));
}

}  // namespace

LatentSample LatentSample::singleton(WeightedItem item) {
    LatentSample ls;
    ls.full_.push_back(std::move(item));
    ls.size_ = 1.0;
    return ls;
}

LatentSample::LatentSample(std::vector<WeightedItem> full_items,
                           std::optional<WeightedItem> partial_item,
                           double latent_size)
    : full_(std::move(full_items)),
      partial_(std::move(partial_item)),
      size_(snap_latent_size(latent_size)) {
    if (!(size_ >= 0.0) || !std::isfinite(size_))
        throw std::invalid_argument("latent size must be a finite non-negative real");
    if (full_.size() != floor_size(size_))
        throw std::invalid_argument("full item count must equal floor(latent size)");
    if (partial_.has_value() != (fractional_part(size_) > 0.0))
        throw std::invalid_argument("partial item present iff latent size is fractional");
}

Sample LatentSample::output(RandomSource& rng) const {
    Sample s;
    s.reserve(full_.size() + 1);
    s = full_;
    if (partial_ && rng.next_double() <= fractional_part(size_)) s.push_back(*partial_);
    return s;
}

bool LatentSample::contains(const std::string& id) const {
    if (partial_ && partial_->id == id) return true;
    for (const auto& item : full_)
        if (item.id == id) return true;
    return false;
}

void LatentSample::check_invariants() const {
    assert(size_ >= 0.0 && std::isfinite(size_));
    assert(full_.size() == floor_size(size_));
    assert(partial_.has_value() == (fractional_part(size_) > 0.0));
}

void LatentSample::downsample(double theta, RandomSource& rng,
                              DiscardCounter& counter) {
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::invalid_argument("downsample factor must lie in [0,1]");
    if (size_ <= 0.0)
        throw std::logic_error("cannot downsample an empty latent sample");
    if (theta == 1.0) return;

    const double old_size = size_;
    const double new_size = snap_latent_size(theta * old_size);
    const double old_frac = fractional_part(old_size);
    const double new_frac = fractional_part(new_size);
    const std::size_t old_floor = full_.size();
    const std::size_t new_floor = floor_size(new_size);

    const double u = rng.next_double();

    if (new_floor == 0) {
        // Only the partial slot survives. The current partial item keeps it
        // with probability frc(C)/C; otherwise a uniformly random full item
        // is promoted into it. Everything left in the full set is dropped.
        if (!partial_) {
            if (!full_.empty()) move1(full_, partial_, rng);
        } else if (u > old_frac / old_size) {
            swap1(full_, partial_, rng);
        }
        counter.total_discards += full_.size();
        full_.clear();
    } else if (new_floor == old_floor) {
        // No items deleted; the partial item may be converted to a full one.
        // The no-conversion probability uses theta*frc(C), which equals the
        // (C'/C)*frc(C) form of the correctness argument since theta = C'/C.
        const double keep_as_partial =
            (1.0 - theta * old_frac) / (1.0 - new_frac);
        if (partial_ && u > keep_as_partial) swap1(full_, partial_, rng);
    } else {
        // 0 < floor(C') < floor(C): some full items must go. With probability
        // theta*frc(C) the partial item is retained by promoting it to full;
        // otherwise it is overwritten. Either way a fresh partial item is
        // drawn uniformly, which scales the full items' probabilities evenly.
        if (partial_ && u <= theta * old_frac) {
            sample_without_replacement(full_, new_floor, rng, counter);
            swap1(full_, partial_, rng);
        } else {
            sample_without_replacement(full_, new_floor + 1, rng, counter);
            if (partial_) ++counter.total_discards;
            move1(full_, partial_, rng);
        }
    }

    if (new_frac == 0.0 && partial_) {
        partial_.reset();
        ++counter.total_discards;
    }
    size_ = new_size;
    check_invariants();
}

LatentSample unite(LatentSample left, LatentSample right, RandomSource& rng,
                   bool enforce_disjoint) {
    if (enforce_disjoint) {
        for (const auto& item : right.full_)
            if (left.contains(item.id))
                throw std::logic_error("unite requires disjoint latent samples");
        if (right.partial_ && left.contains(right.partial_->id))
            throw std::logic_error("unite requires disjoint latent samples");
    }

    const double frac_left = fractional_part(left.size_);
    const double frac_right = fractional_part(right.size_);
    const double merged_size = snap_latent_size(left.size_ + right.size_);

    left.full_.insert(left.full_.end(),
                      std::make_move_iterator(right.full_.begin()),
                      std::make_move_iterator(right.full_.end()));

    if (frac_left == 0.0 && frac_right == 0.0) {
        // both sizes integer; nothing else to merge
    } else if (fractional_part(merged_size) == 0.0) {
        // fractions sum to one: exactly one partial item becomes full,
        // chosen with probability equal to its own fraction
        if (rng.next_double() <= frac_left)
            left.full_.push_back(std::move(*left.partial_));
        else
            left.full_.push_back(std::move(*right.partial_));
        left.partial_.reset();
    } else if (frac_left + frac_right < 1.0) {
        // one partial slot survives, chosen in proportion to the fractions
        if (frac_left == 0.0) {
            left.partial_ = std::move(right.partial_);
        } else if (frac_right != 0.0 &&
                   rng.next_double() > frac_left / (frac_left + frac_right)) {
            left.partial_ = std::move(right.partial_);
        }
    } else {
        // fractions sum past one: one partial item is kept as partial, the
        // other is promoted to full
        const double keep_left =
            (1.0 - frac_left) / ((1.0 - frac_left) + (1.0 - frac_right));
        if (rng.next_double() <= keep_left) {
            left.full_.push_back(std::move(*right.partial_));
        } else {
            left.full_.push_back(std::move(*left.partial_));
            left.partial_ = std::move(right.partial_);
        }
    }

    left.size_ = merged_size;
    left.check_invariants();
    return left;
}

void swap1(std::vector<WeightedItem>& full_items,
           std::optional<WeightedItem>& partial_item, RandomSource& rng) {
    if (full_items.empty())
        throw std::logic_error("swap1 requires a non-empty full set");
    if (!partial_item)
        throw std::logic_error("swap1 requires a partial item");
    std::swap(full_items[rng.next_index(full_items.size())], *partial_item);
}

void move1(std::vector<WeightedItem>& full_items,
           std::optional<WeightedItem>& partial_item, RandomSource& rng) {
    if (full_items.empty())
        throw std::logic_error("move1 requires a non-empty full set");
    const std::size_t chosen = rng.next_index(full_items.size());
    partial_item = std::move(full_items[chosen]);
    full_items[chosen] = std::move(full_items.back());
    full_items.pop_back();
}

void sample_without_replacement(std::vector<WeightedItem>& items,
                                std::size_t keep, RandomSource& rng,
                                DiscardCounter& counter) {
    if (keep > items.size())
        throw std::invalid_argument("cannot keep more items than provided");
    const std::size_t discards = items.size() - keep;
    // Partial Fisher-Yates: eject one uniformly chosen survivor-candidate per
    // round to the tail, d swaps total, so the cost tracks discards rather
    // than the sample size.
    std::size_t live = items.size();
    for (std::size_t i = 0; i < discards; ++i) {
        const std::size_t victim = rng.next_index(live);
        std::swap(items[victim], items[live - 1]);
        --live;
    }
    items.resize(keep);
    counter.total_discards += discards;
}

}  // namespace ebpps
