// Copyright 2026 The ebpps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include "ebpps/sampler.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ebpps {

Sampler::Sampler(std::size_t bound, std::uint64_t seed)
    : bound_(bound), seed_(seed), rng_(seed) {
    if (bound == 0) throw std::invalid_argument("sample-size bound must be at least 1");
    latent_.reserve(bound);
}

void Sampler::process(WeightedItem item) {
    if (!std::isfinite(item.weight) || item.weight <= 0.0)
        throw std::invalid_argument("item weight must be positive and finite");

    const double weight = item.weight;
    const double new_max = items_seen_ == 0 ? weight : std::max(max_weight_, weight);
    const double new_total = total_weight_ + weight;
    const double new_rho =
        std::min(1.0 / new_max, static_cast<double>(bound_) / new_total);

    if (items_seen_ > 0) {
        // Retarget the existing latent size at rho' * W directly instead of
        // accumulating rho'/rho ratios, so float drift cannot build up.
        // Mathematically theta == rho'/rho; rho never increases, so theta <= 1
        // up to rounding.
        const double target = new_rho * total_weight_;
        const double theta = std::clamp(target / latent_.latent_size(), 0.0, 1.0);
        latent_.downsample(theta, rng_, counter_);
    }

    LatentSample incoming = LatentSample::singleton(std::move(item));
    const double incoming_theta = std::min(new_rho * weight, 1.0);
    incoming.downsample(incoming_theta, rng_, counter_);
    latent_ = unite(std::move(latent_), std::move(incoming), rng_);

    total_weight_ = new_total;
    max_weight_ = new_max;
    rho_ = new_rho;
    ++items_seen_;
    counter_.items_seen = items_seen_;

    assert(counter_.total_discards <= counter_.items_seen);
    assert(latent_.latent_size() <=
           static_cast<double>(bound_) + kLatentSizeEpsilon);
}

double Sampler::expected_sample_size() const {
    if (items_seen_ == 0) return 0.0;
    return std::min(total_weight_ / max_weight_, static_cast<double>(bound_));
}

double Sampler::inclusion_probability(double weight) const {
    if (items_seen_ == 0)
        throw std::logic_error("inclusion probability is undefined before the first item");
    if (weight < 0.0) throw std::invalid_argument("weight must be non-negative");
    return rho_ * weight;
}

namespace {

nlohmann::json item_to_json(const WeightedItem& item) {
    return nlohmann::json{{"id", item.id}, {"weight", item.weight}};
}

WeightedItem item_from_json(const nlohmann::json& j) {
    return WeightedItem{j.at("id").get<std::string>(),
                        j.at("weight").get<double>()};
}

}  // namespace

nlohmann::json Sampler::to_json() const {
    nlohmann::json full = nlohmann::json::array();
    for (const auto& item : latent_.full_items()) full.push_back(item_to_json(item));

    nlohmann::json j{
        {"version", 1},
        {"n", bound_},
        {"seed", seed_},
        {"rng_state", rng_.state()},
        {"t", items_seen_},
        {"total_weight", total_weight_},
        {"rho", rho_},
        {"discards", counter_.total_discards},
        {"latent_size", latent_.latent_size()},
        {"full_items", std::move(full)},
    };
    // -inf (no items yet) has no JSON number; encode it as null
    if (items_seen_ == 0)
        j["max_weight"] = nullptr;
    else
        j["max_weight"] = max_weight_;
    if (latent_.partial_item())
        j["partial_item"] = item_to_json(*latent_.partial_item());
    else
        j["partial_item"] = nullptr;
    return j;
}

Sampler Sampler::from_json(const nlohmann::json& snapshot) {
    if (snapshot.at("version").get<int>() != 1)
        throw std::invalid_argument("unsupported snapshot version");

    Sampler s;
    s.bound_ = snapshot.at("n").get<std::size_t>();
    if (s.bound_ == 0) throw std::invalid_argument("snapshot has invalid bound");
    s.seed_ = snapshot.at("seed").get<std::uint64_t>();
    s.rng_.restore(snapshot.at("rng_state").get<std::array<std::uint64_t, 4>>());
    s.items_seen_ = snapshot.at("t").get<std::uint64_t>();
    s.total_weight_ = snapshot.at("total_weight").get<double>();
    s.max_weight_ = snapshot.at("max_weight").is_null()
                        ? -std::numeric_limits<double>::infinity()
                        : snapshot.at("max_weight").get<double>();
    s.rho_ = snapshot.at("rho").get<double>();
    s.counter_.total_discards = snapshot.at("discards").get<std::uint64_t>();
    s.counter_.items_seen = s.items_seen_;

    std::vector<WeightedItem> full;
    for (const auto& j : snapshot.at("full_items")) full.push_back(item_from_json(j));
    std::optional<WeightedItem> partial;
    if (!snapshot.at("partial_item").is_null())
        partial = item_from_json(snapshot.at("partial_item"));
    s.latent_ = LatentSample(std::move(full), std::move(partial),
                             snapshot.at("latent_size").get<double>());
    s.latent_.reserve(s.bound_);
    return s;
}

double closed_form_rho(const std::vector<double>& weights, std::size_t bound) {
    if (weights.empty()) return 0.0;
    double total = 0.0;
    double max_weight = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w <= 0.0)
            throw std::invalid_argument("weights must be positive and finite");
        total += w;
        max_weight = std::max(max_weight, w);
    }
    return std::min(1.0 / max_weight, static_cast<double>(bound) / total);
}

}  // namespace ebpps
