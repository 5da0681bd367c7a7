// Copyright 2026 The ebpps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include "ebpps/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace ebpps::oracle {

namespace {

using boost::multiprecision::cpp_int;

cpp_int floor_int(const Rational& value) {
    // values are non-negative throughout
    return numerator(value) / denominator(value);
}

void add_config(std::map<Config, Rational>& configs, Config config,
                const Rational& probability, std::size_t max_configs) {
    std::sort(config.full.begin(), config.full.end());
    configs[std::move(config)] += probability;
    if (configs.size() > max_configs)
        throw std::length_error("oracle branch space exceeds the configuration cap");
}

// Invokes fn on every subset of `items` of the given size.
template <typename Fn>
void for_each_subset(const std::vector<int>& items, std::size_t size, Fn&& fn) {
    std::vector<int> chosen;
    chosen.reserve(size);
    auto recurse = [&](auto&& self, std::size_t from) -> void {
        if (chosen.size() == size) {
            fn(chosen);
            return;
        }
        const std::size_t needed = size - chosen.size();
        for (std::size_t i = from; i + needed <= items.size(); ++i) {
            chosen.push_back(items[i]);
            self(self, i + 1);
            chosen.pop_back();
        }
    };
    recurse(recurse, 0);
}

Rational binomial(std::size_t n, std::size_t k) {
    Rational result = 1;
    for (std::size_t i = 0; i < k; ++i)
        result *= Rational(static_cast<long>(n - i), static_cast<long>(i + 1));
    return result;
}

void check_probability_mass(const LatentDistribution& dist) {
    Rational total = 0;
    for (const auto& [config, p] : dist.configs) total += p;
    if (total != 1)
        throw std::logic_error("oracle probability mass does not sum to one");
}

}  // namespace

Rational floor_of(const Rational& value) { return Rational(floor_int(value)); }

Rational fractional_of(const Rational& value) { return value - floor_of(value); }

LatentDistribution make_latent(std::vector<int> full_items, int partial_item,
                               Rational size) {
    if (size < 0) throw std::invalid_argument("latent size must be non-negative");
    if (cpp_int(full_items.size()) != floor_int(size))
        throw std::invalid_argument("full item count must equal floor(latent size)");
    if ((partial_item >= 0) != (fractional_of(size) > 0))
        throw std::invalid_argument("partial item present iff latent size is fractional");
    LatentDistribution dist;
    dist.size = std::move(size);
    Config config{std::move(full_items), partial_item};
    std::sort(config.full.begin(), config.full.end());
    dist.configs.emplace(std::move(config), Rational(1));
    return dist;
}

LatentDistribution downsample(const LatentDistribution& dist, const Rational& theta,
                              std::size_t max_configs) {
    if (theta < 0 || theta > 1)
        throw std::invalid_argument("downsample factor must lie in [0,1]");
    if (dist.size <= 0)
        throw std::logic_error("cannot downsample an empty latent sample");
    if (theta == 1) return dist;

    const Rational old_size = dist.size;
    const Rational new_size = theta * old_size;
    const Rational old_frac = fractional_of(old_size);
    const Rational new_frac = fractional_of(new_size);
    const cpp_int old_floor = floor_int(old_size);
    const cpp_int new_floor = floor_int(new_size);

    LatentDistribution result;
    result.size = new_size;

    // the final "no fractional item" cleanup of the operation
    const auto emit = [&](Config config, const Rational& probability) {
        if (probability == 0) return;
        if (new_frac == 0) config.partial = -1;
        add_config(result.configs, std::move(config), probability, max_configs);
    };

    for (const auto& [config, p] : dist.configs) {
        const auto full_count = config.full.size();
        if (new_floor == 0) {
            // only the partial slot survives
            if (config.partial < 0) {
                for (int item : config.full) emit({{}, item}, p / full_count);
            } else {
                const Rational keep = old_frac / old_size;
                emit({{}, config.partial}, p * keep);
                if (keep != 1)
                    for (int item : config.full)
                        emit({{}, item}, p * (1 - keep) / full_count);
            }
        } else if (new_floor == cpp_int(full_count)) {
            // no items deleted; the partial may be converted to full
            const Rational keep = (1 - theta * old_frac) / (1 - new_frac);
            emit(config, p * keep);
            if (keep != 1) {
                for (std::size_t j = 0; j < full_count; ++j) {
                    Config next = config;
                    next.full[j] = config.partial;
                    next.partial = config.full[j];
                    emit(std::move(next), p * (1 - keep) / full_count);
                }
            }
        } else {
            // items deleted: sample the survivors, then pick the new partial
            const auto retained = new_floor.convert_to<std::size_t>();
            const Rational keep_partial =
                config.partial >= 0 ? theta * old_frac : Rational(0);
            if (keep_partial != 0) {
                const Rational per_subset =
                    p * keep_partial / (binomial(full_count, retained) * retained);
                for_each_subset(config.full, retained, [&](const std::vector<int>& kept) {
                    for (std::size_t j = 0; j < kept.size(); ++j) {
                        Config next;
                        next.full = kept;
                        next.full[j] = config.partial;
                        next.partial = kept[j];
                        emit(std::move(next), per_subset);
                    }
                });
            }
            const Rational per_subset = p * (1 - keep_partial) /
                                        (binomial(full_count, retained + 1) *
                                         (retained + 1));
            for_each_subset(config.full, retained + 1, [&](const std::vector<int>& kept) {
                for (std::size_t j = 0; j < kept.size(); ++j) {
                    Config next;
                    next.full = kept;
                    next.full.erase(next.full.begin() + static_cast<long>(j));
                    next.partial = kept[j];
                    emit(std::move(next), per_subset);
                }
            });
        }
    }

    check_probability_mass(result);
    return result;
}

LatentDistribution unite(const LatentDistribution& left,
                         const LatentDistribution& right,
                         std::size_t max_configs) {
    const Rational frac_left = fractional_of(left.size);
    const Rational frac_right = fractional_of(right.size);

    LatentDistribution result;
    result.size = left.size + right.size;

    const auto emit = [&](Config config, const Rational& probability) {
        if (probability == 0) return;
        add_config(result.configs, std::move(config), probability, max_configs);
    };

    for (const auto& [config_left, p_left] : left.configs) {
        for (const auto& [config_right, p_right] : right.configs) {
            const Rational p = p_left * p_right;
            Config merged;
            merged.full = config_left.full;
            merged.full.insert(merged.full.end(), config_right.full.begin(),
                               config_right.full.end());
            if (frac_left == 0 && frac_right == 0) {
                merged.partial = -1;
                emit(std::move(merged), p);
            } else if (frac_left + frac_right == 1) {
                Config keep_left = merged;
                keep_left.full.push_back(config_left.partial);
                keep_left.partial = -1;
                emit(std::move(keep_left), p * frac_left);
                merged.full.push_back(config_right.partial);
                merged.partial = -1;
                emit(std::move(merged), p * frac_right);
            } else if (frac_left + frac_right < 1) {
                if (frac_left != 0) {
                    Config keep_left = merged;
                    keep_left.partial = config_left.partial;
                    emit(std::move(keep_left), p * frac_left / (frac_left + frac_right));
                }
                if (frac_right != 0) {
                    merged.partial = config_right.partial;
                    emit(std::move(merged), p * frac_right / (frac_left + frac_right));
                }
            } else {
                const Rational keep_left =
                    (1 - frac_left) / ((1 - frac_left) + (1 - frac_right));
                Config left_partial = merged;
                left_partial.full.push_back(config_right.partial);
                left_partial.partial = config_left.partial;
                emit(std::move(left_partial), p * keep_left);
                merged.full.push_back(config_left.partial);
                merged.partial = config_right.partial;
                emit(std::move(merged), p * (1 - keep_left));
            }
        }
    }

    check_probability_mass(result);
    return result;
}

Rational inclusion_probability(const LatentDistribution& dist, int item) {
    const Rational frac = fractional_of(dist.size);
    Rational total = 0;
    for (const auto& [config, p] : dist.configs) {
        if (std::binary_search(config.full.begin(), config.full.end(), item))
            total += p;
        else if (config.partial == item)
            total += p * frac;
    }
    return total;
}

std::vector<Rational> exhaustive_inclusion(const std::vector<std::int64_t>& weights,
                                           std::int64_t bound,
                                           std::size_t max_configs) {
    if (bound <= 0) throw std::invalid_argument("bound must be at least 1");
    for (auto w : weights)
        if (w <= 0) throw std::invalid_argument("weights must be positive");

    LatentDistribution state;  // empty, size 0
    state.configs.emplace(Config{}, Rational(1));

    cpp_int total_weight = 0;
    cpp_int max_weight = 0;
    Rational rho = 0;

    for (std::size_t t = 0; t < weights.size(); ++t) {
        const cpp_int weight = weights[t];
        const cpp_int new_max = std::max(max_weight, weight);
        const cpp_int new_total = total_weight + weight;
        const Rational new_rho = std::min(Rational(cpp_int(1), new_max),
                                          Rational(cpp_int(bound), new_total));

        if (total_weight > 0)
            state = downsample(state, new_rho / rho, max_configs);

        LatentDistribution incoming =
            make_latent({static_cast<int>(t)}, -1, Rational(1));
        const Rational incoming_theta = new_rho * Rational(weight);
        if (incoming_theta != 1)
            incoming = downsample(incoming, incoming_theta, max_configs);
        state = unite(state, incoming, max_configs);

        total_weight = new_total;
        max_weight = new_max;
        rho = new_rho;
    }

    std::vector<Rational> inclusion;
    inclusion.reserve(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
        inclusion.push_back(inclusion_probability(state, static_cast<int>(i)));
    return inclusion;
}

std::vector<Rational> closed_form_inclusion(const std::vector<std::int64_t>& weights,
                                            std::int64_t bound) {
    if (bound <= 0) throw std::invalid_argument("bound must be at least 1");
    if (weights.empty()) return {};
    cpp_int total = 0;
    cpp_int max_weight = 0;
    for (auto w : weights) {
        if (w <= 0) throw std::invalid_argument("weights must be positive");
        total += w;
        max_weight = std::max(max_weight, cpp_int(w));
    }
    const Rational rho = std::min(Rational(cpp_int(1), max_weight),
                                  Rational(cpp_int(bound), total));
    std::vector<Rational> inclusion;
    inclusion.reserve(weights.size());
    for (auto w : weights) inclusion.push_back(rho * Rational(w));
    return inclusion;
}

}  // namespace ebpps::oracle
