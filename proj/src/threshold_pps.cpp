// Copyright 2026 The ebpps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include "ebpps/threshold_pps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ebpps {

double ThresholdSolution::expected_size() const {
    return std::accumulate(inclusion.begin(), inclusion.end(), 0.0);
}

ThresholdSolution solve_tau(const std::vector<double>& weights,
                            std::size_t target_size) {
    if (target_size == 0)
        throw std::invalid_argument("target sample size must be at least 1");
    if (weights.empty())
        throw std::invalid_argument("weights must be non-empty");
    for (double w : weights)
        if (!std::isfinite(w) || w <= 0.0)
            throw std::invalid_argument("weights must be positive and finite");

    ThresholdSolution solution;
    solution.weights = weights;
    const std::size_t count = weights.size();

    if (count <= target_size) {
        solution.tau = 1.0 / *std::min_element(weights.begin(), weights.end());
        solution.inclusion.assign(count, 1.0);
        return solution;
    }

    std::vector<double> sorted(weights);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    // suffix[k] = sum of weights below the k heaviest
    std::vector<double> suffix(count + 1, 0.0);
    for (std::size_t i = count; i-- > 0;) suffix[i] = suffix[i + 1] + sorted[i];

    // On the segment where exactly k items clip at probability 1 the
    // constraint reads k + tau * suffix[k] = n, linear in tau. Scan k until
    // the solved tau actually lies on that segment.
    double tau = 0.0;
    bool found = false;
    for (std::size_t clipped = 0; clipped < std::min(count, target_size); ++clipped) {
        const double candidate =
            (static_cast<double>(target_size) - static_cast<double>(clipped)) /
            suffix[clipped];
        const bool clips_enough =
            clipped == 0 || candidate * sorted[clipped - 1] >= 1.0 - 1e-12;
        const bool clips_no_more = candidate * sorted[clipped] <= 1.0 + 1e-12;
        if (clips_enough && clips_no_more) {
            tau = candidate;
            found = true;
            break;
        }
    }
    if (!found)
        throw std::logic_error("threshold breakpoint scan failed to bracket tau");

    solution.tau = tau;
    solution.inclusion.reserve(count);
    for (double w : weights)
        solution.inclusion.push_back(std::min(1.0, tau * w));
    return solution;
}

double pps_violation(const ThresholdSolution& solution) {
    // p_i/w_i is constant under exact proportionality; the largest pairwise
    // ratio distortion is the spread of that quotient.
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < solution.weights.size(); ++i) {
        const double q = solution.inclusion[i] / solution.weights[i];
        lo = std::min(lo, q);
        hi = std::max(hi, q);
    }
    return hi / lo - 1.0;
}

}  // namespace ebpps
