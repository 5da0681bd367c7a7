// Copyright 2026 The ebpps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include <cmath>
#include <vector>

#include <doctest.h>

#include "ebpps/random_source.hpp"
#include "ebpps/sampler.hpp"
#include "ebpps/threshold_pps.hpp"

using namespace ebpps;

TEST_CASE("two-weight stream: tau = 2/3 and light items are over-included") {
    std::vector<double> weights(6, 1.0);
    weights.insert(weights.end(), 6, 4.0);
    const auto solution = solve_tau(weights, 10);
    CHECK(solution.tau == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    for (int i = 0; i < 6; ++i)
        CHECK(solution.inclusion[i] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    for (int i = 6; i < 12; ++i) CHECK(solution.inclusion[i] == 1.0);
    CHECK(solution.expected_size() == doctest::Approx(10.0).epsilon(1e-12));
    // light items end up 2/3 as likely as heavy ones instead of 1/4 as likely
    CHECK(pps_violation(solution) == doctest::Approx(5.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("fewer items than the target: everything is included") {
    const std::vector<double> weights = {2.0, 8.0, 0.5};
    const auto solution = solve_tau(weights, 3);
    CHECK(solution.tau == doctest::Approx(1.0 / 0.5));
    for (double p : solution.inclusion) CHECK(p == 1.0);
    const auto bigger = solve_tau(weights, 10);
    for (double p : bigger.inclusion) CHECK(p == 1.0);
}

TEST_CASE("uniform weights split the target evenly") {
    const std::vector<double> weights = {1.0, 1.0, 1.0, 1.0};
    const auto solution = solve_tau(weights, 2);
    CHECK(solution.tau == doctest::Approx(0.5).epsilon(1e-12));
    for (double p : solution.inclusion) CHECK(p == doctest::Approx(0.5));
    CHECK(pps_violation(solution) == 0.0);
}

TEST_CASE("without clipping the threshold design matches the exact scheme") {
    const std::vector<double> weights = {1.0, 2.0, 3.0};
    const auto solution = solve_tau(weights, 2);
    const double rho = closed_form_rho(weights, 2);
    CHECK(solution.tau == doctest::Approx(rho).epsilon(1e-12));
    for (std::size_t i = 0; i < weights.size(); ++i)
        CHECK(solution.inclusion[i] ==
              doctest::Approx(rho * weights[i]).epsilon(1e-12));
    CHECK(pps_violation(solution) <= 1e-12);
}

TEST_CASE("expected size always hits min(n, N); violation iff clipping") {
    RandomSource rng(314);
    for (int round = 0; round < 100; ++round) {
        const std::size_t count = 1 + rng.next_index(40);
        const std::size_t target = 1 + rng.next_index(20);
        std::vector<double> weights;
        for (std::size_t i = 0; i < count; ++i)
            weights.push_back(std::exp(std::log(0.1) + rng.next_double() * std::log(1000.0)));
        const auto solution = solve_tau(weights, target);

        const double expected = static_cast<double>(std::min(count, target));
        CHECK(std::abs(solution.expected_size() - expected) < 1e-9);

        double max_weight = 0.0;
        for (double w : weights) max_weight = std::max(max_weight, w);
        const bool clips = solution.tau * max_weight > 1.0 + 1e-12;
        if (clips)
            CHECK(pps_violation(solution) > 0.0);
        else
            CHECK(pps_violation(solution) <= 1e-9);
    }
}

TEST_CASE("parameter errors") {
    CHECK_THROWS_AS(solve_tau({}, 3), std::invalid_argument);
    CHECK_THROWS_AS(solve_tau({1.0, -2.0}, 3), std::invalid_argument);
    CHECK_THROWS_AS(solve_tau({1.0, 0.0}, 3), std::invalid_argument);
    CHECK_THROWS_AS(solve_tau({1.0}, 0), std::invalid_argument);
}
