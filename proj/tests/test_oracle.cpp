// Copyright 2026 The ebpps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include <doctest.h>

#include "ebpps/oracle.hpp"

using namespace ebpps::oracle;

TEST_CASE("single item stream has inclusion probability one") {
    const auto probabilities = exhaustive_inclusion({1}, 1);
    REQUIRE(probabilities.size() == 1);
    CHECK(probabilities[0] == 1);
}

TEST_CASE("two unit weights with bound one split evenly") {
    const auto probabilities = exhaustive_inclusion({1, 1}, 1);
    CHECK(probabilities[0] == Rational(1, 2));
    CHECK(probabilities[1] == Rational(1, 2));
}

TEST_CASE("weights 1 and 3 with bound two") {
    const auto probabilities = exhaustive_inclusion({1, 3}, 2);
    CHECK(probabilities[0] == Rational(1, 3));
    CHECK(probabilities[1] == 1);
}

TEST_CASE("exhaustive enumeration equals the closed form on mixed streams") {
    const std::vector<std::vector<std::int64_t>> streams = {
        {1, 2, 3}, {3, 1, 2}, {2, 2, 2, 2}, {1, 1, 1, 1, 1}, {3, 3, 1},
        {1, 2, 1, 2}, {2, 3, 2, 3, 2},
    };
    for (const auto& stream : streams) {
        for (std::int64_t bound : {1, 2, 3}) {
            const auto exhaustive = exhaustive_inclusion(stream, bound);
            const auto closed = closed_form_inclusion(stream, bound);
            REQUIRE(exhaustive.size() == closed.size());
            for (std::size_t i = 0; i < closed.size(); ++i)
                CHECK(exhaustive[i] == closed[i]);
        }
    }
}

TEST_CASE("oracle downsample scales every inclusion probability exactly") {
    SUBCASE("fractional latent size with partial item") {
        const auto base = make_latent({0, 1, 2}, 3, Rational(7, 2));  // C = 3.5
        for (int numerator = 1; numerator <= 10; ++numerator) {
            const Rational theta(numerator, 10);
            const auto scaled = downsample(base, theta);
            for (int item = 0; item < 3; ++item)
                CHECK(inclusion_probability(scaled, item) == theta);
            CHECK(inclusion_probability(scaled, 3) == theta * Rational(1, 2));
        }
    }
    SUBCASE("integer latent size") {
        const auto base = make_latent({0, 1}, -1, Rational(2));
        for (const auto& theta : {Rational(1, 4), Rational(3, 4), Rational(9, 10)}) {
            const auto scaled = downsample(base, theta);
            CHECK(inclusion_probability(scaled, 0) == theta);
            CHECK(inclusion_probability(scaled, 1) == theta);
        }
    }
    SUBCASE("latent size below one") {
        const auto base = make_latent({}, 0, Rational(1, 2));
        const auto scaled = downsample(base, Rational(1, 3));
        CHECK(inclusion_probability(scaled, 0) == Rational(1, 6));
        CHECK(scaled.size == Rational(1, 6));
    }
    SUBCASE("landing exactly on an integer") {
        const auto base = make_latent({0, 1}, 2, Rational(5, 2));  // C = 2.5
        const auto scaled = downsample(base, Rational(4, 5));      // C' = 2
        CHECK(scaled.size == 2);
        CHECK(inclusion_probability(scaled, 0) == Rational(4, 5));
        CHECK(inclusion_probability(scaled, 2) == Rational(2, 5));
        for (const auto& [config, p] : scaled.configs) CHECK(config.partial == -1);
    }
}

TEST_CASE("oracle unite preserves inclusion probabilities in every case") {
    SUBCASE("fractions above one") {
        const auto left = make_latent({0}, 1, Rational(3, 2));        // 1.5
        const auto right = make_latent({2, 3}, 4, Rational(27, 10));  // 2.7
        const auto merged = unite(left, right);
        CHECK(merged.size == Rational(21, 5));  // 4.2
        CHECK(inclusion_probability(merged, 0) == 1);
        CHECK(inclusion_probability(merged, 1) == Rational(1, 2));
        CHECK(inclusion_probability(merged, 2) == 1);
        CHECK(inclusion_probability(merged, 4) == Rational(7, 10));
    }
    SUBCASE("fractions summing to one") {
        const auto left = make_latent({0}, 1, Rational(7, 5));   // 1.4
        const auto right = make_latent({}, 2, Rational(3, 5));   // 0.6
        const auto merged = unite(left, right);
        CHECK(merged.size == 2);
        CHECK(inclusion_probability(merged, 1) == Rational(2, 5));
        CHECK(inclusion_probability(merged, 2) == Rational(3, 5));
    }
    SUBCASE("fractions below one") {
        const auto left = make_latent({0}, 1, Rational(7, 5));   // 1.4
        const auto right = make_latent({}, 2, Rational(3, 10));  // 0.3
        const auto merged = unite(left, right);
        CHECK(merged.size == Rational(17, 10));
        CHECK(inclusion_probability(merged, 1) == Rational(2, 5));
        CHECK(inclusion_probability(merged, 2) == Rational(3, 10));
    }
    SUBCASE("empty left operand") {
        LatentDistribution empty;
        empty.configs.emplace(Config{}, Rational(1));
        const auto right = make_latent({0}, 1, Rational(3, 2));
        const auto merged = unite(empty, right);
        CHECK(merged.size == Rational(3, 2));
        CHECK(inclusion_probability(merged, 0) == 1);
        CHECK(inclusion_probability(merged, 1) == Rational(1, 2));
    }
    SUBCASE("both integer") {
        const auto left = make_latent({0}, -1, Rational(1));
        const auto right = make_latent({1, 2}, -1, Rational(2));
        const auto merged = unite(left, right);
        CHECK(merged.size == 3);
        CHECK(merged.configs.size() == 1);
        CHECK(inclusion_probability(merged, 0) == 1);
    }
}

TEST_CASE("oracle rejects invalid inputs") {
    CHECK_THROWS_AS(make_latent({0}, -1, Rational(3, 2)), std::invalid_argument);
    CHECK_THROWS_AS(make_latent({0}, 1, Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_inclusion({1, 0}, 2), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_inclusion({1}, 0), std::invalid_argument);
    const auto base = make_latent({0, 1}, -1, Rational(2));
    CHECK_THROWS_AS(downsample(base, Rational(3, 2)), std::invalid_argument);
}

TEST_CASE("oracle reports when the branch space outgrows its cap") {
    const std::vector<std::int64_t> wide(8, 1);
    CHECK_THROWS_AS(exhaustive_inclusion(wide, 3, /*max_configs=*/10),
                    std::length_error);
}
