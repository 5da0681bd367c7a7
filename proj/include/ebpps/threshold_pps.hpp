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

#include <cstddef>
#include <vector>

namespace ebpps {

/// Threshold-based size-n inclusion design: item i is included with
/// probability min(1, tau * w_i), tau chosen so the probabilities sum to n.
/// The classical family this library's sampler is contrasted against --
/// it pins the sample size but lets heavy items be over-represented,
/// breaking proportionality whenever any weight clips at 1.
struct ThresholdSolution {
    double tau = 0.0;
    std::vector<double> weights;    // input order
    std::vector<double> inclusion;  // min(1, tau * w_i), input order

    double expected_size() const;
};

/// Solves sum_i min(1, tau * w_i) = target_size for tau by scanning the
/// breakpoints of the piecewise-linear left side (exact; no bisection).
/// With fewer items than target_size every probability is 1 and
/// tau = 1 / min weight. Batch-only by nature: all weights are needed
/// up front. Throws std::invalid_argument on empty/non-positive weights
/// or target_size == 0.
ThresholdSolution solve_tau(const std::vector<double>& weights,
                            std::size_t target_size);

/// Worst pairwise distortion of proportionality:
/// max over pairs of |(p_i/p_j) * (w_j/w_i) - 1|. Zero exactly when no
/// weight clips, in which case the threshold design and the exact scheme
/// coincide.
double pps_violation(const ThresholdSolution& solution);

}  // namespace ebpps
