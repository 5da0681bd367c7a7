// Copyright 2026 The ebpps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License is
// distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ebpps/oracle.hpp"
#include "ebpps/sampler.hpp"
#include "ebpps/threshold_pps.hpp"
#include "ebpps/verify.hpp"

namespace py = pybind11;

namespace {

std::vector<std::pair<std::string, double>> sample_to_pairs(const ebpps::Sample& s) {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(s.size());
    for (const auto& item : s) out.emplace_back(item.id, item.weight);
    return out;
}

std::vector<ebpps::WeightedItem> pairs_to_stream(
    const std::vector<std::pair<std::string, double>>& pairs) {
    std::vector<ebpps::WeightedItem> stream;
    stream.reserve(pairs.size());
    for (const auto& [id, weight] : pairs) stream.push_back({id, weight});
    return stream;
}

}  // namespace

PYBIND11_MODULE(_ebpps, m) {
    m.doc() = "Single-pass bounded-size sampling with exact "
              "probability-proportional-to-size guarantees";

    py::class_<ebpps::Sampler>(m, "Sampler")
        .def(py::init<std::size_t, std::uint64_t>(), py::arg("bound"),
             py::arg("seed") = 0,
             "One-pass sampler keeping at most `bound` items, each present "
             "with probability exactly proportional to its weight.")
        .def("process",
             [](ebpps::Sampler& self, const std::string& id, double weight) {
                 self.process(id, weight);
             },
             py::arg("id"), py::arg("weight"))
        .def("extract",
             [](ebpps::Sampler& self) { return sample_to_pairs(self.extract()); },
             "Materialize a sample as a list of (id, weight) pairs; "
             "repeatable, does not disturb the sampler.")
        .def("inclusion_probability", &ebpps::Sampler::inclusion_probability,
             py::arg("weight"))
        .def_property_readonly("bound", &ebpps::Sampler::bound)
        .def_property_readonly("items_seen", &ebpps::Sampler::items_seen)
        .def_property_readonly("total_weight", &ebpps::Sampler::total_weight)
        .def_property_readonly("max_weight", &ebpps::Sampler::max_weight)
        .def_property_readonly("rho", &ebpps::Sampler::rho)
        .def_property_readonly("expected_sample_size",
                               &ebpps::Sampler::expected_sample_size)
        .def_property_readonly("latent_size",
                               [](const ebpps::Sampler& self) {
                                   return self.latent().latent_size();
                               })
        .def_property_readonly("total_discards",
                               [](const ebpps::Sampler& self) {
                                   return self.discards().total_discards;
                               })
        .def("to_json",
             [](const ebpps::Sampler& self) { return self.to_json().dump(); },
             "Snapshot of the full sampler state as a JSON string.")
        .def_static("from_json",
                    [](const std::string& text) {
                        return ebpps::Sampler::from_json(nlohmann::json::parse(text));
                    },
                    py::arg("snapshot"),
                    "Restore a sampler from a to_json() snapshot, bit-exactly.")
        .def("__repr__", [](const ebpps::Sampler& self) {
            std::ostringstream out;
            out << "Sampler(bound=" << self.bound() << ", items_seen="
                << self.items_seen() << ", latent_size="
                << self.latent().latent_size() << ")";
            return out.str();
        });

    py::class_<ebpps::ThresholdSolution>(m, "ThresholdSolution")
        .def_readonly("tau", &ebpps::ThresholdSolution::tau)
        .def_readonly("weights", &ebpps::ThresholdSolution::weights)
        .def_readonly("inclusion", &ebpps::ThresholdSolution::inclusion)
        .def("expected_size", &ebpps::ThresholdSolution::expected_size);

    m.def("solve_tau", &ebpps::solve_tau, py::arg("weights"), py::arg("target_size"),
          "Threshold-PPS baseline: tau with sum(min(1, tau*w)) = target_size.");
    m.def("pps_violation", &ebpps::pps_violation, py::arg("solution"),
          "Worst pairwise proportionality distortion of a threshold solution.");
    m.def("closed_form_rho", &ebpps::closed_form_rho, py::arg("weights"),
          py::arg("bound"),
          "min(1/max w, bound/sum w): the per-unit-weight inclusion probability.");

    m.def("monte_carlo_inclusion_json",
          [](const std::vector<std::pair<std::string, double>>& stream,
             std::size_t bound, std::uint64_t trials, std::uint64_t seed,
             unsigned threads) {
              return ebpps::verify::monte_carlo_inclusion(pairs_to_stream(stream),
                                                          bound, trials, seed,
                                                          threads)
                  .to_json()
                  .dump();
          },
          py::arg("stream"), py::arg("bound"), py::arg("trials"),
          py::arg("seed") = 0, py::arg("threads") = 0,
          "Monte-Carlo verification report as a JSON string.");

    m.def("branch_coverage_json",
          [](std::uint64_t seed, std::uint64_t trials) {
              return ebpps::verify::branch_coverage_suite(seed, trials)
                  .to_json()
                  .dump();
          },
          py::arg("seed") = 0xEBB5ULL, py::arg("trials") = 200000,
          "Branch-coverage verification report as a JSON string.");

    m.def("exhaustive_inclusion",
          [](const std::vector<std::int64_t>& weights, std::int64_t bound) {
              const auto probabilities =
                  ebpps::oracle::exhaustive_inclusion(weights, bound);
              std::vector<std::string> out;
              out.reserve(probabilities.size());
              for (const auto& p : probabilities) {
                  std::ostringstream text;
                  text << p;
                  out.push_back(text.str());
              }
              return out;
          },
          py::arg("weights"), py::arg("bound"),
          "Exact per-item inclusion probabilities as rational strings, from "
          "full enumeration of the algorithm's random branches.");

    m.attr("__version__") = "0.1.0";
}
