// Copyright 2026 The spanembed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPANEMBED_HARNESS_HPP_
#define SPANEMBED_HARNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "spanembed/pipelines.hpp"

namespace spanembed {

// Shape parameters for the target-graph families. Fields irrelevant to a
// family are ignored.
struct TargetParams {
  std::size_t d = 1;       // d_power_path exponent
  std::size_t delta = 3;   // degree bound / clique size - 1
  double coverage = 0.8;   // factor_cycles: fraction covered by cliques
  double edge_p = 0.5;     // erdos_renyi_capped: density before capping
};

// Families: k_delta1_factor, d_power_path, random_forest, random_regular,
// cycle_union, erdos_renyi_capped, factor_cycles. Throws SpanError on an
// unknown kind or infeasible parameters (e.g. odd n*delta for regular).
Graph generate_test_graph(const std::string& kind, std::size_t n,
                          const TargetParams& params, RandomSource& rng);

struct ExperimentConfig {
  std::size_t n = 100;
  std::string mode = "bounded";  // degenerate | bounded | direct
  std::size_t d = 2;
  std::size_t delta = 3;
  std::vector<double> p_grid;  // ascending, each in (0, 1]
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::size_t retries = 5;
  double gamma = 0.05;
  double beta2 = 0.25;
  double lambda = 0.0125;
  std::size_t reservoir_k = 0;  // 0 = auto
  std::size_t template_m = 1;
  std::size_t template_z_degree = 3;
  std::string target_kind = "k_delta1_factor";
  std::size_t target_v = 0;  // target vertex count; 0 = host size
  double target_coverage = 0.8;
  double target_edge_p = 0.5;
  bool fixed_timing = false;  // zero the mean_ms column for byte-stable CSV
};

// Parses the JSON document (keys mirror the struct; the target generator
// lives in a nested "target" object with kind/v/coverage/edge_p) and
// validates the invariants. Throws SpanError with the offending key.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct TrialRecord {
  std::uint64_t stream = 0;
  double p = 0.0;
  bool success = false;
  std::string failing_phase;  // empty on success; else one of the four names
  double wall_ms = 0.0;
  std::vector<std::size_t> layer_occupancy;
  std::size_t d_size = 0;
  std::size_t t = 0;
  std::size_t absorber_x = 0;
  std::size_t absorber_y = 0;
  bool degraded = false;
};

// Deterministic given (cfg, p, stream): the stream seeds target generation,
// host exposures, and the embedding search independently.
TrialRecord run_trial(const ExperimentConfig& cfg, double p,
                      std::uint64_t stream);

// One CSV row per grid point, aggregated over trials dispatched on streams
// point_index * trials + trial_index. Returns the full document including
// the header `p,n,mode,trials,successes,fail_decompose,fail_absorber,
// fail_phase2,fail_matching,mean_ms`.
std::string sweep(const ExperimentConfig& cfg);

}  // namespace spanembed

#endif  // SPANEMBED_HARNESS_HPP_
