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

#ifndef SPANEMBED_PIPELINES_HPP_
#define SPANEMBED_PIPELINES_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spanembed/absorber.hpp"
#include "spanembed/decompose.hpp"

namespace spanembed {

struct EmbedConfig {
  std::size_t retries = 5;  // full pipeline attempts with fresh streams
  double gamma = 0.05;      // capacity slack for the direct embedding modes
  double beta2 = 0.25;      // isolated-fraction budget for the R-partition
  double lambda = 0.0125;   // diagnostic expansion ratio (gamma / 4)
  std::size_t reservoir_k = 0;  // layer count; 0 = auto from host size
  std::size_t template_m = 1;
  std::size_t template_z_degree = 3;
  std::size_t template_retries = 50;  // robust-template resamples
  CopySearchBudget copy_budget;
  std::size_t separation_degenerate = 0;  // pocket spacing; 0 = 20 d^2
  std::size_t separation_bounded = 0;     // pocket spacing; 0 = 4 delta + 5
};

struct EmbedOutcome {
  bool success = false;
  // Total embedding of the argument target on success (original ids, even
  // when the pipeline padded the target to spanning size internally).
  PartialEmbedding phi;
  std::optional<Failure> failure;  // last attempt's failure when !success
  bool degraded = false;           // fell back to the direct layered path
  std::string degradation_reason;
  std::size_t d_size = 0;  // anchors used
  std::size_t t = 0;       // absorber left size (bounded mode)
  std::vector<Vertex> absorber_x;
  std::vector<Vertex> absorber_y;
  std::vector<std::size_t> layer_occupancy;
  std::vector<std::string> trace;  // per-phase event log
};

// Three-exposure pipeline for d-degenerate targets: pocket copies in the
// first exposure, layered S-embedding of the rest in the second avoiding a
// random X of size 3t/4, anchors matched into the free hosts via the third.
// Throws SpanError on precondition violations (shape mismatches, target not
// d-degenerate, degree above delta); search failures are returned.
EmbedOutcome embed_degenerate(const std::vector<Graph>& exposures,
                              const Graph& h, std::size_t d, std::size_t delta,
                              const EmbedConfig& cfg, RandomSource& rng);

// Two-exposure pipeline for bounded-degree targets: absorber realization and
// pocket placement in the first exposure, the three-stage layered embedding
// of the rest in the second, anchors resolved through the absorber's robust
// matching. Requires delta >= 3.
EmbedOutcome embed_bounded(const std::vector<Graph>& exposures, const Graph& h,
                           std::size_t delta, const EmbedConfig& cfg,
                           RandomSource& rng);

}  // namespace spanembed

#endif  // SPANEMBED_PIPELINES_HPP_
