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

#ifndef SPANEMBED_RANDOM_MODEL_HPP_
#define SPANEMBED_RANDOM_MODEL_HPP_

#include <string>
#include <vector>

#include "spanembed/graph.hpp"
#include "spanembed/rng.hpp"

namespace spanembed {

// Per-round probability q with (1-q)^r = 1-p. The p = 1, r > 1 corner is
// representable (q = 1) but flagged.
struct ExposureSplit {
  double p = 0.0;
  std::size_t r = 1;
  double q = 0.0;
  bool flagged = false;
};

// Each of the C(n,2) pairs included independently with probability p.
// Deterministic given the rng state; sparse p uses geometric skipping over
// the linear pair index, dense p a per-pair Bernoulli draw (crossover 0.2).
Graph sample_gnp(std::size_t n, double p, RandomSource& rng);

ExposureSplit split_exposure(double p, std::size_t r);

// r independent G(n,q) rounds whose union is distributed as G(n,p).
std::vector<Graph> sample_exposures(std::size_t n, double p, std::size_t r,
                                    RandomSource& rng);

// Empirical check of the two-regime neighborhood-expansion bounds on the
// auxiliary bipartite graph between a family of disjoint d-sets and U.
// Diagnostic only; nothing downstream gates on it. Logs use natural log.
struct ExpansionRegimeCheck {
  std::string regime;  // "small", "large", or "gap" (no bound applies)
  double bound = 0.0;
  std::size_t observed = 0;
  bool pass = true;  // vacuously true in the gap regime
};

struct ExpansionFamilyReport {
  std::size_t family_size = 0;
  std::size_t u_size = 0;
  bool u_overlaps_members = false;  // recorded, not an error
  ExpansionRegimeCheck forward;     // |N(𝓛)| among U vs family-size regime
  ExpansionRegimeCheck reverse;     // |N(U)| among the family vs |U| regime
};

std::vector<ExpansionFamilyReport> check_expansion(
    const Graph& g, const VertexSubset& u, std::size_t d,
    const std::vector<std::vector<std::vector<Vertex>>>& families,
    double lambda, double p);

}  // namespace spanembed

#endif  // SPANEMBED_RANDOM_MODEL_HPP_
