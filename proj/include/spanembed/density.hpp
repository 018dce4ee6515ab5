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

#ifndef SPANEMBED_DENSITY_HPP_
#define SPANEMBED_DENSITY_HPP_

#include <cstddef>
#include <vector>

#include "spanembed/graph.hpp"
#include "spanembed/rational.hpp"

namespace spanembed {

// Exact density value together with a subgraph attaining it.
struct DensityValue {
  Rational value;
  VertexSubset witness;
};

// max e(H')/v(H') over nonempty subgraphs. Requires e(H) >= 1. Exhaustive
// enumeration for v(H) <= 20, flow oracle beyond.
DensityValue m_density(const Graph& h);

// max e(F')/(v(F') - 1) over subgraphs with v(F') >= 2. Requires v(F) >= 2
// and e(F) >= 1.
DensityValue m1_density(const Graph& f);

// max e(F')/(v(F') - max{1, |V(F') ∩ X|}) over subgraphs with e(F') > 0,
// positive denominator, and either X ⊆ V(F') or X ∩ V(F') = ∅.
DensityValue rooted_density(const Graph& f, const VertexSubset& x);

// max e(F')/(v(F') - c) over subgraphs with e(F') >= 1 containing all of
// `forced`, none of `forbidden`, and more than c vertices, through a
// parametric min-cut oracle with exact rational arithmetic. Supports
// c <= |forced| and the (forced = ∅, c = 1) case; anchored sub-runs keep
// every candidate denominator positive.
DensityValue densest_subgraph_flow(const Graph& f,
                                   std::size_t denominator_offset,
                                   const VertexSubset& forced,
                                   const VertexSubset& forbidden);

// Exhaustive counterpart of densest_subgraph_flow over all subsets
// (any denominator offset; at most 20 free vertices). Witness ties break to
// the lexicographically smallest vertex set.
DensityValue densest_subgraph_exhaustive(const Graph& f,
                                         std::size_t denominator_offset,
                                         const VertexSubset& forced,
                                         const VertexSubset& forbidden);

// F plus 3 new pairwise-nonadjacent vertices (ids v(F), v(F)+1, v(F)+2),
// each adjacent to exactly Γ.
Graph build_F_gamma_plus(const Graph& f, const VertexSubset& gamma);

// Alternating gadget path: length L (even) yields L/2 + 1 outside vertices
// interleaved with L/2 disjoint copies of F; each outside vertex is joined
// to the Γ-sets of its neighboring copies.
struct GadgetSpec {
  Graph base;
  VertexSubset gamma;
  std::size_t length = 0;
};

struct PathGadget {
  Graph graph;
  Vertex w = 0;        // first outside vertex
  Vertex w_prime = 0;  // last outside vertex
  std::vector<Vertex> outside;
  std::vector<std::vector<Vertex>> copies;  // copies[j][k] = image of base k
};

PathGadget build_F_gamma_path(const GadgetSpec& spec);

}  // namespace spanembed

#endif  // SPANEMBED_DENSITY_HPP_
