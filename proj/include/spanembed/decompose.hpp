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

#ifndef SPANEMBED_DECOMPOSE_HPP_
#define SPANEMBED_DECOMPOSE_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "spanembed/graph.hpp"

namespace spanembed {

// Anchor set D with one pocket S_w per anchor, all pockets inducing the same
// rooted graph F* via root-preserving isomorphisms.
struct Decomposition {
  std::vector<Vertex> anchors;  // D, ascending
  // pockets[i] = sorted vertex set S_{anchors[i]}.
  std::vector<std::vector<Vertex>> pockets;
  Graph f_star;
  Vertex root = 0;  // z* in F*
  // pocket_map[i][j] = the H-vertex playing F*-vertex j in pocket i;
  // pocket_map[i][root] == anchors[i].
  std::vector<std::vector<Vertex>> pocket_map;
  double k_effective = 0.0;  // n / |D|
  // Canonical-form bucket sizes found before selecting the largest.
  std::map<std::string, std::size_t> bucket_histogram;
};

// Low-degree harvest, distance-k greedy anchors, pocket growth (absorb while
// some outside vertex has >= d+1 pocket-neighbors), canonical bucketing.
// Pre: H d-degenerate with max degree <= delta (verified); k >= 2*(3d^2)+2.
// Throws SpanError on precondition violations or an empty largest bucket.
Decomposition decompose_degenerate(const Graph& h, std::size_t d,
                                   std::size_t delta, std::size_t k);

// Bounded-degree variant: harvest everything, grow pockets by absorbing
// vertices with exactly delta pocket-neighbors, pocket size <= 2*delta.
// Pre: max degree <= delta; k >= 4*delta+5.
Decomposition decompose_bounded(const Graph& h, std::size_t delta,
                                std::size_t k);

struct DecompositionReport {
  bool d1_pass = true;  // {w} u N(w) inside S_w (+ degree cap in deg. mode)
  bool d2_pass = true;  // root-preserving isomorphism to F*
  bool d3_pass = true;  // pockets disjoint, no cross edges
  bool d4_pass = true;  // outside vertices see few pocket vertices
  // First offending vertex per failed item; meaningful only on failure.
  Vertex d1_witness = 0;
  Vertex d2_witness = 0;
  Vertex d3_witness = 0;
  Vertex d4_witness = 0;
  bool all_pass() const { return d1_pass && d2_pass && d3_pass && d4_pass; }
};

// mode_degenerate: checks (D1) with |N(w)| <= 2d and (D4) with bound d;
// otherwise (D4) uses delta-1 and (D1) has no degree cap.
DecompositionReport verify_decomposition(const Graph& h,
                                         const Decomposition& dec,
                                         bool mode_degenerate, std::size_t d,
                                         std::size_t delta);

struct RPartition {
  std::vector<Vertex> r1;
  std::vector<Vertex> independent;  // I
  std::vector<Vertex> r2;
  std::size_t k_bucket = 0;  // chosen |(N u N^2)(h) \ {h}| size
  std::size_t t = 0;         // anchor count
};

// Splits R = V(H) \ union of pockets into R1 u I u R2: I holds vertices at
// pairwise distance >= 5 and distance >= 5 from the pockets, all with the
// same punctured ball size k_bucket; R2 = their exact union of balls;
// |I| = min(floor(beta2*t/(2k)), available) maximized over k.
// beta2 == 0 yields I = R2 = {} without searching.
RPartition partition_R(const Graph& h, const Decomposition& dec, double beta2,
                       std::size_t delta);

}  // namespace spanembed

#endif  // SPANEMBED_DECOMPOSE_HPP_
