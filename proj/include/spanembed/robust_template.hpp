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

#ifndef SPANEMBED_ROBUST_TEMPLATE_HPP_
#define SPANEMBED_ROBUST_TEMPLATE_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "spanembed/rng.hpp"

namespace spanembed {

// Bipartite template with left side Z u Z' and right side X u Y u X'.
// Left ids: [0, z_count) is Z, [z_count, z_count + z_prime_count) is Z'.
// Right ids: [0, x_count) is X, then Y, then X'.
// Z' and X' are only populated by subdivide(); split_high_degree() grows
// Z and X by one vertex per step.
struct BipartiteTemplate {
  enum class Provenance { kBase, kSplit, kSubdivided };

  std::size_t z_count = 0;
  std::size_t z_prime_count = 0;
  std::size_t x_count = 0;
  std::size_t y_count = 0;
  std::size_t x_prime_count = 0;

  // left_adj[l] = sorted right ids adjacent to left vertex l.
  std::vector<std::vector<std::uint32_t>> left_adj;

  Provenance provenance = Provenance::kBase;

  // For subdivided templates: one entry per edge of the pre-subdivision
  // template. seq alternates sides starting and ending on the original
  // endpoints: seq[0] = z (left), seq.back() = v (right); even positions
  // are left ids, odd positions right ids.
  struct Path {
    std::uint32_t z = 0;
    std::uint32_t v = 0;
    std::vector<std::uint32_t> seq;
  };
  std::vector<Path> paths;

  std::size_t left_size() const { return z_count + z_prime_count; }
  std::size_t right_size() const { return x_count + y_count + x_prime_count; }
  // Non-Y right vertices; the matching side Y' subsets are drawn from Y only.
  std::size_t non_y_right_size() const { return x_count + x_prime_count; }
  bool right_is_y(std::uint32_t r) const {
    return r >= x_count && r < x_count + y_count;
  }
  std::size_t edge_count() const;
};

// Random template with |Z| = 3m, |X| = |Y| = 2m, every Z-vertex with exactly
// z_degree distinct right neighbors, right degrees capped at 40 by per-vertex
// rejection. Robustness is NOT guaranteed; callers verify and resample.
// Throws SpanError when the degree constraints are infeasible.
BipartiteTemplate make_base_template(std::size_t m, std::size_t z_degree,
                                     RandomSource& rng);

struct RobustVerdict {
  bool robust = false;
  // First failing Y' (right ids), empty when robust.
  std::vector<std::uint32_t> counterexample;
  std::size_t subsets_checked = 0;
};

// Y-robustness: for every Y' subset of Y with |Y'| = left_size - non-Y right
// size, the template restricted to right side (X u X') u Y' has a perfect
// matching saturating the left side. sample_trials == 0 checks every subset;
// otherwise that many uniformly random subsets (rng required).
// Precondition (throws): non_y_right < left < non_y_right + |Y|.
RobustVerdict verify_Y_robust(const BipartiteTemplate& b,
                              std::size_t sample_trials = 0,
                              RandomSource* rng = nullptr);

// Splits every Z-vertex of degree >= 4: remove v, add v1 adjacent to
// {u} u N1 and v2 adjacent to {u} u N2 where N2 holds the two largest
// neighbors of v and u is a fresh X-vertex. Repeats until all Z-degrees
// are <= 3. |Z| and |X| each grow by one per step.
BipartiteTemplate split_high_degree(const BipartiteTemplate& b);

// Replaces each edge zv by a path of odd length `length`, internal vertices
// alternating X', Z', ... from the z side, (length-1)/2 added to each side.
// Retains per-edge path maps. Throws on even or < 3 length or when the
// input is already subdivided.
BipartiteTemplate subdivide(const BipartiteTemplate& b, std::size_t length);

// Text form: header "left non_y_right y" then one "l r" line per edge, with
// right ids remapped so the non-Y block is contiguous before Y. Provenance
// and path maps are not round-tripped; robustness semantics are preserved.
void write_template(std::ostream& out, const BipartiteTemplate& b);
BipartiteTemplate read_template(std::istream& in);

}  // namespace spanembed

#endif  // SPANEMBED_ROBUST_TEMPLATE_HPP_
