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

#ifndef SPANEMBED_CANONICAL_HPP_
#define SPANEMBED_CANONICAL_HPP_

#include <string>
#include <vector>

#include "spanembed/graph.hpp"

namespace spanembed {

// Canonical labeling of a rooted graph. Two rooted graphs get equal codes
// iff they are isomorphic via a root-preserving map; the root always lands
// at canonical position 0.
struct CanonicalForm {
  std::string code;                 // byte string, deterministic across runs
  std::vector<Vertex> vertex_at;    // canonical position -> original vertex
  std::vector<Vertex> position_of;  // original vertex -> canonical position
};

// Backtracking canonical labeling with (distance-to-root, degree) refinement.
// Throws SpanError when v(H) > 32; the callers only feed small pockets.
CanonicalForm canonical_rooted_form(const Graph& h, Vertex root);

// Root-preserving isomorphism between two graphs with equal canonical codes:
// result[v] is the image in `to` of vertex v of `from`.
std::vector<Vertex> compose_iso(const CanonicalForm& from,
                                const CanonicalForm& to);

}  // namespace spanembed

#endif  // SPANEMBED_CANONICAL_HPP_
