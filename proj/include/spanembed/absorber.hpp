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

#ifndef SPANEMBED_ABSORBER_HPP_
#define SPANEMBED_ABSORBER_HPP_

#include <cstddef>
#include <vector>

#include "spanembed/embed.hpp"
#include "spanembed/robust_template.hpp"

namespace spanembed {

// Host realization of a bipartite template: every left vertex is a hosted
// copy of F whose Γ-image stands in for it, every right vertex a single
// host vertex adjacent to the Γ-images of its template neighbors.
struct Absorber {
  // copies[l][k] = host vertex playing f-vertex k in left vertex l's copy.
  std::vector<std::vector<Vertex>> copies;
  // gammas[l] = sorted Γ-image of left vertex l; the aux left sets.
  std::vector<std::vector<Vertex>> gammas;
  // right_image[r] = host vertex for template right id r.
  std::vector<Vertex> right_image;
  std::vector<Vertex> x_image;  // X then X' images, template order
  std::vector<Vertex> y_image;  // Y images, template order
  std::size_t t = 0;            // left side size
  // |X u X'| = (1 - beta1) t and |Y| = (beta1 + beta2) t.
  double beta1 = 0.0;
  double beta2 = 0.0;
  DynBitset used;  // every host vertex the realization occupies
};

// Hosts the template in the exposure: one copy of F plus three outside
// vertices per original Z-vertex (the outsides identified with the images
// of its right neighbors, at most 3), fresh random hosts for unidentified
// X u Y vertices, and one anchored gadget path per template path with the
// internal X' and Z' vertices assigned along it. Structured Failure (phase
// "absorber") when a copy or path search exhausts its budget. Throws on
// structural violations: empty gamma, a Z-degree above 3, malformed paths.
Expected<Absorber> realize_absorber(const Graph& exposure,
                                    const BipartiteTemplate& b, const Graph& f,
                                    const VertexSubset& gamma,
                                    RandomSource& rng,
                                    CopySearchBudget budget = {});

// Auxiliary bipartite graph: left = Γ-images, right = X u Y images, edge
// exactly when the Γ-image lies inside the host neighborhood. Contains the
// template's edge set by the realization invariant.
AuxBipartite absorber_aux(const Absorber& a, const Graph& host);

}  // namespace spanembed

#endif  // SPANEMBED_ABSORBER_HPP_
