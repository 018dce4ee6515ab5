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

#ifndef SPANEMBED_MAXFLOW_HPP_
#define SPANEMBED_MAXFLOW_HPP_

#include <cstddef>
#include <vector>

namespace spanembed {

// Dinic max-flow over int64 capacities. Deterministic: arcs are explored in
// insertion order, so the minimal source-side cut is reproducible.
class Dinic {
 public:
  static constexpr long long kInf = (1LL << 61);

  explicit Dinic(std::size_t node_count) : head_(node_count) {}

  void add_edge(int from, int to, long long cap);
  long long max_flow(int source, int sink);

  // After max_flow: nodes reachable from the source in the residual graph
  // (the unique minimal min-cut source side).
  std::vector<char> min_cut_source_side(int source) const;

 private:
  struct Arc {
    int to;
    long long cap;  // remaining capacity
  };

  bool levels(int source, int sink);
  long long augment(int v, int sink, long long limit);

  std::vector<std::vector<int>> head_;  // per node: indices into arcs_
  std::vector<Arc> arcs_;               // arc 2i and 2i+1 are reverses
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

}  // namespace spanembed

#endif  // SPANEMBED_MAXFLOW_HPP_
