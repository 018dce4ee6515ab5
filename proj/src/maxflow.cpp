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

#include "spanembed/maxflow.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

namespace spanembed {

void Dinic::add_edge(int from, int to, long long cap) {
  assert(cap >= 0);
  head_[from].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({to, cap});
  head_[to].push_back(static_cast<int>(arcs_.size()));
  arcs_.push_back({from, 0});
}

bool Dinic::levels(int source, int sink) {
  level_.assign(head_.size(), -1);
  std::deque<int> queue{source};
  level_[source] = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int idx : head_[v]) {
      const Arc& a = arcs_[idx];
      if (a.cap > 0 && level_[a.to] == -1) {
        level_[a.to] = level_[v] + 1;
        queue.push_back(a.to);
      }
    }
  }
  return level_[sink] != -1;
}

long long Dinic::augment(int v, int sink, long long limit) {
  if (v == sink) return limit;
  long long sent = 0;
  for (std::size_t& i = iter_[v]; i < head_[v].size(); ++i) {
    int idx = head_[v][i];
    Arc& a = arcs_[idx];
    if (a.cap <= 0 || level_[a.to] != level_[v] + 1) continue;
    long long got = augment(a.to, sink, std::min(limit - sent, a.cap));
    if (got == 0) continue;
    a.cap -= got;
    arcs_[idx ^ 1].cap += got;
    sent += got;
    if (sent == limit) return sent;
  }
  level_[v] = -1;
  return sent;
}

long long Dinic::max_flow(int source, int sink) {
  long long total = 0;
  while (levels(source, sink)) {
    iter_.assign(head_.size(), 0);
    total += augment(source, sink, kInf);
  }
  return total;
}

std::vector<char> Dinic::min_cut_source_side(int source) const {
  std::vector<char> side(head_.size(), 0);
  std::deque<int> queue{source};
  side[source] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int idx : head_[v]) {
      const Arc& a = arcs_[idx];
      if (a.cap > 0 && !side[a.to]) {
        side[a.to] = 1;
        queue.push_back(a.to);
      }
    }
  }
  return side;
}

}  // namespace spanembed
