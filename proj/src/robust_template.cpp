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

#include "spanembed/robust_template.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "spanembed/errors.hpp"

namespace spanembed {
namespace {

constexpr std::size_t kRightDegreeCap = 40;
constexpr std::size_t kDrawAttempts = 500;

// Kuhn augmenting-path matching, left side saturation test. `allowed[r]`
// gates the right vertices (Y' selection); match_* are scratch reused
// across Y' subsets by the caller.
bool saturates_left(const BipartiteTemplate& b, const std::vector<char>& allowed) {
  const std::size_t left = b.left_size();
  const std::size_t right = b.right_size();
  std::vector<std::int64_t> match_of_right(right, -1);
  std::vector<std::int64_t> match_of_left(left, -1);

  // Greedy seed: cheap and removes most augmentation work.
  for (std::size_t l = 0; l < left; ++l) {
    for (std::uint32_t r : b.left_adj[l]) {
      if (allowed[r] && match_of_right[r] < 0) {
        match_of_right[r] = static_cast<std::int64_t>(l);
        match_of_left[l] = static_cast<std::int64_t>(r);
        break;
      }
    }
  }

  std::vector<char> visited(right, 0);
  std::vector<std::uint32_t> touched;
  // Iterative DFS over alternating paths.
  struct Frame {
    std::uint32_t l;
    std::size_t next;
  };
  std::vector<Frame> stack;
  std::vector<std::int64_t> parent_right(right, -1);

  for (std::size_t l0 = 0; l0 < left; ++l0) {
    if (match_of_left[l0] >= 0) continue;
    for (std::uint32_t r : touched) visited[r] = 0;
    touched.clear();
    stack.clear();
    stack.push_back({static_cast<std::uint32_t>(l0), 0});
    std::int64_t found = -1;
    while (!stack.empty() && found < 0) {
      Frame& f = stack.back();
      const auto& adj = b.left_adj[f.l];
      if (f.next >= adj.size()) {
        stack.pop_back();
        continue;
      }
      std::uint32_t r = adj[f.next++];
      if (!allowed[r] || visited[r]) continue;
      visited[r] = 1;
      touched.push_back(r);
      parent_right[r] = static_cast<std::int64_t>(f.l);
      if (match_of_right[r] < 0) {
        found = static_cast<std::int64_t>(r);
      } else {
        stack.push_back({static_cast<std::uint32_t>(match_of_right[r]), 0});
      }
    }
    if (found < 0) return false;
    // Walk the alternating path back, flipping matched edges.
    std::int64_t r = found;
    while (r >= 0) {
      std::int64_t l = parent_right[r];
      std::int64_t prev_r = match_of_left[l];
      match_of_right[r] = l;
      match_of_left[l] = r;
      r = prev_r;
    }
  }
  return true;
}

std::vector<char> base_allowed(const BipartiteTemplate& b) {
  std::vector<char> allowed(b.right_size(), 0);
  for (std::size_t r = 0; r < b.right_size(); ++r) {
    if (!b.right_is_y(static_cast<std::uint32_t>(r))) allowed[r] = 1;
  }
  return allowed;
}

}  // namespace

std::size_t BipartiteTemplate::edge_count() const {
  std::size_t total = 0;
  for (const auto& adj : left_adj) total += adj.size();
  return total;
}

BipartiteTemplate make_base_template(std::size_t m, std::size_t z_degree,
                                     RandomSource& rng) {
  if (m == 0) throw SpanError("make_base_template: m must be >= 1");
  const std::size_t z_total = 3 * m;
  const std::size_t right_total = 4 * m;
  if (z_degree > right_total) {
    throw SpanError("make_base_template: z_degree " + std::to_string(z_degree) +
                    " exceeds right side size " + std::to_string(right_total));
  }
  if (z_total * z_degree > kRightDegreeCap * right_total) {
    throw SpanError(
        "make_base_template: demanded edges exceed the right degree cap");
  }

  BipartiteTemplate b;
  b.z_count = z_total;
  b.x_count = 2 * m;
  b.y_count = 2 * m;
  b.left_adj.assign(z_total, {});

  std::vector<std::size_t> right_deg(right_total, 0);
  std::vector<std::uint32_t> pool(right_total);
  for (std::size_t r = 0; r < right_total; ++r) pool[r] = static_cast<std::uint32_t>(r);

  for (std::size_t z = 0; z < z_total; ++z) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kDrawAttempts && !placed; ++attempt) {
      // Partial Fisher-Yates: uniform z_degree-subset in the pool prefix.
      for (std::size_t i = 0; i < z_degree; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
      }
      bool ok = true;
      for (std::size_t i = 0; i < z_degree; ++i) {
        if (right_deg[pool[i]] >= kRightDegreeCap) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      auto& adj = b.left_adj[z];
      adj.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(z_degree));
      std::sort(adj.begin(), adj.end());
      for (std::uint32_t r : adj) ++right_deg[r];
      placed = true;
    }
    if (!placed) {
      throw SpanError(
          "make_base_template: right-degree cap rejection exhausted at Z-vertex " +
          std::to_string(z));
    }
  }
  return b;
}

RobustVerdict verify_Y_robust(const BipartiteTemplate& b,
                              std::size_t sample_trials, RandomSource* rng) {
  const std::size_t left = b.left_size();
  const std::size_t non_y = b.non_y_right_size();
  if (!(non_y < left && left < non_y + b.y_count)) {
    throw SpanError("verify_Y_robust: sizes must satisfy |X| < |Z| < |X| + |Y|");
  }
  const std::size_t needed = left - non_y;
  const std::uint32_t y_base = static_cast<std::uint32_t>(b.x_count);

  RobustVerdict verdict;
  std::vector<char> allowed = base_allowed(b);

  auto run_subset = [&](const std::vector<std::uint32_t>& y_prime) -> bool {
    for (std::uint32_t r : y_prime) allowed[r] = 1;
    bool ok = saturates_left(b, allowed);
    for (std::uint32_t r : y_prime) allowed[r] = 0;
    ++verdict.subsets_checked;
    if (!ok) verdict.counterexample = y_prime;
    return ok;
  };

  if (sample_trials == 0) {
    // Lexicographic combination walk over Y indices; the first failing Y'
    // is therefore deterministic.
    std::vector<std::size_t> idx(needed);
    for (std::size_t i = 0; i < needed; ++i) idx[i] = i;
    std::vector<std::uint32_t> y_prime(needed);
    while (true) {
      for (std::size_t i = 0; i < needed; ++i) {
        y_prime[i] = y_base + static_cast<std::uint32_t>(idx[i]);
      }
      if (!run_subset(y_prime)) return verdict;
      // Advance the combination.
      std::size_t i = needed;
      while (i > 0) {
        --i;
        if (idx[i] != i + b.y_count - needed) break;
        if (i == 0) {
          verdict.robust = true;
          return verdict;
        }
      }
      if (idx[i] == i + b.y_count - needed) {
        verdict.robust = true;
        return verdict;
      }
      ++idx[i];
      for (std::size_t j = i + 1; j < needed; ++j) idx[j] = idx[j - 1] + 1;
    }
  }

  if (rng == nullptr) {
    throw SpanError("verify_Y_robust: sampled mode requires an rng");
  }
  std::vector<std::uint32_t> y_pool(b.y_count);
  for (std::size_t i = 0; i < b.y_count; ++i) {
    y_pool[i] = y_base + static_cast<std::uint32_t>(i);
  }
  std::vector<std::uint32_t> y_prime(needed);
  for (std::size_t trial = 0; trial < sample_trials; ++trial) {
    for (std::size_t i = 0; i < needed; ++i) {
      std::size_t j = i + static_cast<std::size_t>(rng->below(y_pool.size() - i));
      std::swap(y_pool[i], y_pool[j]);
      y_prime[i] = y_pool[i];
    }
    std::sort(y_prime.begin(), y_prime.end());
    if (!run_subset(y_prime)) return verdict;
  }
  verdict.robust = true;
  return verdict;
}

BipartiteTemplate split_high_degree(const BipartiteTemplate& b) {
  BipartiteTemplate out = b;

  auto shift_right_ids_from = [&out](std::uint32_t from) {
    for (auto& adj : out.left_adj) {
      for (auto& r : adj) {
        if (r >= from) ++r;
      }
    }
    for (auto& path : out.paths) {
      if (path.v >= from) ++path.v;
      for (std::size_t i = 1; i < path.seq.size(); i += 2) {
        if (path.seq[i] >= from) ++path.seq[i];
      }
    }
  };

  while (true) {
    std::size_t v = out.left_size();
    for (std::size_t l = 0; l < out.left_size(); ++l) {
      if (out.left_adj[l].size() >= 4) {
        v = l;
        break;
      }
    }
    if (v == out.left_size()) break;

    std::vector<std::uint32_t> nbrs = out.left_adj[v];  // sorted
    const std::size_t k = nbrs.size();
    // N2 = two largest neighbors, N1 = the rest; deterministic.
    std::uint32_t n2a = nbrs[k - 2];
    std::uint32_t n2b = nbrs[k - 1];
    nbrs.resize(k - 2);

    // Fresh X-vertex u at the end of the X block; Y and X' ids shift up.
    const std::uint32_t u = static_cast<std::uint32_t>(out.x_count);
    shift_right_ids_from(u);
    if (n2a >= u) ++n2a;
    if (n2b >= u) ++n2b;
    for (auto& r : nbrs) {
      if (r >= u) ++r;
    }
    out.x_count += 1;

    // v becomes v1 = {u} u N1; v2 = {u, N2} joins the end of the Z block.
    auto& v1_adj = out.left_adj[v];
    v1_adj = nbrs;
    v1_adj.push_back(u);
    std::sort(v1_adj.begin(), v1_adj.end());

    std::vector<std::uint32_t> v2_adj = {u, n2a, n2b};
    std::sort(v2_adj.begin(), v2_adj.end());
    const std::size_t v2_pos = out.z_count;
    out.left_adj.insert(out.left_adj.begin() + static_cast<std::ptrdiff_t>(v2_pos),
                        std::move(v2_adj));
    for (auto& path : out.paths) {
      if (path.z >= v2_pos) ++path.z;
      for (std::size_t i = 0; i < path.seq.size(); i += 2) {
        if (path.seq[i] >= v2_pos) ++path.seq[i];
      }
    }
    out.z_count += 1;
  }

  if (out.provenance == BipartiteTemplate::Provenance::kBase) {
    out.provenance = BipartiteTemplate::Provenance::kSplit;
  }
  return out;
}

BipartiteTemplate subdivide(const BipartiteTemplate& b, std::size_t length) {
  if (length < 3 || length % 2 == 0) {
    throw SpanError("subdivide: path length must be odd and >= 3");
  }
  if (b.provenance == BipartiteTemplate::Provenance::kSubdivided) {
    throw SpanError("subdivide: template is already subdivided");
  }
  const std::size_t per_side = (length - 1) / 2;

  BipartiteTemplate out;
  out.z_count = b.z_count;
  out.x_count = b.x_count;
  out.y_count = b.y_count;
  out.provenance = BipartiteTemplate::Provenance::kSubdivided;
  out.left_adj.assign(b.z_count, {});

  std::uint32_t next_left = static_cast<std::uint32_t>(b.z_count);
  std::uint32_t next_right = static_cast<std::uint32_t>(b.x_count + b.y_count);

  for (std::size_t z = 0; z < b.z_count; ++z) {
    for (std::uint32_t v : b.left_adj[z]) {
      BipartiteTemplate::Path path;
      path.z = static_cast<std::uint32_t>(z);
      path.v = v;
      path.seq.reserve(length + 1);
      path.seq.push_back(static_cast<std::uint32_t>(z));
      for (std::size_t j = 0; j < per_side; ++j) {
        const std::uint32_t xp = next_right++;
        const std::uint32_t zp = next_left++;
        out.x_prime_count += 1;
        out.z_prime_count += 1;
        path.seq.push_back(xp);
        path.seq.push_back(zp);
        // x' joins the previous left vertex on the path (z for j = 0);
        // the new z' starts with x' and picks up its successor next round.
        if (j == 0) {
          out.left_adj[z].push_back(xp);
        } else {
          out.left_adj.back().push_back(xp);
        }
        out.left_adj.push_back({xp});
      }
      out.left_adj.back().push_back(v);
      std::sort(out.left_adj.back().begin(), out.left_adj.back().end());
      path.seq.push_back(v);
      out.paths.push_back(std::move(path));
    }
    std::sort(out.left_adj[z].begin(), out.left_adj[z].end());
  }
  return out;
}

void write_template(std::ostream& out, const BipartiteTemplate& b) {
  // Remap right ids so the non-Y block is contiguous: X keeps its ids,
  // X' follows X, Y goes last.
  auto remap = [&b](std::uint32_t r) -> std::uint32_t {
    if (r < b.x_count) return r;
    if (b.right_is_y(r)) {
      return static_cast<std::uint32_t>(r - b.x_count + b.x_count + b.x_prime_count);
    }
    return static_cast<std::uint32_t>(r - b.y_count);
  };
  out << b.left_size() << ' ' << b.non_y_right_size() << ' ' << b.y_count << '\n';
  for (std::size_t l = 0; l < b.left_size(); ++l) {
    std::vector<std::uint32_t> adj;
    adj.reserve(b.left_adj[l].size());
    for (std::uint32_t r : b.left_adj[l]) adj.push_back(remap(r));
    std::sort(adj.begin(), adj.end());
    for (std::uint32_t r : adj) out << l << ' ' << r << '\n';
  }
}

BipartiteTemplate read_template(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw SpanError("read_template: missing header");
  std::istringstream header(line);
  std::size_t left = 0, non_y = 0, y = 0;
  if (!(header >> left >> non_y >> y)) {
    throw SpanError("read_template: header must be `left non_y y` (line " +
                    std::to_string(line_no) + ")");
  }

  BipartiteTemplate b;
  b.z_count = left;
  b.x_count = non_y;
  b.y_count = y;
  b.left_adj.assign(left, {});
  while (next_line()) {
    std::istringstream row(line);
    std::size_t l = 0, r = 0;
    if (!(row >> l >> r)) {
      throw SpanError("read_template: bad edge line " + std::to_string(line_no));
    }
    if (l >= left || r >= non_y + y) {
      throw SpanError("read_template: endpoint out of range at line " +
                      std::to_string(line_no));
    }
    b.left_adj[l].push_back(static_cast<std::uint32_t>(r));
  }
  for (auto& adj : b.left_adj) {
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) {
      throw SpanError("read_template: duplicate edge");
    }
  }
  return b;
}

}  // namespace spanembed
