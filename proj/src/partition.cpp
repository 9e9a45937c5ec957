#include "cascata/partition.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace cascata {

std::int64_t UGraph::weighted_degree(std::int32_t v) const {
  std::int64_t s = 0;
  for (std::int64_t e = ptr[v]; e < ptr[v + 1]; ++e) s += wgt[e];
  return s;
}

UGraph UGraph::from_edges(std::int32_t n,
                          std::span<const std::pair<std::int32_t, std::int32_t>> edges,
                          std::span<const std::int64_t> weights) {
  UGraph g;
  g.n = n;
  g.ptr.assign(static_cast<size_t>(n) + 1, 0);
  for (auto [u, v] : edges) {
    assert(u != v && u >= 0 && v >= 0 && u < n && v < n);
    ++g.ptr[static_cast<size_t>(u) + 1];
    ++g.ptr[static_cast<size_t>(v) + 1];
  }
  for (std::int32_t v = 0; v < n; ++v) g.ptr[v + 1] += g.ptr[v];
  g.adj.resize(edges.size() * 2);
  g.wgt.resize(edges.size() * 2);
  std::vector<std::int64_t> cur(g.ptr.begin(), g.ptr.end() - 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [u, v] = edges[i];
    std::int64_t w = weights.empty() ? 1 : weights[i];
    g.adj[cur[u]] = v;
    g.wgt[cur[u]++] = w;
    g.adj[cur[v]] = u;
    g.wgt[cur[v]++] = w;
  }
  g.vwgt.assign(n, 1);
  g.total_vwgt = n;
  return g;
}

UGraph symmetrize(const SocialGraph& g) {
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  pairs.reserve(g.edge_count);
  for (NodeIndex s = 0; s < g.node_count; ++s)
    for (std::int64_t e = g.out_ptr[s]; e < g.out_ptr[s + 1]; ++e) {
      NodeIndex d = g.out_dst[e];
      pairs.emplace_back(std::min(s, d), std::max(s, d));
    }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return UGraph::from_edges(g.node_count, pairs);
}

std::int64_t weighted_cut(const UGraph& g, std::span<const ClusterId> assignment) {
  std::int64_t cut2 = 0;
  for (std::int32_t v = 0; v < g.n; ++v)
    for (std::int64_t e = g.ptr[v]; e < g.ptr[v + 1]; ++e)
      if (assignment[v] != assignment[g.adj[e]]) cut2 += g.wgt[e];
  return cut2 / 2;
}

std::int64_t edge_cut(const UGraph& g, const Partition& p) {
  return weighted_cut(g, p.assignment);
}

double compute_imbalance(const UGraph& g, std::span<const ClusterId> assignment, int k) {
  if (g.n == 0 || k <= 0) return 0.0;
  std::vector<std::int64_t> cw(k, 0);
  for (std::int32_t v = 0; v < g.n; ++v) cw[assignment[v]] += g.vwgt[v];
  double worst = 0.0;
  for (int c = 0; c < k; ++c)
    worst = std::max(worst, static_cast<double>(cw[c]) * k / static_cast<double>(g.total_vwgt));
  return worst - 1.0;
}

double modularity(const UGraph& g, std::span<const ClusterId> assignment, double resolution) {
  std::vector<double> in_c, tot_c;
  ClusterId kmax = 0;
  for (std::int32_t v = 0; v < g.n; ++v) kmax = std::max(kmax, assignment[v]);
  in_c.assign(static_cast<size_t>(kmax) + 1, 0.0);
  tot_c.assign(static_cast<size_t>(kmax) + 1, 0.0);
  double m2 = 0;
  for (std::int32_t v = 0; v < g.n; ++v) {
    for (std::int64_t e = g.ptr[v]; e < g.ptr[v + 1]; ++e) {
      m2 += static_cast<double>(g.wgt[e]);
      if (assignment[v] == assignment[g.adj[e]]) in_c[assignment[v]] += static_cast<double>(g.wgt[e]);
    }
  }
  if (m2 == 0) return 0.0;
  for (std::int32_t v = 0; v < g.n; ++v)
    tot_c[assignment[v]] += static_cast<double>(g.weighted_degree(v));
  double q = 0.0;
  for (std::size_t c = 0; c < in_c.size(); ++c)
    q += in_c[c] / m2 - resolution * (tot_c[c] / m2) * (tot_c[c] / m2);
  return q;
}

// ---------------------------------------------------------------------------
// Multilevel k-way
// ---------------------------------------------------------------------------

namespace {

// FM gain buckets: ordered buckets keyed by gain, LIFO within a bucket.
class GainBuckets {
 public:
  void push(std::int64_t gain, std::int32_t node) { buckets_[gain].push_back(node); }
  bool empty() const { return buckets_.empty(); }
  std::pair<std::int64_t, std::int32_t> pop() {
    auto it = std::prev(buckets_.end());
    std::int64_t gain = it->first;
    std::int32_t node = it->second.back();
    it->second.pop_back();
    if (it->second.empty()) buckets_.erase(it);
    return {gain, node};
  }

 private:
  std::map<std::int64_t, std::vector<std::int32_t>> buckets_;
};

struct BestMove {
  ClusterId target = -1;
  std::int64_t gain = 0;
  bool valid = false;
};

// Scratch for per-node connectivity toward each cluster.
struct ConnScratch {
  std::vector<std::int64_t> conn;
  std::vector<ClusterId> touched;
  explicit ConnScratch(int k) : conn(k, 0) {}
  void clear() {
    for (ClusterId c : touched) conn[c] = 0;
    touched.clear();
  }
};

BestMove best_move(const UGraph& g, std::span<const ClusterId> a,
                   std::span<const std::int64_t> cw, std::int64_t lmax, std::int32_t v,
                   ConnScratch& s) {
  s.clear();
  const ClusterId home = a[v];
  for (std::int64_t e = g.ptr[v]; e < g.ptr[v + 1]; ++e) {
    ClusterId c = a[g.adj[e]];
    if (s.conn[c] == 0) s.touched.push_back(c);
    s.conn[c] += g.wgt[e];
  }
  BestMove best;
  if (cw[home] - g.vwgt[v] <= 0) return best;  // would empty its cluster
  for (ClusterId c : s.touched) {
    if (c == home) continue;
    if (cw[c] + g.vwgt[v] > lmax) continue;
    std::int64_t gain = s.conn[c] - s.conn[home];
    if (!best.valid || gain > best.gain || (gain == best.gain && c < best.target)) {
      best = {c, gain, true};
    }
  }
  return best;
}

// One boundary FM pass: single-node moves in descending gain order, each node
// moved at most once, cut never increases.
void fm_pass(const UGraph& g, std::vector<ClusterId>& a, int k, std::int64_t lmax,
             std::vector<std::int64_t>& cw, std::int64_t& cut) {
  GainBuckets pq;
  std::vector<char> moved(g.n, 0);
  ConnScratch scratch(k);

  auto is_boundary = [&](std::int32_t v) {
    for (std::int64_t e = g.ptr[v]; e < g.ptr[v + 1]; ++e)
      if (a[g.adj[e]] != a[v]) return true;
    return false;
  };

  for (std::int32_t v = 0; v < g.n; ++v) {
    if (!is_boundary(v)) continue;
    BestMove bm = best_move(g, a, cw, lmax, v, scratch);
    if (bm.valid) pq.push(bm.gain, v);
  }

  while (!pq.empty()) {
    auto [gain, v] = pq.pop();
    if (moved[v]) continue;
    BestMove bm = best_move(g, a, cw, lmax, v, scratch);
    if (!bm.valid) continue;
    if (bm.gain != gain) {  // stale entry, requeue at the true gain
      pq.push(bm.gain, v);
      continue;
    }
    bool accept = bm.gain > 0 ||
                  (bm.gain == 0 && cw[a[v]] > cw[bm.target] + g.vwgt[v]);
    if (!accept) continue;

    cw[a[v]] -= g.vwgt[v];
    cw[bm.target] += g.vwgt[v];
    a[v] = bm.target;
    cut -= bm.gain;
    moved[v] = 1;
    for (std::int64_t e = g.ptr[v]; e < g.ptr[v + 1]; ++e) {
      std::int32_t u = g.adj[e];
      if (moved[u]) continue;
      BestMove bu = best_move(g, a, cw, lmax, u, scratch);
      if (bu.valid) pq.push(bu.gain, u);
    }
  }
}

// Restores feasibility: every cluster non-empty, no cluster above lmax.
// May increase the cut; runs before FM passes.
void rebalance(const UGraph& g, std::vector<ClusterId>& a, int k, std::int64_t lmax,
               std::vector<std::int64_t>& cw, std::int64_t& cut) {
  ConnScratch scratch(k);
  std::vector<std::int32_t> cluster_nodes_count(k, 0);
  for (std::int32_t v = 0; v < g.n; ++v) ++cluster_nodes_count[a[v]];

  auto move_node = [&](std::int32_t v, ClusterId to) {
    scratch.clear();
    std::int64_t delta = 0;
    for (std::int64_t e = g.ptr[v]; e < g.ptr[v + 1]; ++e) {
      if (a[g.adj[e]] == a[v]) delta += g.wgt[e];
      if (a[g.adj[e]] == to) delta -= g.wgt[e];
    }
    cut += delta;
    cw[a[v]] -= g.vwgt[v];
    --cluster_nodes_count[a[v]];
    cw[to] += g.vwgt[v];
    ++cluster_nodes_count[to];
    a[v] = to;
  };

  // Damage of pulling v out of its cluster into `to`.
  auto move_cost = [&](std::int32_t v, ClusterId to) {
    std::int64_t cost = 0;
    for (std::int64_t e = g.ptr[v]; e < g.ptr[v + 1]; ++e) {
      if (a[g.adj[e]] == a[v]) cost += g.wgt[e];
      if (a[g.adj[e]] == to) cost -= g.wgt[e];
    }
    return cost;
  };

  // Empty clusters first.
  for (ClusterId c = 0; c < k; ++c) {
    while (cluster_nodes_count[c] == 0) {
      ClusterId donor = -1;
      for (ClusterId d = 0; d < k; ++d)
        if (cluster_nodes_count[d] > 1 && (donor < 0 || cw[d] > cw[donor])) donor = d;
      if (donor < 0) break;  // cannot happen when n >= k
      std::int32_t pick = -1;
      std::int64_t pick_cost = 0;
      for (std::int32_t v = 0; v < g.n; ++v) {
        if (a[v] != donor) continue;
        std::int64_t cost = move_cost(v, c);
        if (pick < 0 || cost < pick_cost ||
            (cost == pick_cost && g.vwgt[v] < g.vwgt[pick])) {
          pick = v;
          pick_cost = cost;
        }
      }
      move_node(pick, c);
    }
  }

  // Overweight clusters.
  std::int64_t guard = 4LL * g.n + 64;
  while (guard-- > 0) {
    ClusterId over = -1;
    for (ClusterId c = 0; c < k; ++c)
      if (cw[c] > lmax && (over < 0 || cw[c] > cw[over])) over = c;
    if (over < 0) break;
    ClusterId under = -1;
    for (ClusterId c = 0; c < k; ++c)
      if (c != over && (under < 0 || cw[c] < cw[under])) under = c;
    std::int32_t pick = -1;
    std::int64_t pick_cost = 0;
    for (std::int32_t v = 0; v < g.n; ++v) {
      if (a[v] != over || cluster_nodes_count[over] <= 1) continue;
      if (cw[under] + g.vwgt[v] > lmax) continue;
      std::int64_t cost = move_cost(v, under);
      if (pick < 0 || cost < pick_cost) {
        pick = v;
        pick_cost = cost;
      }
    }
    if (pick < 0) break;  // no feasible move left
    move_node(pick, under);
  }
}

std::int64_t allowed_max(std::int64_t total, int k, double eps) {
  auto target = static_cast<double>(total) / k;
  auto ceil_t = static_cast<std::int64_t>(std::ceil(target - 1e-9));
  auto slack_t = static_cast<std::int64_t>(std::floor((1.0 + eps) * target + 1e-9));
  return std::max(ceil_t, slack_t);
}

// Greedy region growing on the coarsest graph.
std::vector<ClusterId> grow_initial(const UGraph& g, int k, std::int64_t lmax,
                                    std::mt19937_64& rng) {
  std::vector<ClusterId> a(g.n, -1);
  std::vector<std::int64_t> conn(g.n, 0);  // connectivity to the growing cluster
  std::int64_t remaining_weight = g.total_vwgt;
  std::int32_t unassigned = g.n;

  for (ClusterId c = 0; c < k; ++c) {
    if (c == k - 1) {
      for (std::int32_t v = 0; v < g.n; ++v)
        if (a[v] < 0) a[v] = c;
      break;
    }
    double goal = static_cast<double>(remaining_weight) / (k - c);
    std::fill(conn.begin(), conn.end(), 0);

    // random seed node among the unassigned
    std::uniform_int_distribution<std::int32_t> pick(0, unassigned - 1);
    std::int32_t nth = pick(rng);
    std::int32_t seed = -1;
    for (std::int32_t v = 0; v < g.n; ++v)
      if (a[v] < 0 && nth-- == 0) {
        seed = v;
        break;
      }

    std::int64_t weight = 0;
    std::int32_t cur = seed;
    while (cur >= 0) {
      a[cur] = c;
      weight += g.vwgt[cur];
      remaining_weight -= g.vwgt[cur];
      --unassigned;
      for (std::int64_t e = g.ptr[cur]; e < g.ptr[cur + 1]; ++e)
        if (a[g.adj[e]] < 0) conn[g.adj[e]] += g.wgt[e];
      if (weight >= goal - 1e-9 || unassigned == 0) break;

      std::int32_t next = -1;
      for (std::int32_t v = 0; v < g.n; ++v) {
        if (a[v] >= 0 || conn[v] == 0) continue;
        if (weight + g.vwgt[v] > lmax && g.vwgt[v] <= lmax) continue;
        if (next < 0 || conn[v] > conn[next]) next = v;
      }
      if (next < 0) {  // frontier exhausted (disconnected): restart from a fresh node
        for (std::int32_t v = 0; v < g.n && next < 0; ++v)
          if (a[v] < 0 && weight + g.vwgt[v] <= lmax) next = v;
      }
      cur = next;
    }
  }
  return a;
}

}  // namespace

CoarseGraph coarsen_once(const UGraph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::int32_t> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::int32_t> match(g.n, -1);
  for (std::int32_t v : order) {
    if (match[v] >= 0) continue;
    std::int32_t best = -1;
    std::int64_t best_w = -1;
    for (std::int64_t e = g.ptr[v]; e < g.ptr[v + 1]; ++e) {
      std::int32_t u = g.adj[e];
      if (u == v || match[u] >= 0) continue;
      if (g.wgt[e] > best_w || (g.wgt[e] == best_w && u < best)) {
        best = u;
        best_w = g.wgt[e];
      }
    }
    if (best >= 0) {
      match[v] = best;
      match[best] = v;
    } else {
      match[v] = v;
    }
  }

  CoarseGraph cg;
  cg.fine_to_coarse.assign(g.n, -1);
  std::int32_t next = 0;
  for (std::int32_t v = 0; v < g.n; ++v) {
    if (cg.fine_to_coarse[v] >= 0) continue;
    cg.fine_to_coarse[v] = next;
    cg.fine_to_coarse[match[v]] = next;
    ++next;
  }

  cg.graph.n = next;
  cg.graph.vwgt.assign(next, 0);
  for (std::int32_t v = 0; v < g.n; ++v) cg.graph.vwgt[cg.fine_to_coarse[v]] += g.vwgt[v];
  cg.graph.total_vwgt = g.total_vwgt;

  struct Triple {
    std::int32_t u, v;
    std::int64_t w;
  };
  std::vector<Triple> triples;
  for (std::int32_t v = 0; v < g.n; ++v)
    for (std::int64_t e = g.ptr[v]; e < g.ptr[v + 1]; ++e) {
      std::int32_t u = g.adj[e];
      if (u <= v) continue;  // each fine edge once
      std::int32_t cu = cg.fine_to_coarse[v], cv = cg.fine_to_coarse[u];
      if (cu == cv) continue;
      triples.push_back({std::min(cu, cv), std::max(cu, cv), g.wgt[e]});
    }
  std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  std::vector<std::pair<std::int32_t, std::int32_t>> pairs;
  std::vector<std::int64_t> weights;
  for (std::size_t i = 0; i < triples.size();) {
    std::size_t j = i;
    std::int64_t w = 0;
    while (j < triples.size() && triples[j].u == triples[i].u && triples[j].v == triples[i].v)
      w += triples[j++].w;
    pairs.emplace_back(triples[i].u, triples[i].v);
    weights.push_back(w);
    i = j;
  }
  auto vwgt = std::move(cg.graph.vwgt);
  auto total = cg.graph.total_vwgt;
  cg.graph = UGraph::from_edges(next, pairs, weights);
  cg.graph.vwgt = std::move(vwgt);
  cg.graph.total_vwgt = total;
  return cg;
}

Partition partition_multilevel(const UGraph& g, int k, double eps, std::uint64_t seed,
                               MultilevelTrace* trace) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > g.n) throw std::invalid_argument("more clusters than nodes");
  Partition p;
  p.k = k;
  if (g.n == 0) return p;
  if (k == 1) {
    p.assignment.assign(g.n, 0);
    p.edge_cut = 0;
    p.imbalance = 0.0;
    return p;
  }

  std::mt19937_64 rng(mix_seed(seed, fnv1a64("multilevel")));
  const std::int64_t coarsen_stop = std::max<std::int64_t>(20LL * k, 200);

  std::vector<UGraph> levels;
  std::vector<std::vector<std::int32_t>> maps;  // maps[i]: levels[i] -> levels[i+1]
  levels.push_back(g);
  if (trace) trace->level_sizes.push_back(g.n);
  while (levels.back().n > coarsen_stop) {
    CoarseGraph cg = coarsen_once(levels.back(), rng());
    if (cg.graph.n > static_cast<std::int64_t>(0.9 * levels.back().n)) break;  // stalled
    maps.push_back(std::move(cg.fine_to_coarse));
    levels.push_back(std::move(cg.graph));
    if (trace) trace->level_sizes.push_back(levels.back().n);
  }

  const std::int64_t lmax = allowed_max(g.total_vwgt, k, eps);
  const int top = static_cast<int>(levels.size()) - 1;

  std::vector<ClusterId> a = grow_initial(levels[top], k, lmax, rng);
  std::vector<std::int64_t> cw(k, 0);
  for (std::int32_t v = 0; v < levels[top].n; ++v) cw[a[v]] += levels[top].vwgt[v];
  std::int64_t cut = weighted_cut(levels[top], a);

  auto refine_level = [&](int level) {
    rebalance(levels[level], a, k, lmax, cw, cut);
    std::int64_t before = cut;
    fm_pass(levels[level], a, k, lmax, cw, cut);
    assert(cut <= before);
    assert(cut == weighted_cut(levels[level], a));
    if (trace) trace->passes.push_back({level, before, cut});
  };

  refine_level(top);
  for (int level = top - 1; level >= 0; --level) {
    std::vector<ClusterId> fine(levels[level].n);
    for (std::int32_t v = 0; v < levels[level].n; ++v) fine[v] = a[maps[level][v]];
    if (trace) {
      trace->projections.push_back({level, cut, weighted_cut(levels[level], fine)});
    }
    a = std::move(fine);
    refine_level(level);
  }
  refine_level(0);  // final extra pass on the finest graph

  p.assignment = std::move(a);
  p.edge_cut = cut;
  p.imbalance = compute_imbalance(g, p.assignment, k);
  return p;
}

// ---------------------------------------------------------------------------
// Louvain
// ---------------------------------------------------------------------------

namespace {

// Working graph for Louvain aggregation. loopw[v] holds A_vv, i.e. twice the
// internal weight of the collapsed community.
struct LouvainGraph {
  std::int32_t n = 0;
  std::vector<std::int64_t> ptr;
  std::vector<std::int32_t> adj;
  std::vector<double> wgt;
  std::vector<double> loopw;
  std::vector<double> wdeg;  // sum of incident weights + loopw

  static LouvainGraph from(const UGraph& g) {
    LouvainGraph lg;
    lg.n = g.n;
    lg.ptr = g.ptr;
    lg.adj = g.adj;
    lg.wgt.assign(g.wgt.begin(), g.wgt.end());
    lg.loopw.assign(g.n, 0.0);
    lg.wdeg.assign(g.n, 0.0);
    for (std::int32_t v = 0; v < g.n; ++v)
      lg.wdeg[v] = static_cast<double>(g.weighted_degree(v));
    return lg;
  }
};

bool louvain_local_phase(const LouvainGraph& lg, std::vector<std::int32_t>& comm,
                         double resolution, double m2, std::mt19937_64& rng) {
  std::vector<double> tot(lg.n, 0.0);
  for (std::int32_t v = 0; v < lg.n; ++v) tot[comm[v]] += lg.wdeg[v];

  std::vector<std::int32_t> order(lg.n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> conn(lg.n, 0.0);
  std::vector<std::int32_t> touched;

  bool any_move = false;
  bool sweep_moved = true;
  while (sweep_moved) {
    sweep_moved = false;
    for (std::int32_t v : order) {
      const std::int32_t home = comm[v];
      touched.clear();
      for (std::int64_t e = lg.ptr[v]; e < lg.ptr[v + 1]; ++e) {
        std::int32_t c = comm[lg.adj[e]];
        if (conn[c] == 0.0) touched.push_back(c);
        conn[c] += lg.wgt[e];
      }
      const double kv = lg.wdeg[v];
      const double tot_home = tot[home] - kv;
      const double conn_home = conn[home];  // v's loop weight is not in conn

      std::int32_t best = home;
      double best_gain = 0.0;
      for (std::int32_t c : touched) {
        if (c == home) continue;
        double gain = 2.0 * (conn[c] - conn_home) / m2 -
                      2.0 * resolution * kv * (tot[c] - tot_home) / (m2 * m2);
        if (gain < 1e-12) continue;
        if (best == home || gain > best_gain + 1e-12) {
          best = c;
          best_gain = gain;
        } else if (gain >= best_gain - 1e-12 && c < best) {
          best = c;  // tie: lowest community id
        }
      }
      for (std::int32_t c : touched) conn[c] = 0.0;
      if (best != home) {
        tot[home] -= kv;
        tot[best] += kv;
        comm[v] = best;
        sweep_moved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

LouvainGraph aggregate(const LouvainGraph& lg, const std::vector<std::int32_t>& comm,
                       std::vector<std::int32_t>& dense_of_comm, std::int32_t& n_comm) {
  dense_of_comm.assign(lg.n, -1);
  n_comm = 0;
  for (std::int32_t v = 0; v < lg.n; ++v)
    if (dense_of_comm[comm[v]] < 0) dense_of_comm[comm[v]] = n_comm++;

  std::vector<double> loopw(n_comm, 0.0);
  std::map<std::pair<std::int32_t, std::int32_t>, double> agg;
  for (std::int32_t v = 0; v < lg.n; ++v) {
    std::int32_t cv = dense_of_comm[comm[v]];
    loopw[cv] += lg.loopw[v];
    for (std::int64_t e = lg.ptr[v]; e < lg.ptr[v + 1]; ++e) {
      std::int32_t cu = dense_of_comm[comm[lg.adj[e]]];
      if (cu == cv) {
        loopw[cv] += lg.wgt[e];  // both directions visited: sums to 2x internal
      } else if (cv < cu) {
        agg[{cv, cu}] += lg.wgt[e];
      }
    }
  }

  LouvainGraph out;
  out.n = n_comm;
  out.ptr.assign(static_cast<size_t>(n_comm) + 1, 0);
  for (const auto& [key, w] : agg) {
    ++out.ptr[key.first + 1];
    ++out.ptr[key.second + 1];
  }
  for (std::int32_t v = 0; v < n_comm; ++v) out.ptr[v + 1] += out.ptr[v];
  out.adj.resize(agg.size() * 2);
  out.wgt.resize(agg.size() * 2);
  std::vector<std::int64_t> cur(out.ptr.begin(), out.ptr.end() - 1);
  for (const auto& [key, w] : agg) {
    auto [u, v] = key;
    out.adj[cur[u]] = v;
    out.wgt[cur[u]++] = w;
    out.adj[cur[v]] = u;
    out.wgt[cur[v]++] = w;
  }
  out.loopw = std::move(loopw);
  out.wdeg.assign(n_comm, 0.0);
  for (std::int32_t v = 0; v < n_comm; ++v) {
    double s = out.loopw[v];
    for (std::int64_t e = out.ptr[v]; e < out.ptr[v + 1]; ++e) s += out.wgt[e];
    out.wdeg[v] = s;
  }
  return out;
}

}  // namespace

Partition partition_louvain(const UGraph& g, double resolution, std::uint64_t seed,
                            LouvainTrace* trace) {
  Partition p;
  if (g.n == 0) return p;
  if (g.edge_count() == 0) {
    p.assignment.resize(g.n);
    std::iota(p.assignment.begin(), p.assignment.end(), 0);
    p.k = g.n;
    p.edge_cut = 0;
    p.imbalance = compute_imbalance(g, p.assignment, p.k);
    return p;
  }

  std::mt19937_64 rng(mix_seed(seed, fnv1a64("louvain")));
  LouvainGraph lg = LouvainGraph::from(g);
  double m2 = 0.0;
  for (std::int32_t v = 0; v < lg.n; ++v) m2 += lg.wdeg[v];

  std::vector<std::int32_t> node_to_comm(g.n);  // original node -> current community
  std::iota(node_to_comm.begin(), node_to_comm.end(), 0);

  double prev_q = modularity(g, node_to_comm, resolution);
  while (true) {
    std::vector<std::int32_t> comm(lg.n);
    std::iota(comm.begin(), comm.end(), 0);
    bool moved = louvain_local_phase(lg, comm, resolution, m2, rng);
    if (!moved) break;

    std::vector<std::int32_t> dense;
    std::int32_t n_comm = 0;
    LouvainGraph next = aggregate(lg, comm, dense, n_comm);
    for (auto& c : node_to_comm) c = dense[comm[c]];

    double q = modularity(g, node_to_comm, resolution);
    if (trace) trace->phase_modularity.push_back(q);
    lg = std::move(next);
    if (q - prev_q <= 1e-7) break;
    prev_q = q;
  }

  // contiguous community ids in order of first appearance
  std::vector<std::int32_t> remap(lg.n, -1);
  std::int32_t k = 0;
  p.assignment.resize(g.n);
  for (std::int32_t v = 0; v < g.n; ++v) {
    if (remap[node_to_comm[v]] < 0) remap[node_to_comm[v]] = k++;
    p.assignment[v] = remap[node_to_comm[v]];
  }
  p.k = k;
  p.edge_cut = weighted_cut(g, p.assignment);
  p.imbalance = compute_imbalance(g, p.assignment, k);
  return p;
}

}  // namespace cascata
