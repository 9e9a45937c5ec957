#pragma once

#include "cascata/ingest.hpp"
#include "cascata/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace cascata {

// Undirected weighted graph in CSR form (every edge stored twice). Node
// weights carry collapsed-node counts during coarsening; fine graphs use
// unit weights.
struct UGraph {
  std::int32_t n = 0;
  std::vector<std::int64_t> ptr;   // n+1
  std::vector<std::int32_t> adj;
  std::vector<std::int64_t> wgt;   // edge weights, parallel to adj
  std::vector<std::int64_t> vwgt;  // node weights
  std::int64_t total_vwgt = 0;

  std::int64_t edge_count() const { return static_cast<std::int64_t>(adj.size()) / 2; }
  std::int64_t degree(std::int32_t v) const { return ptr[v + 1] - ptr[v]; }
  std::int64_t weighted_degree(std::int32_t v) const;

  static UGraph from_edges(std::int32_t n,
                           std::span<const std::pair<std::int32_t, std::int32_t>> edges,
                           std::span<const std::int64_t> weights = {});
};

// Undirected view of the social graph: an edge exists if either direction
// does; multiplicity is discarded.
UGraph symmetrize(const SocialGraph& g);

struct Partition {
  std::vector<ClusterId> assignment;  // node index -> cluster in [0, k)
  int k = 0;
  std::int64_t edge_cut = 0;
  double imbalance = 0.0;
};

// Weighted cut of an assignment; equals the plain edge count crossing
// clusters when all edge weights are one.
std::int64_t weighted_cut(const UGraph& g, std::span<const ClusterId> assignment);
std::int64_t edge_cut(const UGraph& g, const Partition& p);

// max over clusters of (cluster_weight * k / total_weight) - 1
double compute_imbalance(const UGraph& g, std::span<const ClusterId> assignment, int k);

// Newman modularity at the given resolution, for simple graphs.
double modularity(const UGraph& g, std::span<const ClusterId> assignment,
                  double resolution = 1.0);

// Multilevel coarsening map: projecting a partition of the coarse graph onto
// the fine graph preserves node weights and (weighted) cut.
struct CoarseGraph {
  UGraph graph;
  std::vector<std::int32_t> fine_to_coarse;
};

// Evidence trail for the property tests: per-pass cuts and the cut on both
// sides of every projection.
struct MultilevelTrace {
  struct Pass {
    int level;
    std::int64_t cut_before;
    std::int64_t cut_after;
  };
  struct Projection {
    int level;
    std::int64_t coarse_cut;
    std::int64_t fine_cut;
  };
  std::vector<std::int64_t> level_sizes;  // node counts, finest first
  std::vector<Pass> passes;
  std::vector<Projection> projections;
};

// METIS-style multilevel k-way partitioning: heavy-edge-matching coarsening,
// greedy region growing on the coarsest graph, then boundary FM refinement
// while uncoarsening. Deterministic for a fixed seed.
Partition partition_multilevel(const UGraph& g, int k, double eps, std::uint64_t seed,
                               MultilevelTrace* trace = nullptr);

struct LouvainTrace {
  std::vector<double> phase_modularity;  // on the original graph, after each local-move phase
};

// Two-phase modularity optimization; k = number of communities found.
Partition partition_louvain(const UGraph& g, double resolution, std::uint64_t seed,
                            LouvainTrace* trace = nullptr);

// Exposed for tests: one heavy-edge-matching coarsening step.
CoarseGraph coarsen_once(const UGraph& g, std::uint64_t seed);

}  // namespace cascata
