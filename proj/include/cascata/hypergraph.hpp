#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cascata/ingest.hpp"
#include "cascata/partition.hpp"

namespace cascata {

// Nodes are cascades; each hyperedge is the set of cascades whose
// participants touch one user cluster (plus optional hashtag groups).
struct CascadeHypergraph {
  std::int32_t node_count = 0;
  std::vector<CascadeLabel> labels;                   // one per node
  std::vector<std::vector<CascadeIndex>> hyperedges;  // sorted, deduplicated
  std::vector<double> hyperedge_weights;              // positive, default 1.0
  std::vector<std::int32_t> node_degree;              // d_v
  std::int64_t incidence_count = 0;
  std::int64_t skipped_users = 0;  // u2c users without a social-graph node

  std::int64_t hyperedge_degree(std::size_t j) const {
    return static_cast<std::int64_t>(hyperedges[j].size());
  }
  void recompute_degrees();
};

CascadeHypergraph build_hypergraph(const Partition& p, const UserCascadeMap& u2c,
                                   std::span<const Cascade> cascades, const SocialGraph& g,
                                   bool drop_singletons = false);

struct HypergraphStats {
  std::int64_t nodes = 0;
  std::int64_t hyperedges = 0;
  std::int64_t fake = 0;
  std::int64_t non_fake = 0;
  std::int64_t unknown = 0;
  std::int64_t min_edge_degree = 0;
  std::int64_t max_edge_degree = 0;
  double mean_edge_degree = 0.0;
  std::int64_t isolated_nodes = 0;
};

HypergraphStats hypergraph_stats(const CascadeHypergraph& h);

// One extra hyperedge per hashtag shared by two or more cascade roots,
// appended after the cluster hyperedges in lexicographic hashtag order.
CascadeHypergraph add_hashtag_hyperedges(CascadeHypergraph h, std::span<const Cascade> cascades);

}  // namespace cascata
