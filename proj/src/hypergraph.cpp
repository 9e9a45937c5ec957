#include "cascata/hypergraph.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace cascata {

void CascadeHypergraph::recompute_degrees() {
  node_degree.assign(node_count, 0);
  incidence_count = 0;
  for (const auto& he : hyperedges) {
    for (CascadeIndex c : he) ++node_degree[c];
    incidence_count += static_cast<std::int64_t>(he.size());
  }
}

CascadeHypergraph build_hypergraph(const Partition& p, const UserCascadeMap& u2c,
                                   std::span<const Cascade> cascades, const SocialGraph& g,
                                   bool drop_singletons) {
  CascadeHypergraph h;
  h.node_count = static_cast<std::int32_t>(cascades.size());
  h.labels.reserve(cascades.size());
  for (const auto& c : cascades) h.labels.push_back(c.label);

  std::vector<std::vector<CascadeIndex>> per_cluster(p.k);
  for (const auto& [user, cs] : u2c) {
    NodeIndex node = g.node_of(user);
    if (node == kNoNode) {
      ++h.skipped_users;
      continue;
    }
    ClusterId cl = p.assignment[node];
    auto& bucket = per_cluster[cl];
    bucket.insert(bucket.end(), cs.begin(), cs.end());
  }

  for (ClusterId cl = 0; cl < p.k; ++cl) {
    auto& he = per_cluster[cl];
    std::sort(he.begin(), he.end());
    he.erase(std::unique(he.begin(), he.end()), he.end());
    if (he.empty()) continue;
    if (drop_singletons && he.size() == 1) continue;
    h.hyperedges.push_back(std::move(he));
  }
  h.hyperedge_weights.assign(h.hyperedges.size(), 1.0);
  h.recompute_degrees();
  return h;
}

HypergraphStats hypergraph_stats(const CascadeHypergraph& h) {
  HypergraphStats s;
  s.nodes = h.node_count;
  s.hyperedges = static_cast<std::int64_t>(h.hyperedges.size());
  for (CascadeLabel l : h.labels) {
    switch (l) {
      case CascadeLabel::Fake: ++s.fake; break;
      case CascadeLabel::NonFake: ++s.non_fake; break;
      case CascadeLabel::Unknown: ++s.unknown; break;
    }
  }
  if (!h.hyperedges.empty()) {
    std::int64_t total = 0;
    s.min_edge_degree = h.hyperedge_degree(0);
    for (std::size_t j = 0; j < h.hyperedges.size(); ++j) {
      std::int64_t d = h.hyperedge_degree(j);
      total += d;
      s.min_edge_degree = std::min(s.min_edge_degree, d);
      s.max_edge_degree = std::max(s.max_edge_degree, d);
    }
    s.mean_edge_degree = static_cast<double>(total) / static_cast<double>(s.hyperedges);
  }
  for (std::int32_t i = 0; i < h.node_count; ++i)
    if (h.node_degree[i] == 0) ++s.isolated_nodes;
  return s;
}

CascadeHypergraph add_hashtag_hyperedges(CascadeHypergraph h, std::span<const Cascade> cascades) {
  std::map<std::string, std::vector<CascadeIndex>> by_tag;
  for (std::size_t i = 0; i < cascades.size(); ++i)
    for (const auto& tag : cascades[i].hashtags)
      by_tag[tag].push_back(static_cast<CascadeIndex>(i));

  for (auto& [tag, members] : by_tag) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.size() < 2) continue;
    h.hyperedges.push_back(std::move(members));
    h.hyperedge_weights.push_back(1.0);
  }
  h.recompute_degrees();
  return h;
}

}  // namespace cascata
