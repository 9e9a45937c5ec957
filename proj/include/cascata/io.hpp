#pragma once

#include <string>
#include <utility>

#include "cascata/features.hpp"
#include "cascata/hypergraph.hpp"
#include "cascata/ingest.hpp"
#include "cascata/model.hpp"
#include "cascata/partition.hpp"

namespace cascata {

// "nodes <n> edges <m>" header, then one "src dst ts" triple per line.
void dump_graph(const SocialGraph& g, const std::string& path);

// "<node_index> <user name>" per line, the interning record.
void dump_user_map(const UserInterner& interner, const std::string& path);

// "<node_index> <cluster_id>" per line.
void dump_partition(const Partition& p, const std::string& path);
void dump_partition_summary(const Partition& p, std::uint64_t seed, const std::string& path);

// "h <hyperedge_index> <cascade_index>..." per line.
void dump_hypergraph(const CascadeHypergraph& h, const std::string& path);
// "<cascade_index> <label>" per line.
void dump_hypergraph_labels(const CascadeHypergraph& h, const std::string& path);

// Header line {"rows":M,"cols":D,"layout":1}, then rows of doubles.
void dump_feature_rows(const RowMatrix& rows, const std::string& path);
RowMatrix load_feature_rows(const std::string& path);

void save_checkpoint(const ModelParams& params, const TrainConfig& cfg, const std::string& path);
std::pair<ModelParams, TrainConfig> load_checkpoint(const std::string& path);

}  // namespace cascata
