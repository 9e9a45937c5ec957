#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cascata/features.hpp"
#include "cascata/hypergraph.hpp"
#include "cascata/ingest.hpp"
#include "cascata/model.hpp"
#include "cascata/partition.hpp"

namespace cascata {

struct RunConfig {
  std::string interactions_path;
  std::string cascades_path;
  std::string users_path;  // optional user metadata, empty = none
  std::string workdir = "run";

  std::string partitioner = "multilevel";  // or "louvain"
  int k_clusters = 4;
  double eps = 0.03;
  double resolution = 1.0;

  int min_participants = 1;
  bool hashtag_hyperedges = false;
  bool drop_singleton_hyperedges = false;

  FeatureConfig features;
  TrainConfig train;

  int trials = 5;
  double split_fraction = 0.8;
  bool stratified = true;

  std::vector<int> sweep_k;
  std::vector<int> sweep_layers;
  std::vector<double> sweep_train_fractions;

  std::uint64_t seed = 0;
};

// Flat key=value config lines; '#' starts a comment. Unknown keys error.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);
RunConfig load_config_file(const std::string& path, RunConfig base = {});
nlohmann::json config_to_json(const RunConfig& cfg);

// Failures carry the pipeline stage that raised them.
struct StageError : std::runtime_error {
  std::string stage;
  StageError(std::string st, const std::string& msg)
      : std::runtime_error("[" + st + "] " + msg), stage(std::move(st)) {}
};

struct Dataset {
  UserInterner interner;
  SocialGraph graph;
  std::vector<Cascade> cascades;  // after the min-participants filter
  UserCascadeMap u2c;
  UserMetaStore meta;
  ParseStats parse_stats;
  ExtractStats extract_stats;
  std::vector<std::int32_t> labels;  // 1 fake, 0 nonfake, -1 unknown
};

Dataset load_dataset(const RunConfig& cfg);

struct Structure {
  Partition partition;
  CascadeHypergraph hypergraph;
  HyperIncidence incidence;
};

Structure build_structure(const Dataset& ds, const RunConfig& cfg, int k, std::uint64_t seed);

// featurize + z-normalize + PCA; the target dimension is clamped to what the
// matrix supports and the effective value is reported.
FeatureMatrix build_features(const Dataset& ds, const RunConfig& cfg, std::uint64_t seed,
                             int* effective_pca_dim = nullptr);

struct Split {
  std::vector<std::int32_t> train;
  std::vector<std::int32_t> test;
};

Split make_split(std::span<const std::int32_t> labels, double train_fraction, bool stratified,
                 std::uint64_t seed);

// One full experiment: ingest, partition, hypergraph, features, then
// `trials` train/evaluate rounds on fresh splits. Persists artifacts under
// workdir and returns the report. Sweep lists expand into one row per value.
nlohmann::json run_pipeline(const RunConfig& cfg);

// axis is "layers", "train_fraction" or "k"; values come from the sweep lists.
nlohmann::json ablation(const RunConfig& cfg, const std::string& axis);

// Aligned plain-text rendering of a report (single or multi-row).
std::string report_table(const nlohmann::json& report);

}  // namespace cascata
