#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cascata/ingest.hpp"
#include "cascata/types.hpp"

namespace cascata {

// Undirected simple graph over a cascade's participants. Node 0 is the root;
// retweeters follow in timestamp order. Star edges keep it connected.
struct AugmentedCascadeGraph {
  std::vector<UserId> users;
  std::vector<std::int64_t> timestamps;  // root ts, then each retweet ts
  std::vector<std::vector<std::int32_t>> adj;
  std::int64_t edge_count = 0;

  std::int32_t node_count() const { return static_cast<std::int32_t>(users.size()); }
};

AugmentedCascadeGraph augment_cascade(const Cascade& c, const SocialGraph& g);

struct DeepWalkParams {
  int walks_per_node = 10;
  int walk_length = 80;
  int dim = 128;
  int window = 5;
  int neg_samples = 5;
  int epochs = 1;
  double lr = 0.025;
};

// walks_per_node walks from every node, each walk_length nodes long. A node
// with no neighbours repeats in place.
std::vector<std::vector<std::int32_t>> generate_walks(const AugmentedCascadeGraph& ag,
                                                      int walks_per_node, int walk_length,
                                                      std::uint64_t seed);

// Skip-gram with negative sampling over the walk corpus. Row i embeds node i
// (root first, then retweeters in timestamp order).
RowMatrix deepwalk_embed(const AugmentedCascadeGraph& ag, const DeepWalkParams& params,
                         std::uint64_t seed);

struct UserMeta {
  double creation_days = 0.0;  // days since epoch
  double verified = 0.0;
  std::int32_t language_code = 0;  // frequency rank, 1 = most common, 0 = missing
  std::unordered_map<std::string, double> counters;
};

struct UserMetaStore {
  std::unordered_map<UserId, UserMeta> by_user;
  const UserMeta* find(UserId u) const {
    auto it = by_user.find(u);
    return it == by_user.end() ? nullptr : &it->second;
  }
};

// Optional users.jsonl: {"user","created_at","verified","language", <counters>...}.
// Unknown users are interned; languages get frequency-ranked integer codes.
UserMetaStore load_user_meta(const std::string& path, UserInterner& interner);

struct FeatureConfig {
  int cap = 250;
  int pca_dim = 90;
  DeepWalkParams deepwalk;
  std::vector<std::string> counters;  // enabled max-counter names, layout order
  int topic_slots = 4;
  bool z_normalize = true;

  int user_row_width() const {
    return deepwalk.dim + 5 + 2 * static_cast<int>(counters.size());
  }
  int text_width() const { return 2 + topic_slots + 1; }
  int raw_width() const { return cap * user_row_width() + text_width(); }
};

struct UserFeatureRow {
  double creation_days = 0.0;
  double verified = 0.0;
  double language_code = 0.0;
  double meta_present = 0.0;
  double reaction_time = 0.0;  // seconds since the root tweet; 0 for the root
  std::vector<double> counter_values;
  std::vector<double> counter_present;
};

std::vector<UserFeatureRow> build_user_rows(const Cascade& c, const UserMetaStore& meta,
                                            const FeatureConfig& cfg);

// Layout: cap user blocks of [deepwalk row | creation, verified, language,
// meta_present, reaction_time | (counter, present)...], zero-padded past the
// real participants, then [sentiment class, score | topic slots | size].
Vector assemble_cascade_vector(const Cascade& c, const RowMatrix& embedding,
                               std::span<const UserFeatureRow> user_rows,
                               const FeatureConfig& cfg);

// Full per-cascade pass: augment, embed (seed mixed with the cascade id so
// any evaluation order gives identical rows), assemble.
Vector featurize_cascade(const Cascade& c, const SocialGraph& g, const UserMetaStore& meta,
                         const FeatureConfig& cfg, std::uint64_t global_seed);

RowMatrix featurize_all(std::span<const Cascade> cascades, const SocialGraph& g,
                        const UserMetaStore& meta, const FeatureConfig& cfg,
                        std::uint64_t global_seed);

// True for columns holding scalar features (everything except deepwalk spans).
std::vector<char> scalar_column_mask(const FeatureConfig& cfg);

// In-place z-normalization of masked columns; zero-variance columns collapse
// to exact zeros.
void z_normalize_columns(RowMatrix& m, std::span<const char> mask);

struct FeatureMatrix {
  RowMatrix rows;       // M x target_dim projections
  Matrix pca_basis;     // D_raw x target_dim, orthonormal columns
  Vector mean;          // column means of the input
  Vector explained_variance_ratio;
};

FeatureMatrix pca_fit_transform(const RowMatrix& raw, int target_dim);

}  // namespace cascata
