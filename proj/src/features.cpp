#include "cascata/features.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/SVD>
#include <json.hpp>

namespace cascata {

AugmentedCascadeGraph augment_cascade(const Cascade& c, const SocialGraph& g) {
  AugmentedCascadeGraph ag;
  ag.users.push_back(c.root_user);
  ag.timestamps.push_back(c.root_timestamp);
  for (const auto& [u, ts] : c.retweeters) {
    ag.users.push_back(u);
    ag.timestamps.push_back(ts);
  }
  const std::int32_t n = ag.node_count();

  std::unordered_map<UserId, std::int32_t> local;
  local.reserve(ag.users.size());
  for (std::int32_t i = 0; i < n; ++i) local.emplace(ag.users[i], i);

  std::vector<std::pair<std::int32_t, std::int32_t>> edges;
  for (std::int32_t i = 1; i < n; ++i) edges.emplace_back(0, i);  // star

  // Each retweeter contributes its outgoing interactions that happened before
  // its own retweet and point at another participant.
  for (std::int32_t i = 1; i < n; ++i) {
    NodeIndex node = g.node_of(ag.users[i]);
    if (node == kNoNode) continue;
    const std::int64_t t = ag.timestamps[i];
    auto dsts = g.out_neighbors(node);
    auto tss = g.out_timestamps(node);
    for (std::size_t e = 0; e < dsts.size(); ++e) {
      if (tss[e] >= t) continue;
      auto it = local.find(g.user_of_node[dsts[e]]);
      if (it == local.end() || it->second == i) continue;
      edges.emplace_back(std::min(i, it->second), std::max(i, it->second));
    }
  }

  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  ag.adj.assign(n, {});
  for (auto [a, b] : edges) {
    ag.adj[a].push_back(b);
    ag.adj[b].push_back(a);
  }
  for (auto& nb : ag.adj) std::sort(nb.begin(), nb.end());
  ag.edge_count = static_cast<std::int64_t>(edges.size());
  return ag;
}

std::vector<std::vector<std::int32_t>> generate_walks(const AugmentedCascadeGraph& ag,
                                                      int walks_per_node, int walk_length,
                                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::int32_t n = ag.node_count();
  std::vector<std::vector<std::int32_t>> walks;
  walks.reserve(static_cast<std::size_t>(n) * walks_per_node);

  std::vector<std::int32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int pass = 0; pass < walks_per_node; ++pass) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::int32_t start : order) {
      std::vector<std::int32_t> walk;
      walk.reserve(walk_length);
      std::int32_t cur = start;
      walk.push_back(cur);
      for (int step = 1; step < walk_length; ++step) {
        const auto& nb = ag.adj[cur];
        if (!nb.empty()) {
          std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
          cur = nb[pick(rng)];
        }
        walk.push_back(cur);
      }
      walks.push_back(std::move(walk));
    }
  }
  return walks;
}

RowMatrix deepwalk_embed(const AugmentedCascadeGraph& ag, const DeepWalkParams& params,
                         std::uint64_t seed) {
  const std::int32_t n = ag.node_count();
  const int dim = params.dim;
  std::mt19937_64 rng(mix_seed(seed, fnv1a64("deepwalk")));
  auto walks = generate_walks(ag, params.walks_per_node, params.walk_length, rng());

  // unigram^0.75 noise distribution over walk occurrences
  std::vector<double> cum(n, 0.0);
  {
    std::vector<std::int64_t> counts(n, 0);
    for (const auto& w : walks)
      for (std::int32_t v : w) ++counts[v];
    double run = 0.0;
    for (std::int32_t v = 0; v < n; ++v) {
      run += std::pow(static_cast<double>(counts[v]), 0.75);
      cum[v] = run;
    }
  }
  const double cum_total = cum.back();
  std::uniform_real_distribution<double> unoise(0.0, cum_total);
  auto sample_noise = [&] {
    auto it = std::upper_bound(cum.begin(), cum.end(), unoise(rng));
    return static_cast<std::int32_t>(std::min<std::ptrdiff_t>(it - cum.begin(), n - 1));
  };

  RowMatrix win(n, dim);
  {
    std::uniform_real_distribution<double> u(-0.5 / dim, 0.5 / dim);
    for (std::int32_t v = 0; v < n; ++v)
      for (int d = 0; d < dim; ++d) win(v, d) = u(rng);
  }
  RowMatrix wout = RowMatrix::Zero(n, dim);

  std::int64_t total_positions = 0;
  for (const auto& w : walks) total_positions += static_cast<std::int64_t>(w.size());
  total_positions *= params.epochs;

  const double min_alpha = params.lr * 1e-4;
  std::int64_t processed = 0;
  std::uniform_int_distribution<int> shrink(0, params.window - 1);
  Vector grad_in(dim);

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    for (const auto& walk : walks) {
      const int len = static_cast<int>(walk.size());
      for (int i = 0; i < len; ++i) {
        double alpha =
            std::max(min_alpha, params.lr * (1.0 - static_cast<double>(processed) /
                                                       static_cast<double>(total_positions + 1)));
        ++processed;
        const std::int32_t center = walk[i];
        const int reach = params.window - shrink(rng);
        for (int j = std::max(0, i - reach); j <= std::min(len - 1, i + reach); ++j) {
          if (j == i) continue;
          const std::int32_t ctx = walk[j];
          grad_in.setZero();
          for (int s = 0; s <= params.neg_samples; ++s) {
            std::int32_t target;
            double label;
            if (s == 0) {
              target = ctx;
              label = 1.0;
            } else {
              target = sample_noise();
              if (target == ctx) continue;
              label = 0.0;
            }
            double f = win.row(center).dot(wout.row(target));
            f = std::clamp(f, -30.0, 30.0);
            const double sigma = 1.0 / (1.0 + std::exp(-f));
            const double gscale = (label - sigma) * alpha;
            grad_in += gscale * wout.row(target).transpose();
            wout.row(target) += gscale * win.row(center);
          }
          win.row(center) += grad_in.transpose();
        }
      }
    }
  }
  return win;
}

namespace {

void warn_meta(std::int64_t& warned, const char* what, std::int64_t line_no) {
  if (warned < 10)
    std::fprintf(stderr, "user-meta: %s at line %lld\n", what, static_cast<long long>(line_no));
  else if (warned == 10)
    std::fprintf(stderr, "user-meta: further warnings suppressed\n");
  ++warned;
}

}  // namespace

UserMetaStore load_user_meta(const std::string& path, UserInterner& interner) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open user metadata file: " + path);

  UserMetaStore store;
  std::unordered_map<std::string, std::int64_t> lang_count;
  std::unordered_map<UserId, std::string> lang_of;
  std::string line;
  std::int64_t line_no = 0, warned = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("user") || !j["user"].is_string()) {
      warn_meta(warned, "malformed record", line_no);
      continue;
    }
    UserId u = interner.intern(j["user"].get<std::string>());
    UserMeta meta;
    if (j.contains("created_at") && j["created_at"].is_number())
      meta.creation_days = j["created_at"].get<double>() / 86400.0;
    if (j.contains("verified")) {
      if (j["verified"].is_boolean()) meta.verified = j["verified"].get<bool>() ? 1.0 : 0.0;
      else if (j["verified"].is_number()) meta.verified = j["verified"].get<double>() != 0.0;
    }
    if (j.contains("language") && j["language"].is_string()) {
      std::string lang = j["language"].get<std::string>();
      ++lang_count[lang];
      lang_of[u] = lang;
    }
    for (auto& [key, value] : j.items()) {
      if (key == "user" || key == "created_at" || key == "verified" || key == "language")
        continue;
      if (value.is_number()) meta.counters[key] = value.get<double>();
    }
    store.by_user[u] = std::move(meta);
  }

  // frequency-ranked language codes, 1 = most common
  std::vector<std::pair<std::string, std::int64_t>> ranked(lang_count.begin(), lang_count.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::unordered_map<std::string, std::int32_t> code;
  for (std::size_t i = 0; i < ranked.size(); ++i)
    code[ranked[i].first] = static_cast<std::int32_t>(i + 1);
  for (auto& [u, lang] : lang_of) store.by_user[u].language_code = code[lang];
  return store;
}

std::vector<UserFeatureRow> build_user_rows(const Cascade& c, const UserMetaStore& meta,
                                            const FeatureConfig& cfg) {
  std::vector<UserFeatureRow> rows;
  rows.reserve(1 + c.retweeters.size());
  auto make_row = [&](UserId u, double reaction) {
    UserFeatureRow r;
    r.reaction_time = reaction;
    r.counter_values.assign(cfg.counters.size(), 0.0);
    r.counter_present.assign(cfg.counters.size(), 0.0);
    if (const UserMeta* m = meta.find(u)) {
      r.creation_days = m->creation_days;
      r.verified = m->verified;
      r.language_code = static_cast<double>(m->language_code);
      r.meta_present = 1.0;
      for (std::size_t i = 0; i < cfg.counters.size(); ++i) {
        auto it = m->counters.find(cfg.counters[i]);
        if (it != m->counters.end()) {
          r.counter_values[i] = it->second;
          r.counter_present[i] = 1.0;
        }
      }
    }
    return r;
  };
  rows.push_back(make_row(c.root_user, 0.0));
  for (const auto& [u, ts] : c.retweeters)
    rows.push_back(make_row(u, static_cast<double>(ts - c.root_timestamp)));
  return rows;
}

Vector assemble_cascade_vector(const Cascade& c, const RowMatrix& embedding,
                               std::span<const UserFeatureRow> user_rows,
                               const FeatureConfig& cfg) {
  assert(embedding.rows() == static_cast<Eigen::Index>(user_rows.size()));
  assert(embedding.cols() == cfg.deepwalk.dim);
  const int width = cfg.user_row_width();
  Vector out = Vector::Zero(cfg.raw_width());

  const int take = std::min<int>(cfg.cap, static_cast<int>(user_rows.size()));
  for (int r = 0; r < take; ++r) {
    const int base = r * width;
    out.segment(base, cfg.deepwalk.dim) = embedding.row(r);
    const UserFeatureRow& u = user_rows[r];
    int off = base + cfg.deepwalk.dim;
    out[off + 0] = u.creation_days;
    out[off + 1] = u.verified;
    out[off + 2] = u.language_code;
    out[off + 3] = u.meta_present;
    out[off + 4] = u.reaction_time;
    for (std::size_t i = 0; i < cfg.counters.size(); ++i) {
      out[off + 5 + 2 * static_cast<int>(i)] = u.counter_values[i];
      out[off + 5 + 2 * static_cast<int>(i) + 1] = u.counter_present[i];
    }
  }

  int t = cfg.cap * width;
  if (c.sentiment) {
    out[t + 0] = static_cast<double>(c.sentiment->first);
    out[t + 1] = c.sentiment->second;
  }
  for (int s = 0; s < cfg.topic_slots && s < static_cast<int>(c.topic_ids.size()); ++s)
    out[t + 2 + s] = static_cast<double>(c.topic_ids[s]);
  out[t + 2 + cfg.topic_slots] = static_cast<double>(c.participant_count());
  return out;
}

Vector featurize_cascade(const Cascade& c, const SocialGraph& g, const UserMetaStore& meta,
                         const FeatureConfig& cfg, std::uint64_t global_seed) {
  AugmentedCascadeGraph ag = augment_cascade(c, g);
  RowMatrix emb = deepwalk_embed(ag, cfg.deepwalk, mix_seed(global_seed, fnv1a64(c.id)));
  std::vector<UserFeatureRow> rows = build_user_rows(c, meta, cfg);
  return assemble_cascade_vector(c, emb, rows, cfg);
}

RowMatrix featurize_all(std::span<const Cascade> cascades, const SocialGraph& g,
                        const UserMetaStore& meta, const FeatureConfig& cfg,
                        std::uint64_t global_seed) {
  RowMatrix out(static_cast<Eigen::Index>(cascades.size()), cfg.raw_width());
  for (std::size_t i = 0; i < cascades.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) =
        featurize_cascade(cascades[i], g, meta, cfg, global_seed).transpose();
  return out;
}

std::vector<char> scalar_column_mask(const FeatureConfig& cfg) {
  std::vector<char> mask(cfg.raw_width(), 1);
  const int width = cfg.user_row_width();
  for (int r = 0; r < cfg.cap; ++r)
    std::fill_n(mask.begin() + static_cast<std::ptrdiff_t>(r) * width, cfg.deepwalk.dim, 0);
  return mask;
}

void z_normalize_columns(RowMatrix& m, std::span<const char> mask) {
  if (m.rows() == 0) return;
  const auto rows = static_cast<double>(m.rows());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    if (!mask[static_cast<std::size_t>(c)]) continue;
    const double mean = m.col(c).mean();
    m.col(c).array() -= mean;
    const double sigma = std::sqrt(m.col(c).squaredNorm() / rows);
    if (sigma < 1e-12)
      m.col(c).setZero();
    else
      m.col(c) /= sigma;
  }
}

FeatureMatrix pca_fit_transform(const RowMatrix& raw, int target_dim) {
  const Eigen::Index m = raw.rows(), d = raw.cols();
  if (target_dim < 1 || target_dim > std::min(m, d))
    throw std::invalid_argument("pca target dimension must be in [1, min(rows, cols)]");

  FeatureMatrix fm;
  fm.mean = raw.colwise().mean();
  Matrix centered = raw.rowwise() - fm.mean.transpose();

  Eigen::BDCSVD<Matrix> svd(centered, Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  fm.pca_basis = svd.matrixV().leftCols(target_dim);
  fm.rows = centered * fm.pca_basis;

  const double total = sv.squaredNorm();
  fm.explained_variance_ratio = Vector::Zero(target_dim);
  if (total > 0)
    fm.explained_variance_ratio = sv.head(target_dim).array().square() / total;
  return fm;
}

}  // namespace cascata
