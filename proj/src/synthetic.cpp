#include "cascata/synthetic.hpp"

#include <fstream>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "cascata/types.hpp"

namespace cascata {

namespace {

void validate(const SyntheticSpec& s) {
  if (s.n_users < 1 || s.n_cascades < 0 || s.n_blocks < 1)
    throw std::invalid_argument("synthetic: sizes must be positive");
  if (s.p_intra < 0 || s.p_intra > 1 || s.p_inter < 0 || s.p_inter > 1)
    throw std::invalid_argument("synthetic: probabilities must lie in [0,1]");
  if (s.p_intra <= s.p_inter)
    throw std::invalid_argument("synthetic: intra-block probability must exceed inter-block");
  if (s.label_fidelity <= 0.5 || s.label_fidelity > 1.0)
    throw std::invalid_argument("synthetic: label_fidelity must lie in (0.5, 1]");
  if (s.participants < 1 || s.participants > s.n_users / s.n_blocks)
    throw std::invalid_argument("synthetic: participants per cascade exceed block size");
}

}  // namespace

SyntheticStats generate_synthetic(const SyntheticSpec& spec, const std::string& interactions_path,
                                  const std::string& cascades_path) {
  validate(spec);
  std::ofstream iout(interactions_path);
  if (!iout) throw std::runtime_error("cannot write " + interactions_path);
  std::ofstream cout_(cascades_path);
  if (!cout_) throw std::runtime_error("cannot write " + cascades_path);

  std::mt19937_64 rng(mix_seed(spec.seed, fnv1a64("synthetic")));
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> bg_ts(0, 999'999);

  SyntheticStats stats;
  auto user = [](std::int32_t u) { return "u" + std::to_string(u); };

  // Background interactions live strictly before every cascade so augmented
  // subgraphs can see them as prior edges.
  std::int64_t tweet_counter = 0;
  for (std::int32_t u = 0; u < spec.n_users; ++u) {
    for (std::int32_t v = u + 1; v < spec.n_users; ++v) {
      const bool same = (u % spec.n_blocks) == (v % spec.n_blocks);
      if (coin(rng) >= (same ? spec.p_intra : spec.p_inter)) continue;
      const bool flip = coin(rng) < 0.5;
      nlohmann::json j{{"kind", coin(rng) < 0.5 ? "reply" : "mention"},
                       {"src", user(flip ? v : u)},
                       {"dst", user(flip ? u : v)},
                       {"ts", bg_ts(rng)},
                       {"tweet", "bg" + std::to_string(tweet_counter++)},
                       {"cascade", nullptr}};
      iout << j.dump() << '\n';
      ++stats.background_edges;
    }
  }

  const double p_cross =
      spec.n_blocks > 1 ? spec.p_inter / (spec.p_intra + spec.p_inter) : 0.0;
  auto block_size = [&](std::int32_t b) { return (spec.n_users - b - 1) / spec.n_blocks + 1; };
  auto sample_in_block = [&](std::int32_t b) {
    std::uniform_int_distribution<std::int32_t> pick(0, block_size(b) - 1);
    return b + pick(rng) * spec.n_blocks;
  };

  for (std::int32_t c = 0; c < spec.n_cascades; ++c) {
    const std::int32_t home = c % spec.n_blocks;
    const std::int32_t root = sample_in_block(home);
    const std::int64_t root_ts = 2'000'000 + static_cast<std::int64_t>(c) * 1000;

    std::unordered_set<std::int32_t> used{root};
    std::vector<std::int32_t> retweeters;
    for (std::int32_t i = 1; i < spec.participants; ++i) {
      std::int32_t pick = -1;
      for (int attempt = 0; attempt < 100 && pick < 0; ++attempt) {
        std::int32_t b = home;
        if (spec.n_blocks > 1 && coin(rng) < p_cross) {
          std::uniform_int_distribution<std::int32_t> other(0, spec.n_blocks - 2);
          b = other(rng);
          if (b >= home) ++b;
        }
        std::int32_t cand = sample_in_block(b);
        if (!used.count(cand)) pick = cand;
      }
      if (pick < 0) {
        for (std::int32_t m = 0; m < block_size(home) && pick < 0; ++m)
          if (!used.count(home + m * spec.n_blocks)) pick = home + m * spec.n_blocks;
      }
      if (pick < 0) break;  // block exhausted
      used.insert(pick);
      retweeters.push_back(pick);
    }

    const std::string cid = "c" + std::to_string(c);
    for (std::size_t i = 0; i < retweeters.size(); ++i) {
      nlohmann::json j{{"kind", "retweet"},
                       {"src", user(retweeters[i])},
                       {"dst", user(root)},
                       {"ts", root_ts + static_cast<std::int64_t>(i) + 1},
                       {"tweet", cid + "_rt" + std::to_string(i)},
                       {"cascade", cid}};
      iout << j.dump() << '\n';
      ++stats.retweets;
    }

    bool fake = (home % 2) == 0;
    if (coin(rng) > spec.label_fidelity) fake = !fake;
    nlohmann::json meta{{"cascade", cid},
                        {"root_user", user(root)},
                        {"root_tweet", cid + "_root"},
                        {"root_ts", root_ts},
                        {"label", fake ? "fake" : "nonfake"},
                        {"sentiment", nullptr},
                        {"topics", nullptr}};
    cout_ << meta.dump() << '\n';
    ++stats.cascades;
  }
  return stats;
}

}  // namespace cascata
