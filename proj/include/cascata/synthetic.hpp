#pragma once

#include <cstdint>
#include <string>

namespace cascata {

// Planted-partition harness: block-structured background interactions plus
// per-block cascades whose labels follow block parity at label_fidelity.
struct SyntheticSpec {
  std::int32_t n_users = 2000;
  std::int32_t n_cascades = 400;
  std::int32_t n_blocks = 4;
  double p_intra = 0.02;
  double p_inter = 1e-4;
  double label_fidelity = 0.95;
  std::int32_t participants = 8;  // per cascade, root included
  std::uint64_t seed = 0;
};

struct SyntheticStats {
  std::int64_t background_edges = 0;
  std::int64_t retweets = 0;
  std::int64_t cascades = 0;
};

SyntheticStats generate_synthetic(const SyntheticSpec& spec, const std::string& interactions_path,
                                  const std::string& cascades_path);

}  // namespace cascata
