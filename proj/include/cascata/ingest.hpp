#pragma once

#include "cascata/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cascata {

enum class InteractionKind { Retweet, Reply, Mention };

// One timestamped user->user action. User ids are interned to dense integers
// at parse time; the interner keeps the original strings for reporting.
struct InteractionRecord {
  InteractionKind kind = InteractionKind::Retweet;
  UserId source_user = 0;
  UserId target_user = 0;
  std::int64_t timestamp = 0;
  std::string tweet_id;
  std::optional<std::string> cascade_id;  // retweets inside a tracked cascade only
};

class UserInterner {
 public:
  UserId intern(std::string_view name) {
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    UserId id = static_cast<UserId>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
  }
  std::optional<UserId> lookup(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  const std::string& name_of(UserId id) const { return names_.at(static_cast<size_t>(id)); }
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, UserId> ids_;
  std::vector<std::string> names_;
};

struct ParseStats {
  std::size_t total_lines = 0;
  std::size_t malformed_lines = 0;
  std::size_t unknown_kind = 0;
};

// interactions.jsonl, one object per line:
//   {"kind":"retweet|reply|mention","src":"u","dst":"v","ts":123,"tweet":"t","cascade":"c"|null}
// Malformed lines are skipped with a warning and counted; unknown kinds are
// skipped and counted separately. Throws on an unreadable file.
std::vector<InteractionRecord> parse_interactions(const std::filesystem::path& path,
                                                  UserInterner& interner,
                                                  ParseStats* stats = nullptr);

// Directed simple graph of users. Edges keep the earliest interaction
// timestamp; self-interactions are dropped at build time. Node indices are
// dense and cover exactly the users that appear in at least one record.
struct SocialGraph {
  NodeIndex node_count = 0;
  std::vector<UserId> user_of_node;
  std::unordered_map<UserId, NodeIndex> node_of_user;

  // CSR, out- and in-neighbor views carry the same edge set.
  std::vector<std::int64_t> out_ptr;
  std::vector<NodeIndex> out_dst;
  std::vector<std::int64_t> out_ts;
  std::vector<std::int64_t> in_ptr;
  std::vector<NodeIndex> in_src;
  std::vector<std::int64_t> in_ts;

  std::size_t edge_count = 0;
  std::size_t duplicates_collapsed = 0;
  std::size_t self_loops_dropped = 0;

  bool has_user(UserId u) const { return node_of_user.count(u) > 0; }
  NodeIndex node_of(UserId u) const {
    auto it = node_of_user.find(u);
    return it == node_of_user.end() ? kNoNode : it->second;
  }
  std::span<const NodeIndex> out_neighbors(NodeIndex v) const {
    return {out_dst.data() + out_ptr[v], static_cast<size_t>(out_ptr[v + 1] - out_ptr[v])};
  }
  std::span<const std::int64_t> out_timestamps(NodeIndex v) const {
    return {out_ts.data() + out_ptr[v], static_cast<size_t>(out_ptr[v + 1] - out_ptr[v])};
  }
};

SocialGraph build_social_graph(std::span<const InteractionRecord> records);

enum class CascadeLabel { Fake, NonFake, Unknown };

const char* to_string(CascadeLabel label);
std::optional<CascadeLabel> label_from_string(std::string_view s);

// One retweet cascade. Retweeters are deduplicated (earliest retweet per
// user), sorted by timestamp, and never include the root user.
struct Cascade {
  std::string id;
  UserId root_user = 0;
  std::string root_tweet_id;
  std::int64_t root_timestamp = 0;
  std::vector<std::pair<UserId, std::int64_t>> retweeters;
  CascadeLabel label = CascadeLabel::Unknown;
  std::optional<std::pair<int, double>> sentiment;  // (1|2, score)
  std::vector<int> topic_ids;
  std::vector<std::string> hashtags;

  std::size_t participant_count() const { return retweeters.size() + 1; }
};

struct ExtractStats {
  std::size_t malformed_meta_lines = 0;
  std::size_t unknown_cascade_refs = 0;
  std::size_t early_retweets_dropped = 0;  // retweet ts < root ts
  std::size_t root_self_retweets_dropped = 0;
};

// cascades.jsonl, one object per line:
//   {"cascade":"c","root_user":"u","root_tweet":"t","root_ts":1,
//    "label":"fake|nonfake|unknown","sentiment":[2,0.9]|null,"topics":[1,2]|null,
//    "hashtags":["h"]|null}
// Retweet records referencing an unknown cascade id are counted and ignored.
std::vector<Cascade> extract_cascades(std::span<const InteractionRecord> records,
                                      const std::filesystem::path& meta_path,
                                      UserInterner& interner,
                                      ExtractStats* stats = nullptr);

// Keeps only cascades with at least `min_participants` users (root included).
std::vector<Cascade> filter_by_participants(std::vector<Cascade> cascades,
                                            std::size_t min_participants);

using UserCascadeMap = std::unordered_map<UserId, std::vector<CascadeIndex>>;

// user -> every cascade index where the user is root or retweeter. Users that
// participate in no cascade are absent from the map.
UserCascadeMap user_to_cascades(std::span<const Cascade> cascades);

}  // namespace cascata
