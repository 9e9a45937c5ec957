#include "cascata/ingest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cascata {

using nlohmann::json;

namespace {

bool warn_limited(std::size_t count) { return count <= 10; }

std::optional<InteractionKind> kind_from_string(std::string_view s) {
  if (s == "retweet") return InteractionKind::Retweet;
  if (s == "reply") return InteractionKind::Reply;
  if (s == "mention") return InteractionKind::Mention;
  return std::nullopt;
}

}  // namespace

std::vector<InteractionRecord> parse_interactions(const std::filesystem::path& path,
                                                  UserInterner& interner,
                                                  ParseStats* stats) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open interactions file: " + path.string());

  ParseStats local;
  std::vector<InteractionRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++local.total_lines;

    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    bool ok = !j.is_discarded() && j.is_object() && j.contains("kind") && j["kind"].is_string() &&
              j.contains("src") && j["src"].is_string() && j.contains("dst") &&
              j["dst"].is_string() && j.contains("ts") && j["ts"].is_number_integer() &&
              j.contains("tweet") && j["tweet"].is_string();
    if (ok && j["ts"].get<std::int64_t>() < 0) ok = false;
    if (!ok) {
      ++local.malformed_lines;
      if (warn_limited(local.malformed_lines))
        std::fprintf(stderr, "warning: %s:%zu: malformed interaction line skipped\n",
                     path.string().c_str(), lineno);
      continue;
    }
    auto kind = kind_from_string(j["kind"].get<std::string>());
    if (!kind) {
      ++local.unknown_kind;
      if (warn_limited(local.unknown_kind))
        std::fprintf(stderr, "warning: %s:%zu: unknown interaction kind '%s' skipped\n",
                     path.string().c_str(), lineno, j["kind"].get<std::string>().c_str());
      continue;
    }

    InteractionRecord rec;
    rec.kind = *kind;
    rec.source_user = interner.intern(j["src"].get<std::string>());
    rec.target_user = interner.intern(j["dst"].get<std::string>());
    rec.timestamp = j["ts"].get<std::int64_t>();
    rec.tweet_id = j["tweet"].get<std::string>();
    if (rec.kind == InteractionKind::Retweet && j.contains("cascade") && j["cascade"].is_string())
      rec.cascade_id = j["cascade"].get<std::string>();
    records.push_back(std::move(rec));
  }
  if (stats) *stats = local;
  return records;
}

SocialGraph build_social_graph(std::span<const InteractionRecord> records) {
  SocialGraph g;

  // Node indexing in first-seen order keeps rebuilds deterministic.
  auto node_for = [&](UserId u) {
    auto [it, inserted] = g.node_of_user.try_emplace(u, g.node_count);
    if (inserted) {
      g.user_of_node.push_back(u);
      ++g.node_count;
    }
    return it->second;
  };

  struct Triple {
    NodeIndex src, dst;
    std::int64_t ts;
  };
  std::vector<Triple> triples;
  triples.reserve(records.size());
  for (const auto& r : records) {
    if (r.source_user == r.target_user) {
      ++g.self_loops_dropped;
      // still a sighting of the user
      node_for(r.source_user);
      continue;
    }
    triples.push_back({node_for(r.source_user), node_for(r.target_user), r.timestamp});
  }

  std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
    if (a.src != b.src) return a.src < b.src;
    if (a.dst != b.dst) return a.dst < b.dst;
    return a.ts < b.ts;
  });

  const NodeIndex n = g.node_count;
  g.out_ptr.assign(static_cast<size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < triples.size();) {
    std::size_t j = i + 1;
    while (j < triples.size() && triples[j].src == triples[i].src &&
           triples[j].dst == triples[i].dst)
      ++j;
    g.duplicates_collapsed += j - i - 1;
    g.out_dst.push_back(triples[i].dst);
    g.out_ts.push_back(triples[i].ts);  // sorted: first is earliest
    ++g.out_ptr[static_cast<size_t>(triples[i].src) + 1];
    i = j;
  }
  for (NodeIndex v = 0; v < n; ++v) g.out_ptr[v + 1] += g.out_ptr[v];
  g.edge_count = g.out_dst.size();

  // In-neighbor view.
  g.in_ptr.assign(static_cast<size_t>(n) + 1, 0);
  for (NodeIndex d : g.out_dst) ++g.in_ptr[static_cast<size_t>(d) + 1];
  for (NodeIndex v = 0; v < n; ++v) g.in_ptr[v + 1] += g.in_ptr[v];
  g.in_src.resize(g.edge_count);
  g.in_ts.resize(g.edge_count);
  std::vector<std::int64_t> cursor(g.in_ptr.begin(), g.in_ptr.end() - 1);
  for (NodeIndex s = 0; s < n; ++s) {
    for (std::int64_t e = g.out_ptr[s]; e < g.out_ptr[s + 1]; ++e) {
      auto slot = cursor[g.out_dst[e]]++;
      g.in_src[slot] = s;
      g.in_ts[slot] = g.out_ts[e];
    }
  }
  return g;
}

const char* to_string(CascadeLabel label) {
  switch (label) {
    case CascadeLabel::Fake: return "fake";
    case CascadeLabel::NonFake: return "nonfake";
    default: return "unknown";
  }
}

std::optional<CascadeLabel> label_from_string(std::string_view s) {
  if (s == "fake") return CascadeLabel::Fake;
  if (s == "nonfake") return CascadeLabel::NonFake;
  if (s == "unknown") return CascadeLabel::Unknown;
  return std::nullopt;
}

std::vector<Cascade> extract_cascades(std::span<const InteractionRecord> records,
                                      const std::filesystem::path& meta_path,
                                      UserInterner& interner,
                                      ExtractStats* stats) {
  std::ifstream in(meta_path);
  if (!in) throw std::runtime_error("cannot open cascade file: " + meta_path.string());

  ExtractStats local;
  std::vector<Cascade> cascades;
  std::unordered_map<std::string, CascadeIndex> index_of;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    bool ok = !j.is_discarded() && j.is_object() && j.contains("cascade") &&
              j["cascade"].is_string() && j.contains("root_user") && j["root_user"].is_string() &&
              j.contains("root_tweet") && j["root_tweet"].is_string() && j.contains("root_ts") &&
              j["root_ts"].is_number_integer() && j.contains("label") && j["label"].is_string();
    std::optional<CascadeLabel> label;
    if (ok) label = label_from_string(j["label"].get<std::string>());
    if (!ok || !label) {
      ++local.malformed_meta_lines;
      if (warn_limited(local.malformed_meta_lines))
        std::fprintf(stderr, "warning: %s:%zu: malformed cascade line skipped\n",
                     meta_path.string().c_str(), lineno);
      continue;
    }

    Cascade c;
    c.id = j["cascade"].get<std::string>();
    if (index_of.count(c.id)) {
      ++local.malformed_meta_lines;
      continue;  // duplicate id, keep the first
    }
    c.root_user = interner.intern(j["root_user"].get<std::string>());
    c.root_tweet_id = j["root_tweet"].get<std::string>();
    c.root_timestamp = j["root_ts"].get<std::int64_t>();
    c.label = *label;
    if (j.contains("sentiment") && j["sentiment"].is_array() && j["sentiment"].size() == 2) {
      int sl = j["sentiment"][0].get<int>();
      if (sl == 1 || sl == 2) c.sentiment = {sl, j["sentiment"][1].get<double>()};
    }
    if (j.contains("topics") && j["topics"].is_array())
      for (const auto& t : j["topics"])
        if (t.is_number_integer()) c.topic_ids.push_back(t.get<int>());
    if (j.contains("hashtags") && j["hashtags"].is_array())
      for (const auto& h : j["hashtags"])
        if (h.is_string()) c.hashtags.push_back(h.get<std::string>());

    index_of.emplace(c.id, static_cast<CascadeIndex>(cascades.size()));
    cascades.push_back(std::move(c));
  }

  // Earliest valid retweet per (cascade, user).
  std::vector<std::unordered_map<UserId, std::int64_t>> earliest(cascades.size());
  for (const auto& r : records) {
    if (r.kind != InteractionKind::Retweet || !r.cascade_id) continue;
    auto it = index_of.find(*r.cascade_id);
    if (it == index_of.end()) {
      ++local.unknown_cascade_refs;
      continue;
    }
    Cascade& c = cascades[static_cast<size_t>(it->second)];
    if (r.source_user == c.root_user) {
      ++local.root_self_retweets_dropped;
      continue;
    }
    if (r.timestamp < c.root_timestamp) {
      ++local.early_retweets_dropped;
      continue;
    }
    auto [slot, inserted] = earliest[it->second].try_emplace(r.source_user, r.timestamp);
    if (!inserted && r.timestamp < slot->second) slot->second = r.timestamp;
  }
  for (std::size_t i = 0; i < cascades.size(); ++i) {
    auto& rts = cascades[i].retweeters;
    rts.assign(earliest[i].begin(), earliest[i].end());
    std::sort(rts.begin(), rts.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second < b.second;
      return a.first < b.first;
    });
  }

  if (stats) *stats = local;
  return cascades;
}

std::vector<Cascade> filter_by_participants(std::vector<Cascade> cascades,
                                            std::size_t min_participants) {
  if (min_participants <= 1) return cascades;
  std::erase_if(cascades,
                [&](const Cascade& c) { return c.participant_count() < min_participants; });
  return cascades;
}

UserCascadeMap user_to_cascades(std::span<const Cascade> cascades) {
  UserCascadeMap map;
  for (std::size_t i = 0; i < cascades.size(); ++i) {
    const auto idx = static_cast<CascadeIndex>(i);
    map[cascades[i].root_user].push_back(idx);
    for (const auto& [user, ts] : cascades[i].retweeters) map[user].push_back(idx);
  }
  return map;
}

}  // namespace cascata
