#include "cascata/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "cascata/io.hpp"

namespace cascata {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw std::invalid_argument("not a boolean: " + v);
}

template <class T, class F>
std::vector<T> parse_list(const std::string& v, F convert) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(convert(item));
  }
  return out;
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  // reject trailing garbage: "1 2" or "6x" silently becoming 1 or 6 would
  // misconfigure a run without any visible error
  auto to_int = [](const std::string& s) {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("not an integer: " + s);
    return v;
  };
  auto to_double = [](const std::string& s) {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("not a number: " + s);
    return v;
  };

  if (key == "interactions") cfg.interactions_path = value;
  else if (key == "cascades") cfg.cascades_path = value;
  else if (key == "users") cfg.users_path = value;
  else if (key == "workdir") cfg.workdir = value;
  else if (key == "partitioner") {
    if (value != "multilevel" && value != "louvain")
      throw std::invalid_argument("partitioner must be multilevel or louvain");
    cfg.partitioner = value;
  } else if (key == "k") cfg.k_clusters = to_int(value);
  else if (key == "eps") cfg.eps = to_double(value);
  else if (key == "resolution") cfg.resolution = to_double(value);
  else if (key == "min_participants") cfg.min_participants = to_int(value);
  else if (key == "hashtag_hyperedges") cfg.hashtag_hyperedges = parse_bool(value);
  else if (key == "drop_singletons") cfg.drop_singleton_hyperedges = parse_bool(value);
  else if (key == "cap") cfg.features.cap = to_int(value);
  else if (key == "pca_dim") cfg.features.pca_dim = to_int(value);
  else if (key == "counters")
    cfg.features.counters = parse_list<std::string>(value, [](const std::string& s) { return s; });
  else if (key == "topic_slots") cfg.features.topic_slots = to_int(value);
  else if (key == "z_normalize") cfg.features.z_normalize = parse_bool(value);
  else if (key == "dw_walks") cfg.features.deepwalk.walks_per_node = to_int(value);
  else if (key == "dw_length") cfg.features.deepwalk.walk_length = to_int(value);
  else if (key == "dw_dim") cfg.features.deepwalk.dim = to_int(value);
  else if (key == "dw_window") cfg.features.deepwalk.window = to_int(value);
  else if (key == "dw_negatives") cfg.features.deepwalk.neg_samples = to_int(value);
  else if (key == "dw_epochs") cfg.features.deepwalk.epochs = to_int(value);
  else if (key == "dw_lr") cfg.features.deepwalk.lr = to_double(value);
  else if (key == "epochs") cfg.train.epochs = to_int(value);
  else if (key == "dropout") cfg.train.dropout = to_double(value);
  else if (key == "lr") cfg.train.learning_rate = to_double(value);
  else if (key == "optimizer") {
    if (value == "adam") cfg.train.optimizer = Optimizer::Adam;
    else if (value == "sgd") cfg.train.optimizer = Optimizer::Sgd;
    else throw std::invalid_argument("optimizer must be adam or sgd");
  } else if (key == "hidden_dim") cfg.train.hidden_dim = to_int(value);
  else if (key == "conv_layers") cfg.train.num_conv_layers = to_int(value);
  else if (key == "mlp_hidden1") cfg.train.mlp_hidden1 = to_int(value);
  else if (key == "mlp_hidden2") cfg.train.mlp_hidden2 = to_int(value);
  else if (key == "trials") cfg.trials = to_int(value);
  else if (key == "split_fraction") cfg.split_fraction = to_double(value);
  else if (key == "stratified") cfg.stratified = parse_bool(value);
  else if (key == "sweep_k") cfg.sweep_k = parse_list<int>(value, to_int);
  else if (key == "sweep_layers") cfg.sweep_layers = parse_list<int>(value, to_int);
  else if (key == "sweep_train_fractions")
    cfg.sweep_train_fractions = parse_list<double>(value, to_double);
  else if (key == "seed") {
    std::size_t used = 0;
    cfg.seed = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("not an integer: " + value);
  }
  else throw std::invalid_argument("unknown config key: " + key);
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw StageError("config", "cannot open config file: " + path);
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw StageError("config", "line " + std::to_string(line_no) + " is not key=value");
    try {
      apply_config_entry(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::exception& e) {
      throw StageError("config", "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  return {
      {"interactions", cfg.interactions_path},
      {"cascades", cfg.cascades_path},
      {"users", cfg.users_path},
      {"workdir", cfg.workdir},
      {"partitioner", cfg.partitioner},
      {"k", cfg.k_clusters},
      {"eps", cfg.eps},
      {"resolution", cfg.resolution},
      {"min_participants", cfg.min_participants},
      {"hashtag_hyperedges", cfg.hashtag_hyperedges},
      {"drop_singletons", cfg.drop_singleton_hyperedges},
      {"features",
       {{"cap", cfg.features.cap},
        {"pca_dim", cfg.features.pca_dim},
        {"counters", cfg.features.counters},
        {"topic_slots", cfg.features.topic_slots},
        {"z_normalize", cfg.features.z_normalize},
        {"deepwalk",
         {{"walks_per_node", cfg.features.deepwalk.walks_per_node},
          {"walk_length", cfg.features.deepwalk.walk_length},
          {"dim", cfg.features.deepwalk.dim},
          {"window", cfg.features.deepwalk.window},
          {"neg_samples", cfg.features.deepwalk.neg_samples},
          {"epochs", cfg.features.deepwalk.epochs},
          {"lr", cfg.features.deepwalk.lr}}}}},
      {"train",
       {{"epochs", cfg.train.epochs},
        {"dropout", cfg.train.dropout},
        {"learning_rate", cfg.train.learning_rate},
        {"optimizer", cfg.train.optimizer == Optimizer::Adam ? "adam" : "sgd"},
        {"hidden_dim", cfg.train.hidden_dim},
        {"num_conv_layers", cfg.train.num_conv_layers},
        {"mlp_hidden1", cfg.train.mlp_hidden1},
        {"mlp_hidden2", cfg.train.mlp_hidden2}}},
      {"trials", cfg.trials},
      {"split_fraction", cfg.split_fraction},
      {"stratified", cfg.stratified},
      {"sweep_k", cfg.sweep_k},
      {"sweep_layers", cfg.sweep_layers},
      {"sweep_train_fractions", cfg.sweep_train_fractions},
      {"seed", cfg.seed},
  };
}

Dataset load_dataset(const RunConfig& cfg) {
  Dataset ds;
  try {
    auto records = parse_interactions(cfg.interactions_path, ds.interner, &ds.parse_stats);
    ds.graph = build_social_graph(records);
    auto cascades = extract_cascades(records, cfg.cascades_path, ds.interner, &ds.extract_stats);
    ds.cascades = filter_by_participants(std::move(cascades), cfg.min_participants);
    ds.u2c = user_to_cascades(ds.cascades);
    if (!cfg.users_path.empty()) ds.meta = load_user_meta(cfg.users_path, ds.interner);
  } catch (const std::exception& e) {
    throw StageError("ingest", e.what());
  }
  ds.labels.reserve(ds.cascades.size());
  for (const auto& c : ds.cascades) {
    switch (c.label) {
      case CascadeLabel::Fake: ds.labels.push_back(1); break;
      case CascadeLabel::NonFake: ds.labels.push_back(0); break;
      case CascadeLabel::Unknown: ds.labels.push_back(-1); break;
    }
  }
  return ds;
}

Structure build_structure(const Dataset& ds, const RunConfig& cfg, int k, std::uint64_t seed) {
  Structure st;
  try {
    UGraph ug = symmetrize(ds.graph);
    st.partition = cfg.partitioner == "louvain"
                       ? partition_louvain(ug, cfg.resolution, seed)
                       : partition_multilevel(ug, k, cfg.eps, seed);
  } catch (const std::exception& e) {
    throw StageError("partition", e.what());
  }
  try {
    st.hypergraph = build_hypergraph(st.partition, ds.u2c, ds.cascades, ds.graph,
                                     cfg.drop_singleton_hyperedges);
    if (cfg.hashtag_hyperedges)
      st.hypergraph = add_hashtag_hyperedges(std::move(st.hypergraph), ds.cascades);
    st.incidence = HyperIncidence::from(st.hypergraph);
  } catch (const std::exception& e) {
    throw StageError("hypergraph", e.what());
  }
  return st;
}

FeatureMatrix build_features(const Dataset& ds, const RunConfig& cfg, std::uint64_t seed,
                             int* effective_pca_dim) {
  try {
    if (ds.cascades.empty()) throw std::runtime_error("no cascades to featurize");
    RowMatrix raw = featurize_all(ds.cascades, ds.graph, ds.meta, cfg.features, seed);
    if (cfg.features.z_normalize) {
      auto mask = scalar_column_mask(cfg.features);
      z_normalize_columns(raw, mask);
    }
    const int dim = std::clamp<int>(cfg.features.pca_dim, 1,
                                    static_cast<int>(std::min(raw.rows(), raw.cols())));
    if (effective_pca_dim) *effective_pca_dim = dim;
    return pca_fit_transform(raw, dim);
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("features", e.what());
  }
}

Split make_split(std::span<const std::int32_t> labels, double train_fraction, bool stratified,
                 std::uint64_t seed) {
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    throw std::invalid_argument("split fraction must lie in (0, 1)");
  std::mt19937_64 rng(mix_seed(seed, fnv1a64("split")));
  Split sp;

  auto take = [&](std::vector<std::int32_t>& idx) {
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n = static_cast<std::int64_t>(idx.size());
    if (n == 0) return;
    auto n_train = static_cast<std::int64_t>(std::llround(train_fraction * static_cast<double>(n)));
    n_train = std::clamp<std::int64_t>(n_train, 1, std::max<std::int64_t>(1, n - 1));
    sp.train.insert(sp.train.end(), idx.begin(), idx.begin() + n_train);
    sp.test.insert(sp.test.end(), idx.begin() + n_train, idx.end());
  };

  if (stratified) {
    for (std::int32_t cls = 0; cls < 2; ++cls) {
      std::vector<std::int32_t> idx;
      for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == cls) idx.push_back(static_cast<std::int32_t>(i));
      take(idx);
    }
  } else {
    std::vector<std::int32_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] >= 0) idx.push_back(static_cast<std::int32_t>(i));
    take(idx);
  }
  std::sort(sp.train.begin(), sp.train.end());
  std::sort(sp.test.begin(), sp.test.end());
  return sp;
}

namespace {

nlohmann::json metrics_to_json(const Metrics& m) {
  return {{"accuracy", m.accuracy},
          {"f1_weighted", m.f1_weighted},
          {"precision", {m.precision[0], m.precision[1]}},
          {"recall", {m.recall[0], m.recall[1]}},
          {"f1_per_class", {m.f1[0], m.f1[1]}},
          {"support", {m.support[0], m.support[1]}}};
}

std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size());
  return {mean, std::sqrt(var)};
}

struct TrialBundle {
  nlohmann::json trials = nlohmann::json::array();
  nlohmann::json aggregate;
  nlohmann::json timing;
  std::vector<ModelParams> params;
  std::vector<TrainConfig> train_cfgs;
};

TrialBundle run_trials(const Structure& st, const FeatureMatrix& features,
                       std::span<const std::int32_t> labels, const RunConfig& cfg) {
  TrialBundle out;
  std::vector<double> accs, f1s, train_times, infer_times;
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t trial_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(t));
    Split sp = make_split(labels, cfg.split_fraction, cfg.stratified, trial_seed);

    TrainConfig tc = cfg.train;
    tc.seed = mix_seed(trial_seed, fnv1a64("train"));
    TrainResult res;
    try {
      res = train(st.incidence, features.rows, labels, sp.train, tc);
    } catch (const std::exception& e) {
      throw StageError("train", e.what());
    }
    Metrics m;
    try {
      m = evaluate(res.params, st.incidence, features.rows, labels, sp.test);
    } catch (const std::exception& e) {
      throw StageError("evaluate", e.what());
    }

    out.trials.push_back({{"trial", t},
                          {"seed", trial_seed},
                          {"train_size", sp.train.size()},
                          {"test_size", sp.test.size()},
                          {"metrics", metrics_to_json(m)},
                          {"timing",
                           {{"train_time_sec", res.train_time_sec},
                            {"inference_time_sec", m.inference_time_sec}}}});
    accs.push_back(m.accuracy);
    f1s.push_back(m.f1_weighted);
    train_times.push_back(res.train_time_sec);
    infer_times.push_back(m.inference_time_sec);
    out.params.push_back(std::move(res.params));
    out.train_cfgs.push_back(tc);
  }
  auto [am, as] = mean_std(accs);
  auto [fm, fs] = mean_std(f1s);
  out.aggregate = {{"accuracy", {{"mean", am}, {"std", as}}},
                   {"f1_weighted", {{"mean", fm}, {"std", fs}}},
                   {"trials", cfg.trials}};
  auto [tm, ts] = mean_std(train_times);
  auto [im, is] = mean_std(infer_times);
  out.timing = {{"train_time_sec", {{"mean", tm}, {"std", ts}}},
                {"inference_time_sec", {{"mean", im}, {"std", is}}}};
  return out;
}

// metrics-only view used for the determinism artifact: no timing, no paths
nlohmann::json strip_to_metrics(const nlohmann::json& trials, const nlohmann::json& aggregate) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& t : trials)
    rows.push_back({{"trial", t["trial"]}, {"seed", t["seed"]}, {"metrics", t["metrics"]}});
  return {{"trials", rows}, {"aggregate", aggregate}};
}

nlohmann::json dataset_summary(const Dataset& ds) {
  std::int64_t fake = 0, nonfake = 0, unknown = 0;
  for (auto l : ds.labels) {
    if (l == 1) ++fake;
    else if (l == 0) ++nonfake;
    else ++unknown;
  }
  return {{"nodes", ds.graph.node_count},
          {"edges", ds.graph.edge_count},
          {"duplicates_collapsed", ds.graph.duplicates_collapsed},
          {"self_loops_dropped", ds.graph.self_loops_dropped},
          {"malformed_lines", ds.parse_stats.malformed_lines},
          {"cascades", ds.cascades.size()},
          {"fake", fake},
          {"nonfake", nonfake},
          {"unknown", unknown}};
}

nlohmann::json structure_summary(const Structure& st) {
  HypergraphStats hs = hypergraph_stats(st.hypergraph);
  return {{"k", st.partition.k},
          {"edge_cut", st.partition.edge_cut},
          {"imbalance", st.partition.imbalance},
          {"hyperedges", hs.hyperedges},
          {"isolated_nodes", hs.isolated_nodes},
          {"mean_edge_degree", hs.mean_edge_degree},
          {"skipped_users", st.hypergraph.skipped_users}};
}

const nlohmann::json kNotes = {
    {"class_index", {{"0", "nonfake"}, {"1", "fake"}}},
    {"inference_time_excludes_featurization", true},
};

}  // namespace

nlohmann::json ablation(const RunConfig& cfg, const std::string& axis) {
  std::vector<double> values;
  if (axis == "layers")
    for (int v : cfg.sweep_layers) values.push_back(v);
  else if (axis == "k")
    for (int v : cfg.sweep_k) values.push_back(v);
  else if (axis == "train_fraction")
    values = cfg.sweep_train_fractions;
  else
    throw StageError("config", "unknown ablation axis: " + axis);
  if (values.empty()) throw StageError("config", "ablation axis " + axis + " has no values");

  Dataset ds = load_dataset(cfg);
  auto t0 = std::chrono::steady_clock::now();
  int eff_dim = 0;
  FeatureMatrix features = build_features(ds, cfg, cfg.seed, &eff_dim);
  const double featurize_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Structure shared;
  bool have_shared = false;
  nlohmann::json rows = nlohmann::json::array();
  for (double v : values) {
    RunConfig variant = cfg;
    if (axis == "layers") variant.train.num_conv_layers = static_cast<int>(v);
    else if (axis == "train_fraction") variant.split_fraction = v;
    else variant.k_clusters = static_cast<int>(v);

    const Structure* st = nullptr;
    Structure own;
    if (axis == "k") {
      own = build_structure(ds, variant, variant.k_clusters, variant.seed);
      st = &own;
    } else {
      if (!have_shared) {
        shared = build_structure(ds, cfg, cfg.k_clusters, cfg.seed);
        have_shared = true;
      }
      st = &shared;
    }
    TrialBundle bundle = run_trials(*st, features, ds.labels, variant);
    rows.push_back({{"axis", axis},
                    {"value", v},
                    {"config", config_to_json(variant)},
                    {"structure", structure_summary(*st)},
                    {"trials", bundle.trials},
                    {"aggregate", bundle.aggregate},
                    {"timing", bundle.timing}});
  }

  nlohmann::json report{{"axis", axis},
                        {"config", config_to_json(cfg)},
                        {"dataset", dataset_summary(ds)},
                        {"features", {{"raw_dim", cfg.features.raw_width()},
                                      {"pca_dim", eff_dim}}},
                        {"timing", {{"featurize_sec", featurize_sec}}},
                        {"rows", rows},
                        {"notes", kNotes}};

  std::filesystem::create_directories(cfg.workdir);
  std::ofstream(cfg.workdir + "/ablation_" + axis + ".json") << report.dump(2) << '\n';
  nlohmann::json metric_rows = nlohmann::json::array();
  for (const auto& row : rows)
    metric_rows.push_back({{"axis", row["axis"]},
                           {"value", row["value"]},
                           {"result", strip_to_metrics(row["trials"], row["aggregate"])}});
  std::ofstream(cfg.workdir + "/ablation_" + axis + "_metrics.json")
      << nlohmann::json{{"seed", cfg.seed}, {"rows", metric_rows}}.dump(2) << '\n';
  return report;
}

nlohmann::json run_pipeline(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.workdir);

  if (!cfg.sweep_k.empty() || !cfg.sweep_layers.empty() || !cfg.sweep_train_fractions.empty()) {
    nlohmann::json combined{{"config", config_to_json(cfg)}, {"rows", nlohmann::json::array()}};
    std::vector<std::string> axes;
    if (!cfg.sweep_k.empty()) axes.push_back("k");
    if (!cfg.sweep_layers.empty()) axes.push_back("layers");
    if (!cfg.sweep_train_fractions.empty()) axes.push_back("train_fraction");
    for (const auto& axis : axes) {
      nlohmann::json rep = ablation(cfg, axis);
      for (auto& row : rep["rows"]) combined["rows"].push_back(std::move(row));
    }
    std::ofstream(cfg.workdir + "/report.json") << combined.dump(2) << '\n';
    nlohmann::json metric_rows = nlohmann::json::array();
    for (const auto& row : combined["rows"])
      metric_rows.push_back({{"axis", row["axis"]},
                             {"value", row["value"]},
                             {"result", strip_to_metrics(row["trials"], row["aggregate"])}});
    std::ofstream(cfg.workdir + "/metrics.json")
        << nlohmann::json{{"seed", cfg.seed}, {"rows", metric_rows}}.dump(2) << '\n';
    return combined;
  }

  Dataset ds = load_dataset(cfg);

  auto t_part0 = std::chrono::steady_clock::now();
  Structure st = build_structure(ds, cfg, cfg.k_clusters, cfg.seed);
  const double partition_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_part0).count();

  auto t_feat0 = std::chrono::steady_clock::now();
  int eff_dim = 0;
  FeatureMatrix features = build_features(ds, cfg, cfg.seed, &eff_dim);
  const double featurize_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_feat0).count();

  TrialBundle bundle = run_trials(st, features, ds.labels, cfg);

  try {
    dump_graph(ds.graph, cfg.workdir + "/graph.txt");
    dump_user_map(ds.interner, cfg.workdir + "/users.txt");
    dump_partition(st.partition, cfg.workdir + "/partition.txt");
    dump_partition_summary(st.partition, cfg.seed, cfg.workdir + "/partition.json");
    dump_hypergraph(st.hypergraph, cfg.workdir + "/hypergraph.txt");
    dump_hypergraph_labels(st.hypergraph, cfg.workdir + "/labels.txt");
    dump_feature_rows(features.rows, cfg.workdir + "/features.txt");
    for (std::size_t t = 0; t < bundle.params.size(); ++t)
      save_checkpoint(bundle.params[t], bundle.train_cfgs[t],
                      cfg.workdir + "/checkpoint_trial" + std::to_string(t) + ".json");
  } catch (const std::exception& e) {
    throw StageError("report", e.what());
  }

  nlohmann::json report{
      {"config", config_to_json(cfg)},
      {"dataset", dataset_summary(ds)},
      {"structure", structure_summary(st)},
      {"features",
       {{"raw_dim", cfg.features.raw_width()},
        {"pca_dim", eff_dim},
        {"explained_variance", features.explained_variance_ratio.sum()}}},
      {"trials", bundle.trials},
      {"aggregate", bundle.aggregate},
      {"timing",
       {{"partition_sec", partition_sec},
        {"featurize_sec", featurize_sec},
        {"train_time_sec", bundle.timing["train_time_sec"]},
        {"inference_time_sec", bundle.timing["inference_time_sec"]}}},
      {"notes", kNotes}};

  std::ofstream(cfg.workdir + "/report.json") << report.dump(2) << '\n';
  nlohmann::json metrics = strip_to_metrics(bundle.trials, bundle.aggregate);
  metrics["seed"] = cfg.seed;
  std::ofstream(cfg.workdir + "/metrics.json") << metrics.dump(2) << '\n';
  return report;
}

std::string report_table(const nlohmann::json& report) {
  std::ostringstream out;
  auto fmt_pair = [](const nlohmann::json& agg) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << agg["mean"].get<double>() << " +/- "
      << agg["std"].get<double>();
    return s.str();
  };
  auto line = [&](const std::string& label, const nlohmann::json& aggregate,
                  const nlohmann::json& timing) {
    out << std::left << std::setw(24) << label << std::setw(20)
        << fmt_pair(aggregate["accuracy"]) << std::setw(20) << fmt_pair(aggregate["f1_weighted"]);
    if (timing.contains("train_time_sec"))
      out << std::setw(20) << fmt_pair(timing["train_time_sec"]) << std::setw(20)
          << fmt_pair(timing["inference_time_sec"]);
    out << '\n';
  };
  out << std::left << std::setw(24) << "run" << std::setw(20) << "accuracy" << std::setw(20)
      << "f1_weighted" << std::setw(20) << "train_sec" << std::setw(20) << "infer_sec" << '\n';
  if (report.contains("rows")) {
    for (const auto& row : report["rows"]) {
      std::ostringstream label;
      label << row["axis"].get<std::string>() << "=" << row["value"].get<double>();
      line(label.str(), row["aggregate"], row["timing"]);
    }
  } else {
    line("pipeline", report["aggregate"], report["timing"]);
  }
  return out.str();
}

}  // namespace cascata
