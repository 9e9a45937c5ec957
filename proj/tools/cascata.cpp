#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cascata/io.hpp"
#include "cascata/model.hpp"
#include "cascata/pipeline.hpp"
#include "cascata/synthetic.hpp"
#include "cascata/types.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

json metrics_json(const cascata::Metrics& m) {
  return {{"accuracy", m.accuracy},
          {"f1_weighted", m.f1_weighted},
          {"precision", {m.precision[0], m.precision[1]}},
          {"recall", {m.recall[0], m.recall[1]}},
          {"f1_per_class", {m.f1[0], m.f1[1]}},
          {"support", {m.support[0], m.support[1]}}};
}

// Everything the standalone train/evaluate commands share with trial 0 of the
// full protocol, so a saved checkpoint reproduces pipeline numbers exactly.
struct Trial0 {
  cascata::Dataset ds;
  cascata::Structure st;
  cascata::FeatureMatrix features;
  cascata::Split split;
  std::uint64_t trial_seed = 0;
};

Trial0 prepare_trial0(const cascata::RunConfig& cfg) {
  Trial0 t;
  t.ds = cascata::load_dataset(cfg);
  t.st = cascata::build_structure(t.ds, cfg, cfg.k_clusters, cfg.seed);
  t.features = cascata::build_features(t.ds, cfg, cfg.seed);
  t.trial_seed = cascata::mix_seed(cfg.seed, 0);
  t.split = cascata::make_split(t.ds.labels, cfg.split_fraction, cfg.stratified, t.trial_seed);
  return t;
}

int run(int argc, char** argv) {
  CLI::App app{"cascata: cascade hypergraph classification pipeline"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  std::string workdir;
  std::string format = "table";
  std::string interactions, cascades, users, partitioner;
  int k = 0;

  auto* o_config = app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--set", sets, "override one config key, key=value (repeatable)")->type_size(1);
  auto* o_seed = app.add_option("--seed", seed, "master RNG seed");
  auto* o_workdir = app.add_option("--workdir", workdir, "artifact directory");
  app.add_option("--format", format, "report rendering for pipeline/ablation")
      ->check(CLI::IsMember({"json", "table"}));
  auto* o_inter = app.add_option("--interactions", interactions, "interactions jsonl path");
  auto* o_casc = app.add_option("--cascades", cascades, "cascades jsonl path");
  auto* o_users = app.add_option("--users", users, "user metadata jsonl path");
  auto* o_k = app.add_option("--k", k, "cluster count");
  auto* o_part = app.add_option("--partitioner", partitioner, "multilevel or louvain");

  auto resolve = [&]() {
    cascata::RunConfig cfg;
    if (o_config->count()) cfg = cascata::load_config_file(config_path, cfg);
    for (const std::string& kv : sets) {
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw cascata::StageError("config", "--set expects key=value, got: " + kv);
      try {
        cascata::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
      } catch (const std::exception& e) {
        throw cascata::StageError("config", std::string("--set ") + kv + ": " + e.what());
      }
    }
    if (o_seed->count()) cfg.seed = seed;
    if (o_workdir->count()) cfg.workdir = workdir;
    if (o_inter->count()) cfg.interactions_path = interactions;
    if (o_casc->count()) cfg.cascades_path = cascades;
    if (o_users->count()) cfg.users_path = users;
    if (o_k->count()) cfg.k_clusters = k;
    if (o_part->count()) {
      if (partitioner != "multilevel" && partitioner != "louvain")
        throw cascata::StageError("config", "partitioner must be multilevel or louvain");
      cfg.partitioner = partitioner;
    }
    return cfg;
  };

  // synth
  auto* sc_synth = app.add_subcommand("synth", "generate a planted-partition dataset");
  cascata::SyntheticSpec spec;
  std::string synth_inter, synth_casc;
  sc_synth->add_option("--users-n", spec.n_users, "user count");
  sc_synth->add_option("--cascades-n", spec.n_cascades, "cascade count");
  sc_synth->add_option("--blocks", spec.n_blocks, "planted block count");
  sc_synth->add_option("--p-intra", spec.p_intra, "intra-block edge probability");
  sc_synth->add_option("--p-inter", spec.p_inter, "inter-block edge probability");
  sc_synth->add_option("--fidelity", spec.label_fidelity, "label fidelity in (0.5, 1]");
  sc_synth->add_option("--participants", spec.participants, "participants per cascade");
  sc_synth->add_option("--interactions-out", synth_inter, "output interactions path");
  sc_synth->add_option("--cascades-out", synth_casc, "output cascades path");
  sc_synth->callback([&]() {
    cascata::RunConfig cfg = resolve();
    spec.seed = cfg.seed;
    fs::create_directories(cfg.workdir);
    std::string pi = synth_inter.empty() ? cfg.workdir + "/interactions.jsonl" : synth_inter;
    std::string pc = synth_casc.empty() ? cfg.workdir + "/cascades.jsonl" : synth_casc;
    cascata::SyntheticStats st = cascata::generate_synthetic(spec, pi, pc);
    emit({{"interactions", pi},
          {"cascades", pc},
          {"background_edges", st.background_edges},
          {"retweets", st.retweets},
          {"cascade_count", st.cascades},
          {"seed", spec.seed}});
  });

  // build-graph
  auto* sc_graph = app.add_subcommand("build-graph", "ingest and dump the social graph");
  sc_graph->callback([&]() {
    cascata::RunConfig cfg = resolve();
    cascata::Dataset ds = cascata::load_dataset(cfg);
    fs::create_directories(cfg.workdir);
    cascata::dump_graph(ds.graph, cfg.workdir + "/graph.txt");
    cascata::dump_user_map(ds.interner, cfg.workdir + "/users.txt");
    std::int64_t fake = 0, nonfake = 0, unknown = 0;
    for (auto l : ds.labels) {
      if (l == 1) ++fake;
      else if (l == 0) ++nonfake;
      else ++unknown;
    }
    emit({{"nodes", ds.graph.node_count},
          {"edges", ds.graph.edge_count},
          {"duplicates_collapsed", ds.graph.duplicates_collapsed},
          {"self_loops_dropped", ds.graph.self_loops_dropped},
          {"cascades", ds.cascades.size()},
          {"labels", {{"fake", fake}, {"nonfake", nonfake}, {"unknown", unknown}}},
          {"malformed_lines", ds.parse_stats.malformed_lines},
          {"unknown_kind", ds.parse_stats.unknown_kind}});
  });

  // partition
  auto* sc_part = app.add_subcommand("partition", "cluster the social graph");
  sc_part->callback([&]() {
    cascata::RunConfig cfg = resolve();
    cascata::Dataset ds = cascata::load_dataset(cfg);
    cascata::Structure st = cascata::build_structure(ds, cfg, cfg.k_clusters, cfg.seed);
    fs::create_directories(cfg.workdir);
    cascata::dump_partition(st.partition, cfg.workdir + "/partition.txt");
    cascata::dump_partition_summary(st.partition, cfg.seed, cfg.workdir + "/partition.json");
    emit({{"partitioner", cfg.partitioner},
          {"k", st.partition.k},
          {"edge_cut", st.partition.edge_cut},
          {"imbalance", st.partition.imbalance},
          {"seed", cfg.seed}});
  });

  // build-hypergraph
  auto* sc_hyper = app.add_subcommand("build-hypergraph", "build the cascade hypergraph");
  sc_hyper->callback([&]() {
    cascata::RunConfig cfg = resolve();
    cascata::Dataset ds = cascata::load_dataset(cfg);
    cascata::Structure st = cascata::build_structure(ds, cfg, cfg.k_clusters, cfg.seed);
    fs::create_directories(cfg.workdir);
    cascata::dump_hypergraph(st.hypergraph, cfg.workdir + "/hypergraph.txt");
    cascata::dump_hypergraph_labels(st.hypergraph, cfg.workdir + "/labels.txt");
    cascata::HypergraphStats hs = cascata::hypergraph_stats(st.hypergraph);
    emit({{"nodes", hs.nodes},
          {"hyperedges", hs.hyperedges},
          {"fake", hs.fake},
          {"non_fake", hs.non_fake},
          {"unknown", hs.unknown},
          {"min_edge_degree", hs.min_edge_degree},
          {"max_edge_degree", hs.max_edge_degree},
          {"mean_edge_degree", hs.mean_edge_degree},
          {"isolated_nodes", hs.isolated_nodes},
          {"skipped_users", st.hypergraph.skipped_users}});
  });

  // featurize
  auto* sc_feat = app.add_subcommand("featurize", "assemble per-cascade feature vectors");
  sc_feat->callback([&]() {
    cascata::RunConfig cfg = resolve();
    cascata::Dataset ds = cascata::load_dataset(cfg);
    int eff = 0;
    cascata::FeatureMatrix fm = cascata::build_features(ds, cfg, cfg.seed, &eff);
    fs::create_directories(cfg.workdir);
    cascata::dump_feature_rows(fm.rows, cfg.workdir + "/features.txt");
    emit({{"rows", fm.rows.rows()},
          {"cols", fm.rows.cols()},
          {"raw_width", fm.pca_basis.rows()},
          {"pca_dim_effective", eff}});
  });

  // train
  auto* sc_train = app.add_subcommand("train", "train on the trial-0 split, save a checkpoint");
  std::string ckpt_out;
  sc_train->add_option("--checkpoint-out", ckpt_out, "checkpoint path");
  sc_train->callback([&]() {
    cascata::RunConfig cfg = resolve();
    Trial0 t = prepare_trial0(cfg);
    cascata::TrainConfig tc = cfg.train;
    tc.seed = cascata::mix_seed(t.trial_seed, cascata::fnv1a64("train"));
    cascata::TrainResult res;
    try {
      res = cascata::train(t.st.incidence, t.features.rows, t.ds.labels, t.split.train, tc);
    } catch (const std::exception& e) {
      throw cascata::StageError("train", e.what());
    }
    fs::create_directories(cfg.workdir);
    std::string path = ckpt_out.empty() ? cfg.workdir + "/checkpoint.json" : ckpt_out;
    cascata::save_checkpoint(res.params, tc, path);
    emit({{"checkpoint", path},
          {"train_size", t.split.train.size()},
          {"epochs", tc.epochs},
          {"final_loss", res.train_loss.empty() ? 0.0 : res.train_loss.back()},
          {"train_time_sec", res.train_time_sec},
          {"seed", tc.seed}});
  });

  // evaluate
  auto* sc_eval = app.add_subcommand("evaluate", "evaluate a checkpoint on the trial-0 split");
  std::string ckpt_in;
  sc_eval->add_option("--checkpoint", ckpt_in, "checkpoint path");
  sc_eval->callback([&]() {
    cascata::RunConfig cfg = resolve();
    std::string path = ckpt_in.empty() ? cfg.workdir + "/checkpoint.json" : ckpt_in;
    auto [params, tc] = cascata::load_checkpoint(path);
    Trial0 t = prepare_trial0(cfg);
    cascata::Metrics m;
    try {
      m = cascata::evaluate(params, t.st.incidence, t.features.rows, t.ds.labels, t.split.test);
    } catch (const std::exception& e) {
      throw cascata::StageError("evaluate", e.what());
    }
    json out = metrics_json(m);
    out["inference_time_sec"] = m.inference_time_sec;
    out["test_size"] = t.split.test.size();
    out["checkpoint"] = path;
    emit(out);
  });

  // pipeline
  auto* sc_pipe = app.add_subcommand("pipeline", "run the full experimental protocol");
  sc_pipe->callback([&]() {
    cascata::RunConfig cfg = resolve();
    json rep = cascata::run_pipeline(cfg);
    if (format == "table")
      std::cout << cascata::report_table(rep);
    else
      emit(rep);
  });

  // ablation
  auto* sc_abl = app.add_subcommand("ablation", "sweep one axis of the protocol");
  std::string axis;
  sc_abl->add_option("--axis", axis, "layers, k or train_fraction")
      ->required()
      ->check(CLI::IsMember({"layers", "k", "train_fraction"}));
  sc_abl->callback([&]() {
    cascata::RunConfig cfg = resolve();
    json rep = cascata::ablation(cfg, axis);
    if (format == "table")
      std::cout << cascata::report_table(rep);
    else
      emit(rep);
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cascata::StageError& e) {
    std::cerr << "error " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error [cli] " << e.what() << "\n";
    return 1;
  }
}
